//! Grid laboratory for improper-prior approximation.
//!
//! The crate tabulates posterior families under sequences of proper priors
//! that taper an improper one, measures their distance to candidate limiting
//! posteriors both at fixed data and averaged over the data distribution, and
//! tests whether a family of marginal posteriors can be reconciled with a
//! reduced model by any prior at all. Everything runs on explicit finite
//! grids with trapezoidal quadrature, so every number is reproducible
//! bit-for-bit.

pub mod cli;
pub mod density;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod model;
pub mod mp;
pub mod report;
pub mod scenario;
pub mod stone;

pub use density::{
    integrate, l1_distance, normalize, quantile_region, relative_entropy, GriddedDensity,
    NormalizedDensity,
};
pub use diagnostics::{
    convergence_verdict, local_bayes_check, pointwise_diagnostic, probability_diagnostic,
    DiagnosticKind, DiagnosticSeries, Verdict, VerdictStatus,
};
pub use error::{Error, Result};
pub use grid::Grid1D;
pub use model::{
    formal_posterior, gaussian_location_model, marginal_data_density, posterior, posterior_field,
    stone_prior_sequence, LikelihoodModel, PosteriorField, PriorSequence,
};
pub use mp::{
    b1_marginal_posterior, b2_marginal_posterior, bayes_compatibility_residual,
    check_z_depends_only_on_zeta, log_separability_residual, proper_prior_routes, run_mp_scenario,
    JointModel, LogQuad, MarginalPosteriorFamily, MpPrior, MpReport, MpScenario, MpVerdict,
    ReducedModel,
};
pub use report::{LimitReport, LimitRow, MpCheckRow, MpRunReport, RunReport, SeriesVerdict};
pub use scenario::{
    exp_ratio_joint, exp_ratio_proper_scenario, exp_ratio_reduced, exp_ratio_scenario,
    list_scenarios, run_exp_ratio, run_limit_scenario, LimitScenarioConfig, SCENARIOS,
};
pub use stone::{
    stone_marginal_exact, stone_pointwise_limit, stone_posterior_exact, stone_probability_limit,
    GaussianParams, StoneConfig,
};
