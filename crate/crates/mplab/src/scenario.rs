//! Built-in scenarios: the tilted and untilted Gaussian location tapers, a
//! Gaussian scale model, and the two-exponential ratio model for the
//! two-route marginal-posterior comparison.

use crate::density::{normalize, GriddedDensity};
use crate::diagnostics::{
    convergence_verdict, local_bayes_check, pointwise_diagnostic, probability_diagnostic,
    DiagnosticKind, DiagnosticSeries,
};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::model::{
    gaussian_location_model, marginal_data_density, posterior_field, stone_prior_sequence,
    LikelihoodModel, PosteriorField, PriorSequence,
};
use crate::mp::{
    run_mp_scenario, JointModel, LogQuad, MpPrior, MpScenario, ReducedModel,
};
use crate::report::{LimitReport, LimitRow, MpCheckRow, MpRunReport, SeriesVerdict};
use crate::stone::{stone_pointwise_limit, stone_probability_limit};

/// Registered scenario names with one-line descriptions, in listing order.
pub const SCENARIOS: &[(&str, &str)] = &[
    (
        "stone",
        "Gaussian location model under exponentially tilted proper-prior tapers",
    ),
    (
        "translation",
        "Gaussian location model under untilted tapers of the uniform prior",
    ),
    (
        "scale",
        "Gaussian scale model under lognormal tapers of the 1/sigma prior",
    ),
    (
        "exp-ratio",
        "two-exponential ratio model: two-route marginal posterior comparison",
    ),
];

/// Stable, byte-identical listing of the registered scenarios.
pub fn list_scenarios() -> String {
    let mut out = String::new();
    for (name, desc) in SCENARIOS {
        out.push_str(name);
        out.push_str("  ");
        out.push_str(desc);
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone)]
pub struct LimitScenarioConfig {
    pub name: String,
    pub a: f64,
    pub n_list: Vec<f64>,
    pub grid_points: usize,
    pub coverage: f64,
}

impl LimitScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::Config("n-list must be nonempty".into()));
        }
        for w in self.n_list.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::Config("n-list must be strictly increasing".into()));
            }
        }
        if self.n_list[0] <= 0.0 || !self.n_list.iter().all(|n| n.is_finite()) {
            return Err(Error::Config("n-list entries must be positive and finite".into()));
        }
        if !(self.coverage > 0.0 && self.coverage < 1.0) {
            return Err(Error::Config(format!(
                "coverage must lie in (0, 1), got {}",
                self.coverage
            )));
        }
        if self.grid_points < 2 {
            return Err(Error::Config("grid-points must be at least 2".into()));
        }
        Ok(())
    }
}

/// Which limit family a scenario name selects.
enum LimitKind {
    Location { a: f64 },
    Scale,
}

/// Everything the diagnostics need at one taper index.
struct LimitStep {
    model: LikelihoodModel,
    prior: GriddedDensity,
    x_grid: Grid1D,
    candidate_pointwise: PosteriorField,
    candidate_probability: PosteriorField,
}

/// Location grids are built per taper index: the data window an ± 8 sd of the
/// closed-form marginal, widened to keep the fixed diagnostic points 0 and 1
/// on-grid. A single window across all n would force posterior products at
/// data values hundreds of standard deviations from a small-n prior, which
/// underflow to zero mass; per-n windows keep every column representable.
fn location_grids(a: f64, n: f64, points: usize) -> Result<(Grid1D, Grid1D)> {
    let sd = (1.0 + n).sqrt();
    let x_lo = (-2.0f64).min(a * n - 8.0 * sd);
    let x_hi = 2.0f64.max(a * n + 8.0 * sd);
    let theta_lo = x_lo + a.min(0.0) - 9.0;
    let theta_hi = x_hi + a.max(0.0) + 9.0;
    Ok((
        Grid1D::new(theta_lo, theta_hi, points)?,
        Grid1D::new(x_lo, x_hi, points)?,
    ))
}

fn location_step(a: f64, n: f64, points: usize) -> Result<LimitStep> {
    let (theta_grid, x_grid) = location_grids(a, n, points)?;
    let model = gaussian_location_model();

    // validate where the x-grid can actually hold the sampling mass
    let margin = 9.0;
    let probes: Vec<f64> = (0..64)
        .map(|i| x_grid.lo() + margin + (x_grid.hi() - x_grid.lo() - 2.0 * margin) * i as f64 / 63.0)
        .collect();
    model
        .validate_normalization(&probes, &x_grid, 1e-4)
        .map_err(|e| e.in_context("likelihood validation"))?;

    let candidate_pointwise = PosteriorField::from_column_fn(&theta_grid, &x_grid, |x| {
        stone_pointwise_limit(a, x).density_on(&theta_grid)
    })?;
    let candidate_probability = PosteriorField::from_column_fn(&theta_grid, &x_grid, |x| {
        stone_probability_limit(x).density_on(&theta_grid)
    })?;
    let prior = stone_prior_sequence(a).tabulate(n, &theta_grid)?;

    Ok(LimitStep {
        model,
        prior,
        x_grid,
        candidate_pointwise,
        candidate_probability,
    })
}

fn scale_step(n: f64, points: usize) -> Result<LimitStep> {
    let sigma_grid = Grid1D::new(0.5, 60.0, points)?;
    let x_grid = Grid1D::new(-480.0, 480.0, points)?;
    let c = (2.0 * std::f64::consts::PI).sqrt().recip();
    let model = LikelihoodModel::new("N(0, sigma^2)", move |sigma, x| {
        c / sigma * (-0.5 * x * x / (sigma * sigma)).exp()
    });
    let probes: Vec<f64> = (0..32).map(|i| 0.5 + 59.5 * i as f64 / 31.0).collect();
    model
        .validate_normalization(&probes, &x_grid, 1e-4)
        .map_err(|e| e.in_context("likelihood validation"))?;

    // tapers of the scale-invariant prior: lognormal in sigma
    let priors = PriorSequence::new("1/sigma taper", |n, sigma| {
        let t = sigma.ln();
        (-t * t / (2.0 * n)).exp() / sigma
    });
    let prior = priors.tabulate(n, &sigma_grid)?;

    // the formal posterior under 1/sigma serves as both candidate limits;
    // for the scale family they coincide
    let improper = GriddedDensity::from_fn(sigma_grid.clone(), |s| s.recip())?;
    let formal = crate::model::formal_posterior(&model, &improper, &x_grid)?;
    let formal2 = crate::model::formal_posterior(&model, &improper, &x_grid)?;

    Ok(LimitStep {
        model,
        prior,
        x_grid,
        candidate_pointwise: formal,
        candidate_probability: formal2,
    })
}

/// Run the per-n diagnostics for one of the limit scenarios.
pub fn run_limit_scenario(cfg: &LimitScenarioConfig) -> Result<LimitReport> {
    cfg.validate()?;
    let (a, kind) = match cfg.name.as_str() {
        "stone" => (cfg.a, LimitKind::Location { a: cfg.a }),
        "translation" => (0.0, LimitKind::Location { a: 0.0 }),
        "scale" => (0.0, LimitKind::Scale),
        other => {
            return Err(Error::Config(format!("unknown limit scenario '{other}'")));
        }
    };
    let x0 = 0.0;

    let mut rows = Vec::with_capacity(cfg.n_list.len());
    let mut series = [
        DiagnosticSeries::new("pointwise_limit", DiagnosticKind::PointwiseAtX),
        DiagnosticSeries::new("pointwise_limit", DiagnosticKind::Probability),
        DiagnosticSeries::new("probability_limit", DiagnosticKind::Probability),
        DiagnosticSeries::new("probability_limit", DiagnosticKind::LocalBayes),
    ];

    for &n in &cfg.n_list {
        let step = match kind {
            LimitKind::Location { a } => location_step(a, n, cfg.grid_points),
            LimitKind::Scale => scale_step(n, cfg.grid_points),
        }
        .map_err(|e| e.in_context(format!("setup at n = {n}")))?;

        let field = posterior_field(&step.model, &step.prior, &step.x_grid)
            .map_err(|e| e.in_context(format!("posterior field at n = {n}")))?;
        let prior_norm = normalize(&step.prior)?;
        let m = marginal_data_density(&step.model, &prior_norm, &step.x_grid)
            .map_err(|e| e.in_context(format!("marginal data density at n = {n}")))?;

        let d_pt_x0 = pointwise_diagnostic(&field, &step.candidate_pointwise, x0)?;
        let d_prob_pt = probability_diagnostic(&field, &step.candidate_pointwise, &m)?;
        let d_prob_prob = probability_diagnostic(&field, &step.candidate_probability, &m)?;
        let local = local_bayes_check(&field, &step.candidate_probability, &m, cfg.coverage)?;

        series[0].push(n, d_pt_x0)?;
        series[1].push(n, d_prob_pt)?;
        series[2].push(n, d_prob_prob)?;
        series[3].push(n, local)?;
        rows.push(LimitRow {
            n,
            d_pt_x0,
            d_prob_pt,
            d_prob_prob,
            local_bayes: local,
        });
    }

    let names = [
        "D_pt_x0_vs_pointwise_limit",
        "D_prob_vs_pointwise_limit",
        "D_prob_vs_probability_limit",
        "local_bayes_vs_probability_limit",
    ];
    let verdicts = names
        .iter()
        .zip(&series)
        .map(|(name, s)| match convergence_verdict(s) {
            Ok(v) => SeriesVerdict {
                series: name.to_string(),
                status: v.status.as_str().to_string(),
                slope: v.slope,
                final_value: v.final_value,
            },
            Err(_) => SeriesVerdict {
                series: name.to_string(),
                status: "insufficient_data".to_string(),
                slope: 0.0,
                final_value: s.entries().last().map(|e| e.1).unwrap_or(0.0),
            },
        })
        .collect();

    Ok(LimitReport {
        scenario: cfg.name.clone(),
        a,
        coverage: cfg.coverage,
        grid_points: cfg.grid_points,
        x0,
        rows,
        verdicts,
    })
}

// ---------------------------------------------------------------------------
// exponential-ratio model
//
// y1 ~ Exponential(eta), y2 ~ Exponential(zeta * eta), observed as
// (y, z) = (y1, y2/y1). Joint density zeta eta^2 y exp(-eta y (1 + zeta z));
// the z-marginal zeta / (1 + zeta z)^2 is free of eta.
// ---------------------------------------------------------------------------

pub const EXP_RATIO_DEFAULT_POINTS: usize = 801;

fn exp_ratio_density(y: f64, z: f64, eta: f64, zeta: f64) -> f64 {
    zeta * eta * eta * y * (-eta * y * (1.0 + zeta * z)).exp()
}

fn exp_ratio_joint_with(points: usize, quad_points: usize) -> Result<JointModel> {
    Ok(JointModel::new(
        "exp-ratio",
        exp_ratio_density,
        Grid1D::new(1e-3, 30.0, points)?,
        Grid1D::new(0.05, 20.0, points)?,
        Grid1D::new(1e-3, 40.0, points)?,
        Grid1D::new(0.05, 20.0, points)?,
        LogQuad::new(1e-9, 1e6, quad_points)?,
        LogQuad::new(1e-6, 4e3, quad_points)?,
    ))
}

pub fn exp_ratio_joint(points: usize) -> Result<JointModel> {
    exp_ratio_joint_with(points, 801)
}

pub fn exp_ratio_reduced(points: usize) -> Result<ReducedModel> {
    Ok(ReducedModel::new(
        |z, zeta| {
            let u = 1.0 + zeta * z;
            zeta / (u * u)
        },
        Grid1D::new(0.05, 20.0, points)?,
        Grid1D::new(0.05, 20.0, points)?,
    ))
}

/// The built-in paradox instance: uniform improper prior dη dζ.
pub fn exp_ratio_scenario(points: usize) -> Result<MpScenario> {
    Ok(MpScenario {
        label: "exp-ratio".into(),
        joint: exp_ratio_joint(points)?,
        reduced: exp_ratio_reduced(points)?,
        prior: MpPrior::Improper(Box::new(|_, _| 1.0)),
        reference_y: 1.0,
        y_probes: vec![0.5, 1.0, 2.0],
        structure_tol: 1e-6,
        compat_tol: 1e-6,
    })
}

/// The same joint model under a proper product prior; both routes must agree.
///
/// Route one marginalizes y as well as η, which nests the quadratures four
/// deep, so this variant defaults to lighter quadrature rules; the log-spaced
/// rules keep far more accuracy than the comparison needs.
pub fn exp_ratio_proper_scenario(points: usize) -> Result<MpScenario> {
    Ok(MpScenario {
        label: "exp-ratio-proper".into(),
        joint: exp_ratio_joint_with(points, 201)?,
        reduced: exp_ratio_reduced(points)?,
        prior: MpPrior::Proper(Box::new(|eta: f64, zeta: f64| {
            let de = eta - 3.0;
            let dz = zeta - 2.0;
            (-0.5 * de * de).exp() * (-0.5 * dz * dz).exp()
        })),
        reference_y: 1.0,
        y_probes: vec![0.5, 1.0, 2.0],
        structure_tol: 1e-6,
        compat_tol: 1e-6,
    })
}

/// Run the exponential-ratio scenario end to end.
pub fn run_exp_ratio(points: usize) -> Result<MpRunReport> {
    let scenario = exp_ratio_scenario(points)?;
    scenario
        .joint
        .validate_normalization(9, 1e-3)
        .map_err(|e| e.in_context("joint model validation"))?;
    let report = run_mp_scenario(&scenario).map_err(|e| e.in_context("exp-ratio scenario"))?;
    Ok(MpRunReport {
        scenario: "exp-ratio".into(),
        checks: vec![
            MpCheckRow {
                check: "z_marginal_variation".into(),
                value: report.z_marginal_variation,
            },
            MpCheckRow {
                check: "y_independence_variation".into(),
                value: report.y_independence_variation,
            },
            MpCheckRow {
                check: "compatibility_residual_b1".into(),
                value: report.compatibility_residual_b1,
            },
            MpCheckRow {
                check: "compatibility_residual_b2".into(),
                value: report.compatibility_residual_b2,
            },
        ],
        verdict: report.verdict.as_str().to_string(),
    })
}
