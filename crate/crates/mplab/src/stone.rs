//! Closed-form reference quantities for the exponentially tilted Gaussian
//! location example (Stone's example).
//!
//! The model is X ~ N(θ, 1) with improper prior exp(aθ), approximated by the
//! proper sequence π_n(θ) ∝ exp(aθ - θ²/2n). Everything here is exact
//! arithmetic in (mean, variance) pairs; tabulation onto grids happens only
//! at comparison boundaries.

use crate::density::{normalize, GriddedDensity, NormalizedDensity};
use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Mean/variance pair for a Gaussian density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub mean: f64,
    pub variance: f64,
}

impl GaussianParams {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !(variance > 0.0) || !mean.is_finite() || !variance.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Gaussian needs finite mean and positive variance, got ({mean}, {variance})"
            )));
        }
        Ok(GaussianParams { mean, variance })
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let z = x - self.mean;
        (-0.5 * z * z / self.variance).exp()
            / (2.0 * std::f64::consts::PI * self.variance).sqrt()
    }

    pub fn density_on(&self, grid: &Grid1D) -> GriddedDensity {
        GriddedDensity::from_fn(grid.clone(), |x| self.pdf(x))
            .expect("Gaussian pdf is finite and nonnegative")
    }

    /// Tabulate and renormalize on the (truncated) grid.
    pub fn normalized_on(&self, grid: &Grid1D) -> Result<NormalizedDensity> {
        normalize(&self.density_on(grid))
    }
}

/// Tilt rate and taper index for the prior sequence exp(aθ - θ²/2n).
#[derive(Debug, Clone, Copy)]
pub struct StoneConfig {
    pub a: f64,
    pub n: f64,
}

impl StoneConfig {
    pub fn new(a: f64, n: f64) -> Result<Self> {
        if !(n > 0.0) || !a.is_finite() || !n.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "taper index must be positive, got n = {n}"
            )));
        }
        Ok(StoneConfig { a, n })
    }

    /// Posterior shrinkage factor σ_n² = n / (1 + n).
    pub fn sigma_sq(&self) -> f64 {
        self.n / (1.0 + self.n)
    }
}

/// Posterior under the n-th proper prior: N(σ_n²(x + a), σ_n²).
pub fn stone_posterior_exact(cfg: StoneConfig, x: f64) -> GaussianParams {
    let s2 = cfg.sigma_sq();
    GaussianParams {
        mean: s2 * (x + cfg.a),
        variance: s2,
    }
}

/// Marginal data density under the n-th proper prior: N(an, 1 + n).
pub fn stone_marginal_exact(cfg: StoneConfig) -> GaussianParams {
    GaussianParams {
        mean: cfg.a * cfg.n,
        variance: 1.0 + cfg.n,
    }
}

/// The fixed-x limit of the posteriors, which equals the formal posterior:
/// N(x + a, 1).
pub fn stone_pointwise_limit(a: f64, x: f64) -> GaussianParams {
    GaussianParams {
        mean: x + a,
        variance: 1.0,
    }
}

/// The data-averaged limit: N(x, 1), independent of the tilt rate.
pub fn stone_probability_limit(x: f64) -> GaussianParams {
    GaussianParams {
        mean: x,
        variance: 1.0,
    }
}
