//! Likelihood models, proper-prior sequences, and the grid Bayes engine.

use rayon::prelude::*;

use crate::density::{integrate, normalize, trapezoid, GriddedDensity, NormalizedDensity};
use crate::error::{Error, Result};
use crate::grid::Grid1D;

type Eval2 = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A sampling density p(x|θ), evaluated pointwise.
pub struct LikelihoodModel {
    eval: Eval2,
    label: String,
}

impl LikelihoodModel {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        LikelihoodModel {
            eval: Box::new(eval),
            label: label.into(),
        }
    }

    /// p(x|θ)
    pub fn density(&self, theta: f64, x: f64) -> f64 {
        (self.eval)(theta, x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Check that x ↦ p(x|θ) integrates to 1 on the x-grid, for a probe set
    /// of θ values. Done once per scenario at configuration time.
    pub fn validate_normalization(
        &self,
        theta_probes: &[f64],
        x_grid: &Grid1D,
        tol: f64,
    ) -> Result<()> {
        for &theta in theta_probes {
            let slice: Vec<f64> = x_grid.points().map(|x| self.density(theta, x)).collect();
            let mass = trapezoid(x_grid.step(), &slice);
            if (mass - 1.0).abs() > tol {
                return Err(Error::Truncation(format!(
                    "likelihood '{}' integrates to {mass} at theta = {theta} (tol {tol})",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// An indexed family n ↦ unnormalized proper prior density.
pub struct PriorSequence {
    eval: Eval2,
    label: String,
}

impl PriorSequence {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        PriorSequence {
            eval: Box::new(eval),
            label: label.into(),
        }
    }

    /// π_n(θ), unnormalized.
    pub fn value(&self, n: f64, theta: f64) -> f64 {
        (self.eval)(n, theta)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Tabulate the n-th member on a grid.
    pub fn tabulate(&self, n: f64, grid: &Grid1D) -> Result<GriddedDensity> {
        GriddedDensity::from_fn(grid.clone(), |theta| self.value(n, theta))
    }
}

/// The taper family exp(aθ - θ²/2n): for each n, proportional to a Gaussian
/// with mean an and variance n.
///
/// Evaluated in the completed-square form exp(-(θ - an)²/2n), which is equal
/// up to an n-dependent constant and stays inside f64 range for large |aθ|.
pub fn stone_prior_sequence(a: f64) -> PriorSequence {
    PriorSequence::new(format!("exp({a}*theta) taper"), move |n, theta| {
        let d = theta - a * n;
        (-d * d / (2.0 * n)).exp()
    })
}

/// Per-x normalized conditional densities over θ, one column per x-grid point.
pub struct PosteriorField {
    theta_grid: Grid1D,
    x_grid: Grid1D,
    columns: Vec<NormalizedDensity>,
}

impl PosteriorField {
    pub fn new(theta_grid: Grid1D, x_grid: Grid1D, columns: Vec<NormalizedDensity>) -> Result<Self> {
        if columns.len() != x_grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} columns, got {}",
                x_grid.len(),
                columns.len()
            )));
        }
        if let Some(c) = columns.iter().find(|c| !c.grid().matches(&theta_grid)) {
            return Err(Error::GridMismatch(format!(
                "column grid [{}, {}] differs from field theta grid",
                c.grid().lo(),
                c.grid().hi()
            )));
        }
        Ok(PosteriorField {
            theta_grid,
            x_grid,
            columns,
        })
    }

    /// Build a field from a per-x density generator (used to tabulate
    /// closed-form candidate limits).
    pub fn from_column_fn(
        theta_grid: &Grid1D,
        x_grid: &Grid1D,
        f: impl Fn(f64) -> GriddedDensity + Send + Sync,
    ) -> Result<Self> {
        let columns = x_grid
            .points()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|x| normalize(&f(x)))
            .collect::<Result<Vec<_>>>()?;
        PosteriorField::new(theta_grid.clone(), x_grid.clone(), columns)
    }

    pub fn theta_grid(&self) -> &Grid1D {
        &self.theta_grid
    }

    pub fn x_grid(&self) -> &Grid1D {
        &self.x_grid
    }

    pub fn column(&self, i: usize) -> &NormalizedDensity {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[NormalizedDensity] {
        &self.columns
    }

    pub fn shares_grids(&self, other: &PosteriorField) -> bool {
        self.theta_grid.matches(&other.theta_grid) && self.x_grid.matches(&other.x_grid)
    }
}

/// π(θ|x) ∝ p(x|θ) π(θ), normalized on the θ-grid.
pub fn posterior(
    model: &LikelihoodModel,
    prior: &GriddedDensity,
    x: f64,
) -> Result<NormalizedDensity> {
    let grid = prior.grid();
    let values: Vec<f64> = grid
        .points()
        .zip(prior.values())
        .map(|(theta, &p)| model.density(theta, x) * p)
        .collect();
    let product = GriddedDensity::new(grid.clone(), values)?;
    normalize(&product).map_err(|e| e.in_context(format!("posterior at x = {x}")))
}

/// Prior-predictive density m(x) = ∫ p(x|θ) π(θ) dθ, normalized on the
/// x-grid. Errors if more than 1e-3 of the predictive mass escapes the grid.
pub fn marginal_data_density(
    model: &LikelihoodModel,
    prior: &NormalizedDensity,
    x_grid: &Grid1D,
) -> Result<NormalizedDensity> {
    let theta_grid = prior.grid();
    let h_theta = theta_grid.step();
    let raw: Vec<f64> = x_grid
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x| {
            let integrand: Vec<f64> = theta_grid
                .points()
                .zip(prior.values())
                .map(|(theta, &p)| model.density(theta, x) * p)
                .collect();
            trapezoid(h_theta, &integrand)
        })
        .collect();
    let raw = GriddedDensity::new(x_grid.clone(), raw)?;
    let mass = integrate(&raw);
    let escaping = (1.0 - mass).max(0.0);
    if escaping > 1e-3 {
        return Err(Error::Truncation(format!(
            "predictive mass {escaping:.3e} falls outside the x-grid; widen the bounds"
        )));
    }
    normalize(&raw)
}

/// Tabulate π(θ|x) for every x-grid point. Columns are independent and
/// computed in parallel; results are deterministic.
pub fn posterior_field(
    model: &LikelihoodModel,
    prior: &GriddedDensity,
    x_grid: &Grid1D,
) -> Result<PosteriorField> {
    let columns = x_grid
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|x| posterior(model, prior, x))
        .collect::<Result<Vec<_>>>()?;
    PosteriorField::new(prior.grid().clone(), x_grid.clone(), columns)
}

/// Per-x normalized product with an improper prior truncated to the θ-grid.
///
/// Numerically identical to [`posterior_field`]; the distinction is that the
/// prior's mass may diverge off-grid, so columns are formal posteriors.
pub fn formal_posterior(
    model: &LikelihoodModel,
    improper_prior: &GriddedDensity,
    x_grid: &Grid1D,
) -> Result<PosteriorField> {
    posterior_field(model, improper_prior, x_grid)
}

/// Gaussian location likelihood N(θ, 1).
pub fn gaussian_location_model() -> LikelihoodModel {
    let c = (2.0 * std::f64::consts::PI).sqrt().recip();
    LikelihoodModel::new("N(theta, 1)", move |theta, x| {
        let d = x - theta;
        c * (-0.5 * d * d).exp()
    })
}
