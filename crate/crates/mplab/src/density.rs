//! Gridded densities: quadrature, normalization, and distances.
//!
//! Everything downstream reduces to trapezoidal integrals of nonnegative
//! function values on a uniform grid.

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Nonnegative function values tabulated on a grid. Not necessarily
/// normalized; may be the truncation of an improper density.
#[derive(Debug, Clone)]
pub struct GriddedDensity {
    grid: Grid1D,
    values: Vec<f64>,
}

impl GriddedDensity {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "density values must be finite and nonnegative, found {v}"
            )));
        }
        Ok(GriddedDensity { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        GriddedDensity::new(grid, values)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// A gridded density whose trapezoidal integral is 1.
#[derive(Debug, Clone)]
pub struct NormalizedDensity(GriddedDensity);

impl NormalizedDensity {
    pub fn grid(&self) -> &Grid1D {
        self.0.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    pub fn as_density(&self) -> &GriddedDensity {
        &self.0
    }

    pub fn into_density(self) -> GriddedDensity {
        self.0
    }
}

/// Trapezoidal integral of `values` over a uniform grid with step `h`.
pub(crate) fn trapezoid(h: f64, values: &[f64]) -> f64 {
    let n = values.len();
    let interior: f64 = values[1..n - 1].iter().sum();
    h * (interior + 0.5 * (values[0] + values[n - 1]))
}

/// Trapezoidal-rule integral of a density over its grid.
pub fn integrate(d: &GriddedDensity) -> f64 {
    trapezoid(d.grid().step(), d.values())
}

/// Scale a density so it integrates to 1.
///
/// Fails with `ZeroMass` when the integral is zero or not finite, which is
/// how a density that is still improper on this grid announces itself.
pub fn normalize(d: &GriddedDensity) -> Result<NormalizedDensity> {
    let mass = integrate(d);
    if !mass.is_finite() || mass <= 0.0 {
        return Err(Error::ZeroMass(format!(
            "cannot normalize density with integral {mass}"
        )));
    }
    let values = d.values().iter().map(|v| v / mass).collect();
    Ok(NormalizedDensity(GriddedDensity::new(
        d.grid().clone(),
        values,
    )?))
}

/// Total-variation style distance: the un-halved integral of |p - q|.
/// Ranges over [0, 2] for normalized inputs.
pub fn l1_distance(p: &NormalizedDensity, q: &NormalizedDensity) -> Result<f64> {
    if !p.grid().matches(q.grid()) {
        return Err(Error::GridMismatch(
            "l1_distance requires identical grids".into(),
        ));
    }
    let diffs: Vec<f64> = p
        .values()
        .iter()
        .zip(q.values())
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(trapezoid(p.grid().step(), &diffs))
}

/// Entropy of `p` relative to the base measure: -∫ p log(p / base).
///
/// Convention 0·log 0 = 0. When `base` is itself normalized this is at most
/// zero, with equality iff p = base (Gibbs' inequality).
pub fn relative_entropy(p: &NormalizedDensity, base: &GriddedDensity) -> Result<f64> {
    if !p.grid().matches(base.grid()) {
        return Err(Error::GridMismatch(
            "relative_entropy requires identical grids".into(),
        ));
    }
    let mut integrand = Vec::with_capacity(p.values().len());
    for (i, (&pv, &bv)) in p.values().iter().zip(base.values()).enumerate() {
        if pv == 0.0 {
            integrand.push(0.0);
        } else if bv == 0.0 {
            return Err(Error::SupportViolation(format!(
                "p > 0 where base = 0 at grid point {}",
                p.grid().point(i)
            )));
        } else {
            integrand.push(pv * (pv / bv).ln());
        }
    }
    Ok(-trapezoid(p.grid().step(), &integrand))
}

/// Smallest grid-aligned interval holding at least `coverage` of the mass,
/// centered in probability: tail mass at most (1 - coverage)/2 on each side.
pub fn quantile_region(m: &NormalizedDensity, coverage: f64) -> (f64, f64) {
    assert!(
        coverage > 0.0 && coverage < 1.0,
        "coverage must lie in (0, 1)"
    );
    let grid = m.grid();
    let h = grid.step();
    let v = m.values();
    let n = v.len();
    // cumulative trapezoidal mass up to each grid point
    let mut cum = vec![0.0; n];
    for i in 1..n {
        cum[i] = cum[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
    }
    let total = cum[n - 1];
    let tail = 0.5 * (1.0 - coverage) * total;
    let mut i_lo = 0;
    while i_lo + 1 < n && cum[i_lo + 1] <= tail {
        i_lo += 1;
    }
    let mut i_hi = n - 1;
    while i_hi > 0 && total - cum[i_hi - 1] <= tail {
        i_hi -= 1;
    }
    if i_lo > i_hi {
        std::mem::swap(&mut i_lo, &mut i_hi);
    }
    (grid.point(i_lo), grid.point(i_hi))
}
