use crate::error::{Error, Result};

/// A uniform one-dimensional evaluation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n_points: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidArgument(format!(
                "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points, got {n_points}"
            )));
        }
        Ok(Grid1D { lo, hi, n_points })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Uniform spacing between adjacent points.
    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        self.lo + i as f64 * self.step()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    /// Index of the grid point closest to `x`, if `x` lies within half a
    /// step of the grid.
    pub fn nearest_index(&self, x: f64) -> Result<usize> {
        let h = self.step();
        let raw = ((x - self.lo) / h).round();
        if raw < 0.0 || raw > (self.n_points - 1) as f64 {
            return Err(Error::GridMismatch(format!(
                "point {x} outside grid [{}, {}]",
                self.lo, self.hi
            )));
        }
        let i = raw as usize;
        if (x - self.point(i)).abs() > 0.5 * h + 1e-9 * (self.hi - self.lo) {
            return Err(Error::GridMismatch(format!(
                "point {x} not aligned with grid step {h}"
            )));
        }
        Ok(i)
    }

    /// Same bounds and resolution.
    pub fn matches(&self, other: &Grid1D) -> bool {
        self == other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_bounds() {
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        assert!(Grid1D::new(2.0, 1.0, 10).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn step_and_points() {
        let g = Grid1D::new(0.0, 1.0, 101).unwrap();
        assert!((g.step() - 0.01).abs() < 1e-15);
        assert_eq!(g.len(), 101);
        assert!((g.point(100) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nearest_index_snaps_within_half_step() {
        let g = Grid1D::new(-1.0, 1.0, 201).unwrap();
        assert_eq!(g.nearest_index(0.0).unwrap(), 100);
        assert_eq!(g.nearest_index(0.004).unwrap(), 100);
        assert!(g.nearest_index(1.5).is_err());
    }
}
