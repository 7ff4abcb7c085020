//! Limit functionals over posterior fields: the fixed-x (pointwise)
//! discrepancy, the data-averaged (probability) discrepancy, the local
//! Bayes check over the high-mass data region, and trend verdicts.

use crate::density::{l1_distance, quantile_region, NormalizedDensity};
use crate::error::{Error, Result};
use crate::model::PosteriorField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    PointwiseAtX,
    Probability,
    LocalBayes,
}

/// Diagnostic values tabulated across taper indices n.
#[derive(Debug, Clone)]
pub struct DiagnosticSeries {
    entries: Vec<(f64, f64)>,
    candidate_label: String,
    kind: DiagnosticKind,
}

impl DiagnosticSeries {
    pub fn new(candidate_label: impl Into<String>, kind: DiagnosticKind) -> Self {
        DiagnosticSeries {
            entries: Vec::new(),
            candidate_label: candidate_label.into(),
            kind,
        }
    }

    pub fn push(&mut self, n: f64, value: f64) -> Result<()> {
        if !n.is_finite() || n <= 0.0 || !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "series entries need positive n and finite nonnegative value, got ({n}, {value})"
            )));
        }
        if let Some(&(last, _)) = self.entries.last() {
            if n <= last {
                return Err(Error::InvalidArgument(format!(
                    "n must be strictly increasing, got {n} after {last}"
                )));
            }
        }
        self.entries.push((n, value));
        Ok(())
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn candidate_label(&self) -> &str {
        &self.candidate_label
    }

    pub fn kind(&self) -> DiagnosticKind {
        self.kind
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    ConvergesToZero,
    Plateau,
    Inconclusive,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::ConvergesToZero => "converges_to_zero",
            VerdictStatus::Plateau => "plateau",
            VerdictStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Trend summary of a diagnostic series: fitted d log(value) / d log(n),
/// last value, and the resulting status.
#[derive(Debug, Clone, Copy)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub slope: f64,
    pub final_value: f64,
}

/// The per-x discrepancy ∫ |π_n(θ|x) - candidate(θ|x)| dθ at fixed x.
pub fn pointwise_diagnostic(
    field_n: &PosteriorField,
    candidate: &PosteriorField,
    x: f64,
) -> Result<f64> {
    if !field_n.shares_grids(candidate) {
        return Err(Error::GridMismatch(
            "pointwise_diagnostic requires fields on shared grids".into(),
        ));
    }
    let i = field_n.x_grid().nearest_index(x)?;
    l1_distance(field_n.column(i), candidate.column(i))
}

/// The same discrepancy averaged over the marginal data density:
/// ∫ [∫ |π_n(θ|x) - candidate(θ|x)| dθ] m_n(x) dx.
///
/// Accumulated in ascending x for bitwise determinism.
pub fn probability_diagnostic(
    field_n: &PosteriorField,
    candidate: &PosteriorField,
    m_n: &NormalizedDensity,
) -> Result<f64> {
    if !field_n.shares_grids(candidate) {
        return Err(Error::GridMismatch(
            "probability_diagnostic requires fields on shared grids".into(),
        ));
    }
    if !m_n.grid().matches(field_n.x_grid()) {
        return Err(Error::GridMismatch(
            "marginal density must live on the field's x-grid".into(),
        ));
    }
    let n = field_n.x_grid().len();
    let h = field_n.x_grid().step();
    let mut acc = 0.0;
    for i in 0..n {
        let d = l1_distance(field_n.column(i), candidate.column(i))?;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * h * m_n.values()[i] * d;
    }
    Ok(acc)
}

/// Sup of the per-x discrepancy over the central `coverage` region of m_n.
pub fn local_bayes_check(
    field_n: &PosteriorField,
    candidate: &PosteriorField,
    m_n: &NormalizedDensity,
    coverage: f64,
) -> Result<f64> {
    if !field_n.shares_grids(candidate) {
        return Err(Error::GridMismatch(
            "local_bayes_check requires fields on shared grids".into(),
        ));
    }
    if !m_n.grid().matches(field_n.x_grid()) {
        return Err(Error::GridMismatch(
            "marginal density must live on the field's x-grid".into(),
        ));
    }
    let (lo, hi) = quantile_region(m_n, coverage);
    let mut worst = 0.0f64;
    for (i, x) in field_n.x_grid().points().enumerate() {
        if x >= lo && x <= hi {
            worst = worst.max(l1_distance(field_n.column(i), candidate.column(i))?);
        }
    }
    Ok(worst)
}

const VALUE_FLOOR: f64 = 1e-12;

/// Decide whether a diagnostic series tends to zero, from finitely many n.
///
/// Least-squares slope of log(value) vs log(n); values below 1e-12 are
/// clamped before taking logs. Requires at least 3 entries spanning two
/// decades of n.
pub fn convergence_verdict(series: &DiagnosticSeries) -> Result<Verdict> {
    let entries = series.entries();
    if entries.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 entries, got {}",
            entries.len()
        )));
    }
    let span = entries[entries.len() - 1].0 / entries[0].0;
    if span < 100.0 {
        return Err(Error::InsufficientData(format!(
            "n must span at least two decades, got ratio {span}"
        )));
    }
    let pts: Vec<(f64, f64)> = entries
        .iter()
        .map(|&(n, v)| (n.ln(), v.max(VALUE_FLOOR).ln()))
        .collect();
    let k = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    let final_value = entries[entries.len() - 1].1;

    let status = if slope <= -0.2 && final_value < 0.1 {
        VerdictStatus::ConvergesToZero
    } else if slope.abs() < 0.05 && final_value >= 0.1 {
        VerdictStatus::Plateau
    } else {
        VerdictStatus::Inconclusive
    };
    Ok(Verdict {
        status,
        slope,
        final_value,
    })
}
