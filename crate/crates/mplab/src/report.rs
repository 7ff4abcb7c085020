//! Report structures and deterministic CSV/JSON rendering.

use serde::Serialize;

/// One diagnostic row per taper index n.
#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub n: f64,
    pub d_pt_x0: f64,
    pub d_prob_pt: f64,
    pub d_prob_prob: f64,
    pub local_bayes: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesVerdict {
    pub series: String,
    pub status: String,
    pub slope: f64,
    pub final_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub scenario: String,
    pub a: f64,
    pub coverage: f64,
    pub grid_points: usize,
    pub x0: f64,
    pub rows: Vec<LimitRow>,
    pub verdicts: Vec<SeriesVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MpCheckRow {
    pub check: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MpRunReport {
    pub scenario: String,
    pub checks: Vec<MpCheckRow>,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum RunReport {
    Limit(LimitReport),
    Mp(MpRunReport),
}

/// 17 significant digits: enough to round-trip any f64 through text.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

impl RunReport {
    pub fn to_csv(&self) -> String {
        match self {
            RunReport::Limit(r) => {
                let mut out = String::from("n,D_pt_x0,D_prob_pt,D_prob_prob,local_bayes\n");
                for row in &r.rows {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        fmt17(row.n),
                        fmt17(row.d_pt_x0),
                        fmt17(row.d_prob_pt),
                        fmt17(row.d_prob_prob),
                        fmt17(row.local_bayes)
                    ));
                }
                out
            }
            RunReport::Mp(r) => {
                let mut out = String::from("check,value,verdict\n");
                for row in &r.checks {
                    out.push_str(&format!("{},{},{}\n", row.check, fmt17(row.value), r.verdict));
                }
                out
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
