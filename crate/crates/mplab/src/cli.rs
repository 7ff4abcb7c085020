//! Run configuration, config-file parsing, and report output.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::report::RunReport;
use crate::scenario::{
    run_exp_ratio, run_limit_scenario, LimitScenarioConfig, EXP_RATIO_DEFAULT_POINTS, SCENARIOS,
};

pub const DEFAULT_GRID_POINTS: usize = 4001;
pub const DEFAULT_COVERAGE: f64 = 0.95;
pub const DEFAULT_A: f64 = 1.0;
pub const DEFAULT_N_LIST: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "both" => Ok(OutputFormat::Both),
            other => Err(Error::Config(format!(
                "format must be csv, json, or both, got '{other}'"
            ))),
        }
    }
}

/// Fully resolved run parameters after merging defaults, config file, and
/// command-line flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: String,
    pub a: f64,
    pub n_list: Vec<f64>,
    pub coverage: f64,
    pub grid_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: "stone".into(),
            a: DEFAULT_A,
            n_list: DEFAULT_N_LIST.to_vec(),
            coverage: DEFAULT_COVERAGE,
            grid_points: DEFAULT_GRID_POINTS,
        }
    }
}

pub fn parse_n_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("invalid n-list entry '{}'", tok.trim())))
        })
        .collect()
}

impl RunConfig {
    /// Apply one `key = value` setting; unknown keys are config errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "scenario" => self.scenario = value.to_string(),
            "a" => {
                self.a = value
                    .parse()
                    .map_err(|_| Error::Config(format!("invalid a '{value}'")))?
            }
            "n-list" => self.n_list = parse_n_list(value)?,
            "coverage" => {
                self.coverage = value
                    .parse()
                    .map_err(|_| Error::Config(format!("invalid coverage '{value}'")))?
            }
            "grid-points" => {
                self.grid_points = value
                    .parse()
                    .map_err(|_| Error::Config(format!("invalid grid-points '{value}'")))?
            }
            other => return Err(Error::Config(format!("unknown config key '{other}'"))),
        }
        Ok(())
    }

    /// Load `key = value` lines from a file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "{}:{}: expected key = value, got '{line}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !SCENARIOS.iter().any(|(name, _)| *name == self.scenario) {
            return Err(Error::Config(format!(
                "unknown scenario '{}'; run 'list' for the registry",
                self.scenario
            )));
        }
        if self.scenario != "exp-ratio" {
            self.limit_config().validate()?;
        } else if self.grid_points < 2 {
            return Err(Error::Config("grid-points must be at least 2".into()));
        }
        Ok(())
    }

    fn limit_config(&self) -> LimitScenarioConfig {
        LimitScenarioConfig {
            name: self.scenario.clone(),
            a: self.a,
            n_list: self.n_list.clone(),
            grid_points: self.grid_points,
            coverage: self.coverage,
        }
    }
}

/// Run the configured scenario and write report.csv / report.json to `out`.
pub fn execute_run(cfg: &RunConfig, out: &Path, format: OutputFormat) -> Result<()> {
    cfg.validate()?;
    let report = if cfg.scenario == "exp-ratio" {
        let points = if cfg.grid_points == DEFAULT_GRID_POINTS {
            EXP_RATIO_DEFAULT_POINTS
        } else {
            cfg.grid_points
        };
        RunReport::Mp(run_exp_ratio(points)?)
    } else {
        RunReport::Limit(run_limit_scenario(&cfg.limit_config())?)
    };

    fs::create_dir_all(out)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", out.display())))?;
    if matches!(format, OutputFormat::Csv | OutputFormat::Both) {
        let path = out.join("report.csv");
        fs::write(&path, report.to_csv())
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    if matches!(format, OutputFormat::Json | OutputFormat::Both) {
        let path = out.join("report.json");
        fs::write(&path, report.to_json())
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
