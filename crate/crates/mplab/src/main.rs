use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mplab::cli::{execute_run, OutputFormat, RunConfig};
use mplab::scenario::list_scenarios;

/// Grid laboratory for improper-prior approximations and two-route
/// marginal-posterior comparisons.
#[derive(Parser)]
#[command(name = "mplab", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a registered scenario and write report files.
    Run {
        /// Scenario name (see `list`).
        #[arg(long)]
        scenario: Option<String>,
        /// Tilt rate for the location scenarios.
        #[arg(long)]
        a: Option<f64>,
        /// Comma-separated taper indices, strictly increasing.
        #[arg(long = "n-list")]
        n_list: Option<String>,
        /// Central data-region coverage for the local check.
        #[arg(long)]
        coverage: Option<f64>,
        /// Points per grid axis.
        #[arg(long = "grid-points")]
        grid_points: Option<usize>,
        /// Optional key=value config file; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for report.csv / report.json.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// csv, json, or both.
        #[arg(long, default_value = "both")]
        format: String,
    },
    /// List the registered scenarios.
    List,
}

fn run(args: Args) -> mplab::Result<()> {
    match args.command {
        Command::List => {
            print!("{}", list_scenarios());
            Ok(())
        }
        Command::Run {
            scenario,
            a,
            n_list,
            coverage,
            grid_points,
            config,
            out,
            format,
        } => {
            let mut cfg = RunConfig::default();
            if let Some(path) = &config {
                cfg.apply_file(path)?;
            }
            if let Some(s) = scenario {
                cfg.scenario = s;
            }
            if let Some(v) = a {
                cfg.a = v;
            }
            if let Some(s) = &n_list {
                cfg.n_list = mplab::cli::parse_n_list(s)?;
            }
            if let Some(v) = coverage {
                cfg.coverage = v;
            }
            if let Some(v) = grid_points {
                cfg.grid_points = v;
            }
            let format = OutputFormat::parse(&format)?;
            execute_run(&cfg, &out, format)?;
            println!("wrote reports for scenario '{}' to {}", cfg.scenario, out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
