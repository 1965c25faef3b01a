//! `htk`: evaluate kernels, run verification suites and emit gauge-sphere profiles.

mod eval;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use htk_core::group::HTypeGroup;
use htk_core::quadrature::QuadratureConfig;
use htk_core::verify::{self, Selection, SuiteOptions};
use htk_core::HtkError;
use serde::Serialize;
use std::path::Path;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "htk", version, about = "Heat kernels and fractional fundamental solutions on H-type groups")]
struct Cli {
    /// output format; json for eval and verify, csv for profile unless given
    #[arg(long, global = true, env = "HTK_FORMAT", value_enum)]
    format: Option<Format>,
    /// worker threads for `verify`; 1 is serial, 0 lets rayon decide
    #[arg(long, global = true, env = "HTK_THREADS", default_value_t = 1)]
    threads: usize,
    /// seed for the sampled checks
    #[arg(long, global = true, env = "HTK_SEED")]
    seed: Option<u64>,
    /// relative tolerance handed to the quadrature routines
    #[arg(long, global = true, env = "HTK_REL_TOL", default_value_t = 1e-10)]
    rel_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one kernel or fundamental solution at a point.
    #[command(allow_negative_numbers = true)]
    Eval(eval::EvalArgs),
    /// Run named verification checks and print one JSON report per line.
    Verify {
        /// check name, or `all`; repeatable
        #[arg(long = "suite", default_value = "all")]
        suites: Vec<String>,
        /// h1, h2, quat, hN or a path to a {m, k, J} JSON descriptor; repeatable
        #[arg(long = "group", env = "HTK_GROUP")]
        groups: Vec<String>,
        #[arg(long, env = "HTK_TOLERANCE_SCALE", default_value_t = 1.0)]
        tolerance_scale: f64,
        /// report wall_time as 0 so that repeated runs print identical bytes
        #[arg(long)]
        no_wall_time: bool,
        /// list the registered checks and exit
        #[arg(long)]
        list: bool,
    },
    /// Sample E^(s) and E_(s) around a gauge sphere.
    #[command(allow_negative_numbers = true)]
    Profile {
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        gauge_radius: f64,
        #[arg(long, default_value_t = 9)]
        samples: usize,
        #[arg(long, env = "HTK_GROUP", default_value = "h1")]
        group: String,
    },
}

/// Failures mapped to exit codes: usage and domain errors give 2, failed checks give 1.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    ChecksFailed,
}

impl From<HtkError> for Failure {
    fn from(e: HtkError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

pub fn parse_group(spec: &str) -> Result<HTypeGroup, Failure> {
    match spec {
        "quat" | "quaternionic" => Ok(HTypeGroup::quaternionic()),
        _ => {
            if let Some(n) = spec.strip_prefix('h').and_then(|n| n.parse::<usize>().ok()) {
                if n == 0 {
                    return Err(Failure::Usage("heisenberg groups start at h1".into()));
                }
                return Ok(HTypeGroup::heisenberg(n));
            }
            let path = Path::new(spec);
            if !path.exists() {
                return Err(Failure::Usage(format!("unknown group `{spec}` (expected h1, h2, quat or a JSON file)")));
            }
            Ok(HTypeGroup::from_json_file(path)?)
        }
    }
}

#[derive(Serialize)]
struct ProfileLine {
    theta: f64,
    u: f64,
    z_norm: f64,
    sigma_norm: f64,
    nonconformal: f64,
    conformal: f64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = QuadratureConfig::default().with_rel_tol(cli.rel_tol);
    cfg.validate()?;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Eval(args) => {
            let record = eval::evaluate(&args, &cfg)?;
            output::write_records(&mut out, cli.format.unwrap_or(Format::Json), &[record])
        }
        Command::Verify { suites, groups, tolerance_scale, no_wall_time, list } => {
            if list {
                for spec in verify::registry() {
                    output::line(&mut out, &format!("{}\t{}", spec.name, spec.summary))?;
                }
                return Ok(());
            }
            if !(tolerance_scale > 0.0) {
                return Err(Failure::Usage("tolerance scale must be positive".into()));
            }
            let selection = if suites.iter().any(|s| s == "all") {
                Selection::All
            } else {
                for s in &suites {
                    verify::find_check(s)?;
                }
                Selection::Names(suites)
            };
            let groups = if groups.is_empty() { vec!["h1".to_string()] } else { groups };
            let groups = groups.iter().map(|g| parse_group(g)).collect::<Result<Vec<_>, _>>()?;
            let parallel = cli.threads != 1;
            if parallel {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(cli.threads)
                    .build_global()
                    .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
            }
            let options = SuiteOptions { tolerance_scale, seed: cli.seed, parallel };
            let mut result = verify::run_suite(&selection, &groups, &cfg, &options)?;
            if no_wall_time {
                result.reports.iter_mut().for_each(|r| r.wall_time = 0.0);
            }
            output::write_reports(&mut out, cli.format.unwrap_or(Format::Json), &result.reports)?;
            if result.all_passed {
                Ok(())
            } else {
                Err(Failure::ChecksFailed)
            }
        }
        Command::Profile { s, gauge_radius, samples, group } => {
            if samples < 2 {
                return Err(Failure::Usage("a profile needs at least two samples".into()));
            }
            let g = parse_group(&group)?;
            let cfg = cfg.with_abs_tol(1e-300);
            let rows = htk_core::fundsol::gauge_profile(g.m(), g.k(), s, gauge_radius, samples, &cfg)?;
            let lines: Vec<ProfileLine> = rows
                .iter()
                .map(|r| ProfileLine {
                    theta: r.theta,
                    u: r.theta.sin(),
                    z_norm: r.z_norm,
                    sigma_norm: r.sigma_norm,
                    nonconformal: r.nonconformal,
                    conformal: r.conformal,
                })
                .collect();
            match cli.format.unwrap_or(Format::Csv) {
                Format::Json => output::write_json_lines(&mut out, &lines),
                Format::Csv => output::write_csv(&mut out, &lines),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
