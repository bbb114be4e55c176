use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rballoc::{allocate_with, brute_force_discrete, Scenario64, DEFAULT_TIE_TOLERANCE};
use thiserror::Error;

use crate::output::{write_complexity_csv, write_oracle_csv, write_pool_csv, write_sweep_csv};
use crate::report::report_complexity;
use crate::scenario::{load_scenario, ScenarioError};
use crate::sweep::run_sweep;

#[derive(Debug, Parser)]
#[command(name = "rballoc", version, about = "Utility-proportional-fair resource block allocation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoolMode {
    All,
    Max,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Allocate RBs for one eNB bandwidth.
    Allocate {
        #[arg(long)]
        scenario: PathBuf,
        /// eNB bandwidth R; overrides the scenario file.
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long, value_enum, default_value = "all")]
        pool: PoolMode,
        #[arg(long, default_value_t = DEFAULT_TIE_TOLERANCE)]
        tie_tol: f64,
        /// Output CSV; '-' for stdout.
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Allocate over a range of eNB bandwidths.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Write 0 in the wall-time column so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Candidate counts of full search versus boundary mapping.
    Complexity {
        /// Inclusive UE count range, e.g. `1..100`.
        #[arg(long, value_parser = parse_range)]
        ues: (u32, u32),
        #[arg(long)]
        candidates: u32,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Exhaustive grid search, reported next to the boundary mapping result.
    Oracle {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        rate: Option<f64>,
        /// Grid bound Q per UE.
        #[arg(long)]
        grid: u32,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("bad range start: {e}"))?;
    let hi: u32 = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("bad range end: {e}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("range {lo}..{hi} must satisfy 1 <= a <= b"));
    }
    Ok((lo, hi))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {reason}")]
    Output { path: String, reason: String },
    #[error(transparent)]
    Allocation(#[from] rballoc::Error),
    /// The sweep finished but some rows carry an error flag.
    #[error("{0} sweep row(s) failed")]
    FailedRows(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(_) | CliError::Input(_) | CliError::Output { .. } => 1,
            CliError::Allocation(rballoc::Error::InvalidScenario(_)) => 1,
            CliError::Allocation(_) | CliError::FailedRows(_) => 2,
        }
    }
}

fn open_out(path: &Path) -> Result<Box<dyn Write>, CliError> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdout().lock()));
    }
    let f = File::create(path).map_err(|e| CliError::Output {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    Ok(Box::new(BufWriter::new(f)))
}

fn written(path: &Path, r: csv::Result<()>) -> Result<(), CliError> {
    r.map_err(|e| CliError::Output {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn scenario_at(path: &Path, rate: Option<f64>) -> Result<Scenario64, CliError> {
    let s = load_scenario(path)?;
    let Some(r) = rate else { return Ok(s) };
    let s = s.with_bandwidth(r);
    s.validate().map_err(|e| CliError::Input(format!("--rate {r}: {e}")))?;
    Ok(s)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Allocate {
            scenario,
            rate,
            pool,
            tie_tol,
            out,
        } => {
            if !(tie_tol >= 0.0) {
                return Err(CliError::Input(format!("--tie-tol {tie_tol} must be >= 0")));
            }
            let s = scenario_at(&scenario, rate)?;
            let result = allocate_with(&s, tie_tol)?;
            let c = &result.continuous;
            eprintln!(
                "R = {}: price {:.6e}, {} iteration(s), converged = {}, {} feasible, {} maximizer(s)",
                s.bandwidth,
                c.price,
                c.iterations,
                c.converged,
                result.feasible_pool.len(),
                result.maximizers.len()
            );
            written(&out, write_pool_csv(open_out(&out)?, &result, pool == PoolMode::Max))
        }
        Command::Sweep {
            scenario,
            from,
            to,
            step,
            no_timing,
            out,
        } => {
            let s = load_scenario(&scenario)?;
            let rows = run_sweep(&s, from, to, step, !no_timing)
                .map_err(|e| CliError::Input(e.to_string()))?;
            written(&out, write_sweep_csv(open_out(&out)?, &rows, s.len()))?;
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            if failed > 0 {
                return Err(CliError::FailedRows(failed));
            }
            Ok(())
        }
        Command::Complexity {
            ues: (lo, hi),
            candidates,
            out,
        } => {
            if candidates == 0 {
                return Err(CliError::Input("--candidates must be >= 1".into()));
            }
            let rows = report_complexity(lo..=hi, candidates);
            written(&out, write_complexity_csv(open_out(&out)?, &rows))
        }
        Command::Oracle {
            scenario,
            rate,
            grid,
            out,
        } => {
            let s = scenario_at(&scenario, rate)?;
            let oracle = brute_force_discrete(&s, grid).map_err(|e| match e {
                rballoc::Error::OracleGuard(msg) => CliError::Input(msg),
                other => CliError::Allocation(other),
            })?;
            // the boundary side may legitimately fail (exhausted bandwidth);
            // the oracle row is still worth reporting
            let boundary = match allocate_with(&s, 0.0) {
                Ok(a) => Some(a.maximizers[0].clone()),
                Err(e) => {
                    eprintln!("boundary mapping: {e}");
                    None
                }
            };
            written(&out, write_oracle_csv(open_out(&out)?, &oracle, boundary.as_ref()))
        }
    }
}
