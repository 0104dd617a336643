use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hirob_cli::checks::{reduce_problem, run_check, RunConfig};
use hirob_cli::ingest::{ingest_returns, SetType};
use hirob_cli::report::summarize;
use hirob_cli::schema::{canonical_bytes, parse_file};
use hirob_cli::CliError;

/// Certification toolkit for uncertain multi-objective programs.
#[derive(Parser)]
#[command(name = "hirob", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CheckArgs {
    /// Problem file (JSON).
    problem: PathBuf,
    /// Candidate point name from the problem file.
    #[arg(long, default_value = "xbar")]
    candidate: String,
    /// Check suite(s) to run; repeat or comma-separate.
    #[arg(long, value_delimiter = ',', default_values_t = vec!["highly-robust".to_string()])]
    suite: Vec<String>,
    /// Lattice points per axis for grid oracles.
    #[arg(long, default_value_t = hirob_core::constants::DEFAULT_GRID)]
    grid: usize,
    /// Scenario resolution per uncertainty coordinate.
    #[arg(long, default_value_t = 11)]
    scenario_res: usize,
    /// Neighborhood radius for local checks (omit for a global search).
    #[arg(long)]
    radius: Option<f64>,
    /// Use the default local radius (quarter box diameter).
    #[arg(long, conflicts_with = "radius")]
    local: bool,
    /// Robust-feasibility tolerance.
    #[arg(long, default_value_t = hirob_core::constants::FEAS_TOL)]
    tol: f64,
    /// Seed for deterministic scenario sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ray scaling grid for polyhedral scenario construction.
    #[arg(long, value_delimiter = ',')]
    gamma_grid: Option<Vec<f64>>,
    /// Record wall times in the report (breaks byte-identical reruns).
    #[arg(long)]
    timings: bool,
    /// Write the report here (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run certifier suites on a candidate and emit a canonical report.
    Check(CheckArgs),
    /// Reduce an equal-uncertainty problem to diagonal scenarios.
    Reduce {
        problem: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the worst-case and set-based robustness checks.
    Worstcase(CheckArgs),
    /// Build a portfolio problem file from a CSV of historical returns.
    Ingest {
        returns: PathBuf,
        /// Trailing window length in rows.
        #[arg(long)]
        window: usize,
        /// Uncertainty set kind for the return vector.
        #[arg(long, default_value = "box")]
        set_type: String,
        /// Investment budget (weights satisfy sum <= budget).
        #[arg(long, default_value_t = 1.0)]
        budget: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a saved report and replay its exit code.
    Report { report: PathBuf },
}

fn check_config(args: &CheckArgs, suites_override: Option<Vec<String>>) -> RunConfig {
    RunConfig {
        candidate: args.candidate.clone(),
        suites: suites_override.unwrap_or_else(|| args.suite.clone()),
        grid: args.grid,
        scenario_res: args.scenario_res,
        radius: args.radius,
        local: args.local,
        tol: args.tol,
        seed: args.seed,
        gamma_grid: args
            .gamma_grid
            .clone()
            .unwrap_or_else(|| hirob_core::constants::DEFAULT_GAMMA_GRID.to_vec()),
        timings: args.timings,
    }
}

fn write_or_print(bytes: &[u8], out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check(args) => {
            let file = parse_file(&args.problem)?;
            let report = run_check(&file, &check_config(&args, None))?;
            write_or_print(&report.to_canonical_bytes(), args.out.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Worstcase(args) => {
            let file = parse_file(&args.problem)?;
            let config = check_config(
                &args,
                Some(vec!["worst-case".to_string(), "set-based".to_string()]),
            );
            let report = run_check(&file, &config)?;
            write_or_print(&report.to_canonical_bytes(), args.out.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Reduce { problem, out } => {
            let file = parse_file(&problem)?;
            match reduce_problem(&file)? {
                Some(reduced) => {
                    write_or_print(&canonical_bytes(&reduced)?, out.as_ref())?;
                    Ok(0)
                }
                None => {
                    eprintln!("not applicable: uncertainty sets differ structurally");
                    Ok(0)
                }
            }
        }
        Command::Ingest {
            returns,
            window,
            set_type,
            budget,
            out,
        } => {
            let set_type: SetType = set_type.parse()?;
            let file = ingest_returns(&returns, window, set_type, budget)?;
            write_or_print(&canonical_bytes(&file)?, out.as_ref())?;
            Ok(0)
        }
        Command::Report { report } => {
            let bytes = std::fs::read(&report)
                .map_err(|e| CliError::Io(format!("{}: {e}", report.display())))?;
            let (text, exit) = summarize(&bytes)?;
            print!("{text}");
            Ok(exit)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
