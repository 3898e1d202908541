use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use riemann_scatter_cli::sweep::{parse_grid, sweep_rows, to_csv, SweepParam};
use riemann_scatter_cli::{load_config, to_json, validate, verify, CliError, Suite, VerifyOptions};

/// Schiffer operators, scattering matrices and their identities on genus-zero curves and
/// the square torus.
#[derive(Parser)]
#[command(name = "riemann-scatter", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    config: PathBuf,
    /// Truncation N (overrides the configuration).
    #[arg(long)]
    n: Option<usize>,
    /// Boundary quadrature size M (overrides the configuration).
    #[arg(long)]
    m: Option<usize>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the univalence certificate and the configuration bounds.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites and write a JSON report.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Include operator blocks in the report.
        #[arg(long)]
        blocks: bool,
        /// Record wall-clock timings (the report is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Sweep one parameter and write a CSV table.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Comma-separated parameter values.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        grid: String,
    },
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Validate { common } => {
            let cfg = load_config(&common.config)?;
            let (rep, outcome) = validate(&cfg);
            emit(common.out.as_deref(), &to_json(&rep))?;
            outcome?;
        }
        Command::Verify {
            common,
            suite,
            blocks,
            timing,
        } => {
            let cfg = load_config(&common.config)?;
            let opts = VerifyOptions {
                suite,
                truncation: common.n,
                quadrature: common.m,
                blocks,
                timing,
            };
            let rep = verify(&cfg, &opts)?;
            emit(common.out.as_deref(), &to_json(&rep))?;
            let failures = rep.failures();
            if !failures.is_empty() {
                return Err(CliError::ChecksFailed(failures).into());
            }
        }
        Command::Sweep { common, param, grid } => {
            let cfg = load_config(&common.config)?;
            let grid = parse_grid(&grid)?;
            let rows = sweep_rows(&cfg, param, &grid, common.n)?;
            emit(common.out.as_deref(), &to_csv(param, &rows))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the parse-error code; help and version succeed
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}
