//! Library side of the `riemann-scatter` command: configuration parsing, the verification
//! suites, report serialization and parameter sweeps.

pub mod config;
pub mod report;
pub mod suites;
pub mod sweep;

use riemann_scatter_core::ScatterError;
use thiserror::Error;

pub use config::RunConfig;
pub use report::Report;
pub use suites::{verify, Suite, VerifyOptions};

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed JSON, unknown keys or an unreadable file.
    #[error("parse error: {0}")]
    Parse(String),
    /// The configuration failed validation.
    #[error(transparent)]
    Invalid(ScatterError),
    /// A quadrature or series failed to stabilise.
    #[error(transparent)]
    NonConvergent(ScatterError),
    /// Any other numerical failure.
    #[error(transparent)]
    Core(ScatterError),
    /// At least one identity check failed.
    #[error("{} check(s) failed: {}", .0.len(), .0.join(", "))]
    ChecksFailed(Vec<String>),
}

impl CliError {
    /// Exit code of the process.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Core(_) | CliError::ChecksFailed(_) => 3,
            CliError::NonConvergent(_) => 4,
        }
    }
}

/// Reads and parses a configuration file.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    RunConfig::from_json(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Certificate check of a configuration, returning the report and its outcome.
pub fn validate(cfg: &RunConfig) -> (report::ValidationReport, Result<(), CliError>) {
    let outcome = suites::validate_run_config(cfg);
    let rep = report::ValidationReport {
        version: report::REPORT_VERSION.to_string(),
        config: cfg.clone(),
        pass: outcome.is_ok(),
        certificate: suites::curve_certificate(cfg),
        error: outcome.as_ref().err().map(|e| e.to_string()),
    };
    (rep, outcome.map_err(CliError::Invalid))
}

/// Serializes a value as pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
