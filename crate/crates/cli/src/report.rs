//! Serializable verification reports.

use std::collections::BTreeMap;

use num_complex::Complex64;
use riemann_scatter_core::geometry::CertificateReport;
use riemann_scatter_core::CMat;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Report format version.
pub const REPORT_VERSION: &str = "1";

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Measured residual; `null` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    /// Passing iff `residual ≤ tolerance`.
    pub fn measured(residual: f64, tolerance: f64) -> Self {
        Self {
            residual: residual.is_finite().then_some(residual),
            tolerance,
            pass: residual <= tolerance,
            error: None,
        }
    }

    /// A check whose evaluation raised an error.
    pub fn failed(tolerance: f64, error: impl Into<String>) -> Self {
        Self {
            residual: None,
            tolerance,
            pass: false,
            error: Some(error.into()),
        }
    }
}

/// Checks of one suite, keyed by identity name.
pub type SuiteChecks = BTreeMap<String, Check>;

/// Certificate block of a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub pass: bool,
    /// `null` when the margin is undefined (for example `r ≥ R`).
    pub margin: Option<f64>,
    pub extension_radius: Option<f64>,
}

impl From<CertificateReport> for Certificate {
    fn from(c: CertificateReport) -> Self {
        Self {
            pass: c.pass,
            margin: c.margin.is_finite().then_some(c.margin),
            extension_radius: c.extension_radius.is_finite().then_some(c.extension_radius),
        }
    }
}

/// Output of `validate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub version: String,
    pub config: RunConfig,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Wall-clock timing, present only on request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Seconds per suite.
    pub suites: BTreeMap<String, f64>,
    pub total: f64,
}

/// Matrix written as rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

/// Converts a complex matrix to its JSON form.
pub fn matrix_json(a: &CMat) -> MatrixJson {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| pair(a[(i, j)])).collect())
        .collect()
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Output of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub truncation: usize,
    pub quadrature: usize,
    pub seed: u64,
    pub pass: bool,
    pub suites: BTreeMap<String, SuiteChecks>,
    /// Checks that do not apply to the configuration, with the reason.
    pub skipped: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<BTreeMap<String, MatrixJson>>,
    pub timing: Option<Timing>,
}

impl Report {
    /// Names of failing checks as `suite.check`.
    pub fn failures(&self) -> Vec<String> {
        self.suites
            .iter()
            .flat_map(|(s, checks)| {
                checks
                    .iter()
                    .filter(|(_, c)| !c.pass)
                    .map(move |(name, _)| format!("{s}.{name}"))
            })
            .collect()
    }

    /// Largest finite residual over all checks.
    pub fn max_residual(&self) -> f64 {
        self.suites
            .values()
            .flat_map(|c| c.values())
            .filter_map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}
