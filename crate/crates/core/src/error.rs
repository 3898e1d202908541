//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures raised by assembly, solvers and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatterError {
    /// A configuration violates a precondition (univalence certificate, radii order, slice heights).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A quadrature or series did not stabilise when the resolution was doubled.
    #[error("non-convergent {what}: change {change:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergent { what: String, change: f64, tolerance: f64 },

    /// Intermediate series coefficients exceeded the configured magnitude bound.
    #[error("series overflow: coefficient magnitude {magnitude:.3e} exceeds bound {bound:.3e}")]
    SeriesOverflow { magnitude: f64, bound: f64 },

    /// A Gram matrix or linear system is too badly conditioned to be trusted.
    #[error("ill-conditioned {what}: condition number {condition:.3e} exceeds {limit:.3e}")]
    IllConditioned { what: String, condition: f64, limit: f64 },

    /// A least-squares fit or boundary match left a misfit above tolerance.
    #[error("residual {residual:.3e} exceeds tolerance {tolerance:.3e} in {what}")]
    ResidualTooLarge {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    /// A kernel was evaluated on its singular set.
    #[error("kernel evaluated at a singular point")]
    SingularPoint,

    /// An evaluation point lies too close to the separating curve.
    #[error("sample point at distance {distance:.3e} from the curve (minimum {minimum:.3e})")]
    SampleNearCurve { distance: f64, minimum: f64 },

    /// Series and quadrature assembly of the same block disagree.
    #[error("assembly methods disagree: max entry difference {difference:.3e} exceeds {tolerance:.3e}")]
    MethodDisagreement { difference: f64, tolerance: f64 },

    /// Operands have incompatible shapes.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A singular value sits too close to the rank threshold to decide the rank.
    #[error("singular value {sigma:.3e} lies within a factor 10 of the threshold {threshold:.3e}")]
    ThresholdAmbiguous { sigma: f64, threshold: f64 },

    /// A one-form that must have vanishing boundary periods does not.
    #[error("form is not semi-exact: period residual {period:.3e}")]
    NotSemiExact { period: f64 },

    /// A boundary-value problem has data outside the range of its operator.
    #[error("data not in the range of the operator: residual {residual:.3e}")]
    NotSolvable { residual: f64 },

    /// The lattice-sum tail bound is above the requested accuracy.
    #[error("lattice-sum tail bound {bound:.3e} exceeds tolerance {tolerance:.3e}")]
    TailTooLarge { bound: f64, tolerance: f64 },

    /// The operation does not apply to the given configuration variant.
    #[error("operation not supported for this configuration: {0}")]
    Unsupported(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, ScatterError>;
