//! Fixtures shared by the operator benchmarks.

use riemann_scatter_core::geometry::{CurveConfig, ExteriorMapPoly};
use riemann_scatter_core::linalg::c64;

/// The single-curve configurations benchmarked, with a short label.
pub fn curves() -> Vec<(&'static str, CurveConfig)> {
    vec![
        (
            "joukowski",
            CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::joukowski(c64(0.4, 0.0))),
        ),
        (
            "general",
            CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::new(
                c64(0.1, -0.2),
                vec![c64(0.2, 0.1), c64(-0.05, 0.08), c64(0.02, 0.0)],
            )),
        ),
    ]
}

/// Truncations at which series assembly is timed.
pub const TRUNCATIONS: [usize; 3] = [8, 16, 32];

/// Truncations at which quadrature assembly is timed; the monomial Gram matrix exceeds its
/// condition limit beyond these.
pub const QUADRATURE_TRUNCATIONS: [usize; 2] = [8, 16];

/// Boundary nodes used for quadrature assembly at truncation `n`.
pub fn quadrature_nodes(n: usize) -> usize {
    (32 * n).max(512)
}
