//! Shared generators for the integration tests.

#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use riemann_scatter_core::geometry::{CurveConfig, ExteriorMapPoly};
use riemann_scatter_core::linalg::c64;

/// A nonzero complex number with modulus in `[0.2, 1]`.
pub fn unit_scale() -> impl Strategy<Value = Complex64> {
    (0.2f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Exterior map of degree `1..=3` whose certificate sum `Σ k|b_k|` equals `1 − margin`.
pub fn exterior_map(min_margin: f64, max_margin: f64) -> impl Strategy<Value = ExteriorMapPoly> {
    (
        prop::collection::vec(unit_scale(), 1..=3),
        min_margin..max_margin,
        -0.5f64..0.5,
        -0.5f64..0.5,
    )
        .prop_map(|(tail, margin, x, y)| scaled_map(c64(x, y), tail, margin))
}

/// Rescales `tail` so that `Σ k|b_k| = 1 − margin`.
pub fn scaled_map(b0: Complex64, tail: Vec<Complex64>, margin: f64) -> ExteriorMapPoly {
    let sum: f64 = tail.iter().enumerate().map(|(i, b)| (i + 1) as f64 * b.norm()).sum();
    let scale = (1.0 - margin) / sum;
    ExteriorMapPoly::new(b0, tail.into_iter().map(|b| b * scale).collect())
}

/// Single-curve configuration of a random map.
pub fn curve(min_margin: f64, max_margin: f64) -> impl Strategy<Value = CurveConfig> {
    exterior_map(min_margin, max_margin).prop_map(CurveConfig::ExteriorPolyCurve)
}

/// The degree-three curve used by the example configurations.
pub fn general_curve() -> ExteriorMapPoly {
    ExteriorMapPoly::new(c64(0.1, -0.2), vec![c64(0.2, 0.1), c64(-0.05, 0.08), c64(0.02, 0.0)])
}

/// Proptest settings without on-disk regression files. Runs are deterministic unless
/// `PROPTEST_RNG_SEED` is set.
pub fn cases(n: u32) -> ProptestConfig {
    let base = ProptestConfig::default();
    let rng_seed = match base.rng_seed {
        RngSeed::Random => RngSeed::Fixed(20_240_917),
        fixed => fixed,
    };
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        rng_seed,
        ..base
    }
}
