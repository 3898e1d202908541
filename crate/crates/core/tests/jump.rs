//! Properties of the Cauchy-Royden jump and the overfare maps.

mod common;

use proptest::prelude::*;
use riemann_scatter_core::geometry::{CurveConfig, ExteriorMapPoly, InteriorHarmonic};
use riemann_scatter_core::jump::{
    cauchy_royden, interior_energy, overfare_to_exterior, overfare_to_interior, Basepoint,
};
use riemann_scatter_core::linalg::{c64, spectral_norm, C64};
use riemann_scatter_core::schiffer::{build_blocks, Method};

fn coeffs(len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c64(a, b)), len)
}

fn interior(g: ExteriorMapPoly, holo: Vec<C64>, antiholo: Vec<C64>) -> InteriorHarmonic {
    InteriorHarmonic {
        map: g,
        c0: c64(0.25, -0.5),
        holo,
        antiholo,
        residual: 0.0,
    }
}

proptest! {
    #![proptest_config(common::cases(16))]

    #[test]
    fn overfare_round_trip_is_the_identity(g in common::exterior_map(0.4, 0.9), p in coeffs(6), q in coeffs(6)) {
        let cfg = CurveConfig::ExteriorPolyCurve(g.clone());
        let h = interior(g, p, q);
        let ext = overfare_to_exterior(&cfg, &h, 256).unwrap();
        let back = overfare_to_interior(&cfg, &ext, 6, 256, 1e-8).unwrap();
        prop_assert!((back.c0 - h.c0).norm() < 1e-8);
        for k in 0..6 {
            prop_assert!((back.holo[k] - h.holo[k]).norm() < 1e-8);
            prop_assert!((back.antiholo[k] - h.antiholo[k]).norm() < 1e-8);
        }
    }

    #[test]
    fn overfare_energy_is_bounded_by_the_grunsky_norm(g in common::exterior_map(0.3, 0.9), p in coeffs(5), q in coeffs(5)) {
        let cfg = CurveConfig::ExteriorPolyCurve(g.clone());
        let kappa = spectral_norm(&build_blocks(&cfg, 24, Method::Series, 0).unwrap().t22.matrix);
        let h = interior(g, p, q);
        let inner = interior_energy(&h).unwrap();
        let outer = overfare_to_exterior(&cfg, &h, 256).unwrap().energy();
        let bound = (1.0 + kappa) / (1.0 - kappa);
        prop_assert!(outer <= bound * inner * (1.0 + 1e-10), "{outer} vs {bound} x {inner}");
        prop_assert!(inner <= bound * outer * (1.0 + 1e-10), "{inner} vs {bound} x {outer}");
    }

    #[test]
    fn basepoint_only_shifts_constants(g in common::exterior_map(0.4, 0.9), p in coeffs(4), q in coeffs(4)) {
        let cfg = CurveConfig::ExteriorPolyCurve(g.clone());
        let h = interior(g.clone(), p, q);
        let a = cauchy_royden(&cfg, &h, Basepoint::Infinity, 256).unwrap();
        let b = cauchy_royden(&cfg, &h, Basepoint::Side1(g.b0), 256).unwrap();
        let c = cauchy_royden(&cfg, &h, Basepoint::Side2(g.eval(c64(0.0, 2.0))), 256).unwrap();
        for other in [&b, &c] {
            for k in 0..a.side1.holo.len() {
                prop_assert!((a.side1.holo[k] - other.side1.holo[k]).norm() < 1e-12);
                prop_assert!((a.side1.antiholo[k] - other.side1.antiholo[k]).norm() < 1e-12);
            }
            for k in 0..a.side2.holo.len() {
                prop_assert!((a.side2.holo[k] - other.side2.holo[k]).norm() < 1e-12);
                prop_assert!((a.side2.antiholo[k] - other.side2.antiholo[k]).norm() < 1e-12);
            }
            // the jump across the curve does not depend on the basepoint
            let jump = |f: &riemann_scatter_core::jump::TwoSidedFunction| f.side1.c0 - f.side2.c0;
            prop_assert!((jump(&a) - jump(other)).norm() < 1e-12);
        }
    }
}
