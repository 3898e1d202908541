//! Properties of the strip configurations on the square torus.

mod common;

use proptest::prelude::*;
use riemann_scatter_core::linalg::c64;
use riemann_scatter_core::torus::{
    assembled_t12, build_mode_operators, torus_identity_suite, weierstrass_p_lattice, TorusConfig,
};

fn slices() -> impl Strategy<Value = TorusConfig> {
    (0.0f64..0.9, 0.05f64..0.9).prop_filter_map("slices inside the strip", |(y1, h)| {
        let y2 = y1 + h;
        (y2 < 0.99).then_some(TorusConfig {
            y1,
            y2,
            modes: 8,
            lattice_cutoff: 64,
        })
    })
}

proptest! {
    #![proptest_config(common::cases(32))]

    #[test]
    fn modes_are_unitary_and_decoupled(cfg in slices()) {
        let rep = torus_identity_suite(&cfg).unwrap();
        prop_assert!(rep.max_unitarity() < 1e-8);
        prop_assert!(rep.max_identity() < 1e-8);
        prop_assert_eq!(rep.cross_mode, 0.0);
        prop_assert!(rep.s_completeness < 1e-12);
        prop_assert!(rep.harmonic_measure < 1e-12);
        prop_assert!(rep.catalyzing < 1e-12);
        prop_assert_eq!((rep.index.ker, rep.index.coker), (0, 0));
    }

    #[test]
    fn conjugate_modes_share_their_blocks(cfg in slices(), k in 1i64..=8) {
        let plus = build_mode_operators(&cfg, k).unwrap();
        let minus = build_mode_operators(&cfg, -k).unwrap();
        prop_assert_eq!((&plus.t11, &plus.t12, &plus.t22), (&minus.t11, &minus.t12, &minus.t22));
    }

    #[test]
    fn exchanging_strips_swaps_diagonal_blocks(cfg in slices(), k in 0i64..=8) {
        let swapped = TorusConfig { y1: 0.0, y2: cfg.h2(), ..cfg };
        let a = build_mode_operators(&cfg, k).unwrap();
        let b = build_mode_operators(&swapped, k).unwrap();
        prop_assert!((a.t11[(0, 0)] - b.t22[(0, 0)]).norm() < 1e-12);
        prop_assert!((a.t12[(0, 0)] - b.t21[(0, 0)]).norm() < 1e-12);
    }

    #[test]
    fn weierstrass_p_is_even(x in -0.45f64..0.45, y in -0.45f64..0.45) {
        prop_assume!(x.abs() + y.abs() > 0.05);
        let u = c64(x, y);
        let a = weierstrass_p_lattice(u, 32).unwrap();
        let b = weierstrass_p_lattice(-u, 32).unwrap();
        prop_assert!((a.value - b.value).norm() <= 1e-12 * a.value.norm());
    }
}

#[test]
fn assembled_t12_is_mode_diagonal() {
    let cfg = TorusConfig {
        y1: 0.0,
        y2: 0.3,
        ..TorusConfig::default()
    };
    let t = assembled_t12(&cfg).unwrap();
    for i in 0..t.nrows() {
        for j in 0..t.ncols() {
            if i != j {
                assert_eq!(t[(i, j)], c64(0.0, 0.0));
            }
        }
    }
}
