//! Properties of the scattering matrix, the period map and the boundary-value problem.

mod common;

use proptest::prelude::*;
use riemann_scatter_core::linalg::{c64, max_abs_entry, C64};
use riemann_scatter_core::scattering::{
    build_scattering_genus0, bvp_datum, cvec, index_estimate, period_map, solve_holomorphic_bvp,
    DEFAULT_INDEX_THRESHOLD,
};

fn gamma(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c64(a, b)), n)
}

proptest! {
    #![proptest_config(common::cases(16))]

    #[test]
    fn scattering_is_unitary_and_symmetric(cfg in common::curve(0.5, 0.9)) {
        // at margin 0.5 the truncation error at N = 16 reaches about 2e-7
        let s = build_scattering_genus0(&cfg, 16).unwrap();
        prop_assert!(s.unitarity_residual <= 1e-6);
        let a = s.assembled();
        prop_assert!(max_abs_entry(&(&a - a.transpose())) < 1e-12);
        // exchanging the sides permutes blocks and preserves unitarity
        let p = s.relabeled().assembled();
        let n = 16;
        for i in 0..2 * n {
            for j in 0..2 * n {
                prop_assert_eq!(p[(i, j)], a[((i + n) % (2 * n), (j + n) % (2 * n))]);
            }
        }
    }

    #[test]
    fn upsilon_is_a_strict_contraction(cfg in common::curve(0.15, 0.9)) {
        let p = period_map(&cfg, 16).unwrap();
        prop_assert!(p.upsilon_norm < 1.0);
        prop_assert!(p.theta_sigma_min > 0.0);
    }

    #[test]
    fn index_vanishes_at_every_truncation(cfg in common::curve(0.3, 0.9)) {
        for n in [8, 16] {
            let idx = index_estimate(&cfg, n, DEFAULT_INDEX_THRESHOLD).unwrap();
            prop_assert_eq!((idx.ker, idx.coker, idx.index), (0, 0, 0));
        }
    }

    #[test]
    fn bvp_recovers_its_datum(cfg in common::curve(0.5, 0.9), g in gamma(12)) {
        let gamma_bar = cvec(&g);
        let (anti, holo) = bvp_datum(&cfg, &gamma_bar).unwrap();
        let sol = solve_holomorphic_bvp(&cfg, &anti, &holo, &[], 12).unwrap();
        prop_assert!((&sol.gamma_bar - &gamma_bar).camax() < 1e-10);
        prop_assert!(sol.misfit < 1e-10);
        prop_assert!(sol.condition <= 1.1 / (1.0 - sol.t11_norm));
    }
}
