//! Values frozen against independent computations: two-dimensional area quadrature,
//! direct lattice sums and closed forms that share no code with the series assembly.

mod common;

use std::f64::consts::PI;

use riemann_scatter_core::boundary::douglas_kappa;
use riemann_scatter_core::geometry::CurveConfig;
use riemann_scatter_core::geometry::{
    area_moment, faber_gram, faber_monomials, faber_orthonormal_basis, gram_orthonormal_basis, period_matrix,
    ExteriorMapPoly, FaberSeries, DEFAULT_SERIES_BOUND,
};
use riemann_scatter_core::linalg::{c64, C64};
use riemann_scatter_core::schiffer::{build_blocks, Method};
use riemann_scatter_core::torus::{eisenstein_g4, weierstrass_p_lattice, weierstrass_p_series};

/// `∬_{Ω₁} f dA` over the star-shaped interior `w = b₀ + s·γ(θ)`, `γ = g(e^{iθ}) − b₀`,
/// with Jacobian `s·Im(conj(γ)γ')`. Midpoint rule in `s` with one Richardson step,
/// trapezoid rule in `θ`.
fn area_integral(g: &ExteriorMapPoly, f: impl Fn(C64) -> C64) -> C64 {
    let theta_nodes = 512;
    let radial = |ns: usize| -> C64 {
        let mut acc = C64::default();
        for i in 0..theta_nodes {
            let t = 2.0 * PI * i as f64 / theta_nodes as f64;
            let z = c64(0.0, t).exp();
            let gamma = g.eval(z) - g.b0;
            let dgamma = g.derivative(z) * c64(0.0, 1.0) * z;
            let jac = (gamma.conj() * dgamma).im;
            for j in 0..ns {
                let s = (j as f64 + 0.5) / ns as f64;
                acc += f(g.b0 + gamma * s) * (s * jac);
            }
        }
        acc * (2.0 * PI / theta_nodes as f64) / ns as f64
    };
    let coarse = radial(400);
    let fine = radial(800);
    (fine * 4.0 - coarse) / 3.0
}

fn joukowski() -> ExteriorMapPoly {
    ExteriorMapPoly::joukowski(c64(0.3, 0.2))
}

#[test]
fn area_moments_match_two_dimensional_quadrature() {
    for g in [joukowski(), common::general_curve()] {
        for j in 0..=3 {
            for k in 0..=3 {
                let series = area_moment(&g, j, k, 512).unwrap();
                let oracle = area_integral(&g, |w| w.powi(j as i32) * w.conj().powi(k as i32));
                assert!((series - oracle).norm() < 1e-8, "({j}, {k}): {series} vs {oracle}");
            }
        }
    }
}

#[test]
fn disk_area_is_pi() {
    let a = area_moment(&ExteriorMapPoly::identity(), 0, 0, 64).unwrap();
    assert!((a - c64(PI, 0.0)).norm() < 1e-14);
    // Joukowski interior area is π(1 − |c|²)
    let c = c64(0.3, 0.2);
    let a = area_moment(&ExteriorMapPoly::joukowski(c), 0, 0, 256).unwrap();
    assert!((a.re - PI * (1.0 - c.norm_sqr())).abs() < 1e-13);
}

#[test]
fn faber_gram_matches_monomial_gram() {
    // (dF_m, dF_l) from Grunsky coefficients against area moments of w^j dw
    for g in [joukowski(), common::general_curve()] {
        let n = 6;
        let series = FaberSeries::new(&g, n, DEFAULT_SERIES_BOUND).unwrap();
        let exact = faber_gram(&series, n);
        let mono = gram_orthonormal_basis(&g, n, 512).unwrap().gram;
        let f = faber_monomials(&g, n);
        for m in 0..n {
            for l in 0..n {
                let mut v = C64::default();
                for j in 1..=m + 1 {
                    for i in 1..=l + 1 {
                        v += f[m][j] * f[l][i].conj() * (j * i) as f64 * mono[(j - 1, i - 1)];
                    }
                }
                assert!(
                    (v - exact[(m, l)]).norm() < 1e-9,
                    "({m}, {l}): {v} vs {}",
                    exact[(m, l)]
                );
            }
        }
    }
}

/// `T₁₂ē₁` at `z ∈ Ω₂` from the area integral of the sphere kernel,
/// `(conj(c)/π) ∬_{Ω₁} dA(w)/(z − w)²` as a multiple of `dz`, where `e₁ = c·dw`.
#[test]
fn t12_first_column_matches_area_integral() {
    for g in [joukowski(), common::general_curve()] {
        let n = 24;
        let blocks = build_blocks(&CurveConfig::ExteriorPolyCurve(g.clone()), n, Method::Series, 0).unwrap();
        let series = FaberSeries::new(&g, n, DEFAULT_SERIES_BOUND).unwrap();
        let c00 = faber_orthonormal_basis(&series, n).unwrap().factor[(0, 0)];
        for phi in [0.0, 1.1, 2.5, 4.0] {
            let zeta = C64::from_polar(1.6, phi);
            let z = g.eval(zeta);
            let oracle = c00.conj() / PI * area_integral(&g, |w| ((z - w) * (z - w)).inv());
            let mut from_series = C64::default();
            for l in 1..=n {
                let lf = l as f64;
                let du = lf * zeta.powi(-(l as i32) - 1) / (2.0 * PI * lf).sqrt();
                from_series += blocks.t12.matrix[(l - 1, 0)] * du;
            }
            from_series /= g.derivative(zeta);
            assert!((oracle - from_series).norm() < 1e-8, "{oracle} vs {from_series}");
        }
    }
}

#[test]
fn unit_circle_t12_column_reproduces_the_kernel() {
    // ∬_{|w|<1} dA/(z − w)² = π/z², so T₁₂ē₁ = dz/(√(2π) z²) = u₁
    let g = ExteriorMapPoly::identity();
    let z = c64(1.3, 0.4);
    let v = area_integral(&g, |w| ((z - w) * (z - w)).inv());
    assert!((v - c64(PI, 0.0) / (z * z)).norm() < 1e-9);
}

#[test]
fn douglas_constant_is_two_pi() {
    assert!((douglas_kappa(128).unwrap() - 2.0 * PI).abs() < 1e-10);
}

#[test]
fn annulus_period_matrix_closed_form() {
    assert!((period_matrix(1.0, std::f64::consts::E).unwrap()[(0, 0)] - 2.0 * PI).abs() < 1e-14);
    assert!((period_matrix(0.5, 0.5 * std::f64::consts::E.powi(2)).unwrap()[(0, 0)] - PI).abs() < 1e-14);
}

#[test]
fn square_lattice_invariants() {
    // G₄ = Γ(1/4)⁸/(960π²) for the square lattice of periods 1 and i
    let gamma_quarter: f64 = 3.625_609_908_221_908;
    let closed = gamma_quarter.powi(8) / (960.0 * PI * PI);
    assert!((eisenstein_g4() - closed).abs() < 1e-10 * closed);
    // ℘(1/2) = −℘(i/2) and ℘((1+i)/2) = 0 by the square symmetry
    let half = weierstrass_p_lattice(c64(0.5, 0.0), 64).unwrap().value;
    let ihalf = weierstrass_p_series(c64(0.0, 0.5)).unwrap();
    assert!((half + ihalf).norm() < 1e-8 * half.norm());
    let centre = weierstrass_p_series(c64(0.5, 0.5)).unwrap();
    assert!(centre.norm() < 1e-10);
}

#[test]
fn lattice_and_q_series_agree() {
    for u in [c64(0.1, 0.2), c64(0.45, 0.3), c64(-0.2, 0.7), c64(0.3, 0.5)] {
        let lattice = weierstrass_p_lattice(u, 64).unwrap();
        let series = weierstrass_p_series(u).unwrap();
        assert!(
            (lattice.value - series).norm() <= lattice.tail_bound + 1e-9,
            "{u}: {} vs {series}",
            lattice.value
        );
    }
}
