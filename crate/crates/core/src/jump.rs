//! Cauchy–Royden operator, overfare, and the jump identities on a single analytic curve.
//!
//! Functions on `Σ₁ = Ω₁` are [`InteriorHarmonic`] expansions in Faber polynomials; functions on
//! `Σ₂ = Ω₂` are [`ExteriorHarmonic`] expansions in `ζ^{-n}` and `conj(ζ)^{-n}` with
//! `ζ = g^{-1}(w)`. Boundary integrals are evaluated directly on `Γ` by the trapezoid rule in the
//! parameter `θ`, which is legitimate because every curve and every datum here is analytic.

use std::f64::consts::PI;

use crate::boundary::DiskHarmonicFunction;
use crate::error::{Result, ScatterError};
use crate::geometry::{
    faber_gram, faber_orthonormal_basis, interior_dirichlet_solve_with, validate_config, CurveConfig, ExteriorMapPoly,
    FaberSeries, InteriorHarmonic, DEFAULT_SERIES_BOUND,
};
use crate::linalg::{c64, dft_coefficients, dft_mode, upper_triangular_inverse, CMat, C64};
use crate::schiffer::{build_blocks, Method};

/// Minimum distance between an evaluation point and the curve.
pub const MIN_CURVE_DISTANCE: f64 = 1e-3;

/// Harmonic function `c0 + Σ A_n ζ^{-n} + Σ B_n conj(ζ)^{-n}` on `Ω₂`, `ζ = g^{-1}(w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorHarmonic {
    pub c0: C64,
    /// `A_1..A_N`.
    pub holo: Vec<C64>,
    /// `B_1..B_N`.
    pub antiholo: Vec<C64>,
}

impl ExteriorHarmonic {
    /// Value at the parameter point `ζ` (`|ζ| ≥ 1`).
    pub fn eval_param(&self, zeta: C64) -> C64 {
        let zi = zeta.inv();
        let mut p = c64(1.0, 0.0);
        let mut acc = self.c0;
        for (a, b) in self.holo.iter().zip(&self.antiholo) {
            p *= zi;
            acc += a * p + b * p.conj();
        }
        acc
    }

    /// Homogeneous Dirichlet energy `2π Σ n (|A_n|² + |B_n|²)`.
    pub fn energy(&self) -> f64 {
        2.0 * PI
            * self
                .holo
                .iter()
                .zip(&self.antiholo)
                .enumerate()
                .map(|(i, (a, b))| (i + 1) as f64 * (a.norm_sqr() + b.norm_sqr()))
                .sum::<f64>()
    }

    /// Coefficientwise difference, padding the shorter expansion with zeros.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.holo.len().max(other.holo.len());
        let get = |v: &[C64], i: usize| v.get(i).copied().unwrap_or_default();
        Self {
            c0: self.c0 - other.c0,
            holo: (0..n).map(|i| get(&self.holo, i) - get(&other.holo, i)).collect(),
            antiholo: (0..n)
                .map(|i| get(&self.antiholo, i) - get(&other.antiholo, i))
                .collect(),
        }
    }
}

/// Basepoint of the Cauchy–Royden operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basepoint {
    /// `q = ∞ ∈ Σ₂`.
    Infinity,
    /// A finite point of `Ω₁`.
    Side1(C64),
    /// A finite point of `Ω₂`.
    Side2(C64),
}

/// Restrictions of `J^q h` to both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedFunction {
    pub side1: InteriorHarmonic,
    pub side2: ExteriorHarmonic,
    pub basepoint: Basepoint,
}

fn exterior_map(config: &CurveConfig) -> Result<ExteriorMapPoly> {
    validate_config(config)?;
    config
        .exterior_map()
        .ok_or_else(|| ScatterError::Unsupported("jump operators need a single separating curve".into()))
}

/// Boundary samples and `θ`-derivatives of an interior function at `m` nodes.
fn interior_trace(h: &InteriorHarmonic, series: &FaberSeries, m: usize) -> (Vec<C64>, Vec<C64>) {
    let mut vals = Vec::with_capacity(m);
    let mut ders = Vec::with_capacity(m);
    for j in 0..m {
        let z = c64(0.0, 2.0 * PI * j as f64 / m as f64).exp();
        let mut v = h.c0;
        let mut d = C64::default();
        for k in 1..=h.holo.len() {
            let f = series.eval(k, z);
            let df = series.eval_derivative(k, z) * c64(0.0, 1.0) * z;
            v += h.holo[k - 1] * f + h.antiholo[k - 1] * f.conj();
            d += h.holo[k - 1] * df + h.antiholo[k - 1] * df.conj();
        }
        vals.push(v);
        ders.push(d);
    }
    (vals, ders)
}

fn exterior_trace(h: &ExteriorHarmonic, m: usize) -> (Vec<C64>, Vec<C64>) {
    let mut vals = Vec::with_capacity(m);
    let mut ders = Vec::with_capacity(m);
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64;
        let mut v = h.c0;
        let mut d = C64::default();
        for (i, (a, b)) in h.holo.iter().zip(&h.antiholo).enumerate() {
            let n = (i + 1) as f64;
            let e = c64(0.0, -n * t).exp();
            v += a * e + b * e.conj();
            d += a * e * c64(0.0, -n) + b * e.conj() * c64(0.0, n);
        }
        vals.push(v);
        ders.push(d);
    }
    (vals, ders)
}

/// `(1/2πi) ∮_Γ (h(w) − h(w_i))/(w − w_i) dw` at every node, diagonal replaced by `dh/dθ`.
fn subtracted_cauchy(g: &ExteriorMapPoly, h: &[C64], dh: &[C64]) -> Vec<C64> {
    let m = h.len();
    let (w, dw): (Vec<C64>, Vec<C64>) = g.boundary(m).into_iter().unzip();
    let scale = c64(0.0, m as f64).inv();
    (0..m)
        .map(|i| {
            let mut acc = dh[i];
            for j in 0..m {
                if j != i {
                    acc += (h[j] - h[i]) / (w[j] - w[i]) * dw[j];
                }
            }
            acc * scale
        })
        .collect()
}

/// `(1/2πi) ∮_Γ h(w) dw/(w − q)` for `q` off the curve.
fn cauchy_at(g: &ExteriorMapPoly, h: &[C64], q: C64) -> Result<C64> {
    let m = h.len();
    let mut acc = C64::default();
    let mut dmin = f64::INFINITY;
    for ((w, dw), hv) in g.boundary(m).into_iter().zip(h) {
        dmin = dmin.min((w - q).norm());
        acc += hv * dw / (w - q);
    }
    if dmin < MIN_CURVE_DISTANCE {
        return Err(ScatterError::SampleNearCurve {
            distance: dmin,
            minimum: MIN_CURVE_DISTANCE,
        });
    }
    Ok(acc / m as f64 / c64(0.0, 1.0))
}

fn exterior_from_samples(vals: &[C64], n: usize) -> ExteriorHarmonic {
    let f = dft_coefficients(vals);
    ExteriorHarmonic {
        c0: f[0],
        holo: (1..=n as i64).map(|l| dft_mode(&f, -l)).collect(),
        antiholo: (1..=n as i64).map(|l| dft_mode(&f, l)).collect(),
    }
}

fn fit_size(g: &ExteriorMapPoly, n: usize) -> usize {
    (n * g.degree()).max(n)
}

struct Pieces {
    side1: InteriorHarmonic,
    side2: ExteriorHarmonic,
}

/// Boundary values of a Cauchy integral over `±Γ` on both sides, fitted back to expansions.
fn cauchy_pieces(
    g: &ExteriorMapPoly,
    vals: &[C64],
    ders: &[C64],
    sign: f64,
    n_fit: usize,
    series: &FaberSeries,
) -> Result<Pieces> {
    let sub = subtracted_cauchy(g, vals, ders);
    // Winding numbers: Γ winds once around Ω₁ and not around Ω₂; −Γ winds −1 around Ω₁.
    let outside: Vec<C64> = sub.iter().map(|s| s * sign).collect();
    let inside: Vec<C64> = sub.iter().zip(vals).map(|(s, v)| (s + v) * sign).collect();
    let side1 = interior_dirichlet_solve_with(g, series, &inside, n_fit, 1e-8)?;
    let side2 = exterior_from_samples(&outside, n_fit);
    Ok(Pieces { side1, side2 })
}

fn shift_constants(p: &mut Pieces, g: &ExteriorMapPoly, q: Basepoint, vals: &[C64], sign: f64) -> Result<()> {
    let shift = match q {
        Basepoint::Infinity => C64::default(),
        Basepoint::Side1(z) | Basepoint::Side2(z) => cauchy_at(g, vals, z)? * sign,
    };
    p.side1.c0 -= shift;
    p.side2.c0 -= shift;
    Ok(())
}

fn coefficient_change(a: &Pieces, b: &Pieces) -> f64 {
    let d1 = a
        .side1
        .holo
        .iter()
        .zip(&b.side1.holo)
        .chain(a.side1.antiholo.iter().zip(&b.side1.antiholo))
        .map(|(x, y)| (x - y).norm())
        .fold((a.side1.c0 - b.side1.c0).norm(), f64::max);
    let d2 = a
        .side2
        .holo
        .iter()
        .zip(&b.side2.holo)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    d1.max(d2)
}

/// `J^q h` for `h` harmonic on `Σ₁`, with the sphere kernel `∂_w𝒢 = −½(1/(w−z) − 1/(w−q)) dw`.
///
/// Boundary values on `Γ` from both sides come from the subtracted trapezoid rule at `m` nodes;
/// the interior restriction is refitted in Faber polynomials and the exterior one by FFT. The
/// computation is repeated with `2m` nodes and `NonConvergent` is raised if the coefficients move.
pub fn cauchy_royden(config: &CurveConfig, h: &InteriorHarmonic, q: Basepoint, m: usize) -> Result<TwoSidedFunction> {
    let g = exterior_map(config)?;
    let n_fit = fit_size(&g, h.holo.len());
    let series = FaberSeries::new(&g, n_fit, DEFAULT_SERIES_BOUND)?;
    let run = |nodes: usize| -> Result<Pieces> {
        let (vals, ders) = interior_trace(h, &series, nodes);
        let mut p = cauchy_pieces(&g, &vals, &ders, 1.0, n_fit, &series)?;
        shift_constants(&mut p, &g, q, &vals, 1.0)?;
        Ok(p)
    };
    let coarse = run(m)?;
    let fine = run(2 * m)?;
    let change = coefficient_change(&coarse, &fine);
    if change > 1e-9 {
        return Err(ScatterError::NonConvergent {
            what: "Cauchy–Royden boundary quadrature".into(),
            change,
            tolerance: 1e-9,
        });
    }
    Ok(TwoSidedFunction {
        side1: coarse.side1,
        side2: coarse.side2,
        basepoint: q,
    })
}

/// `J^q H` for `H` harmonic on `Σ₂` (contour `−Γ`).
pub fn cauchy_royden_exterior(
    config: &CurveConfig,
    h: &ExteriorHarmonic,
    q: Basepoint,
    m: usize,
) -> Result<TwoSidedFunction> {
    let g = exterior_map(config)?;
    let n_fit = fit_size(&g, h.holo.len());
    let series = FaberSeries::new(&g, n_fit, DEFAULT_SERIES_BOUND)?;
    let run = |nodes: usize| -> Result<Pieces> {
        let (vals, ders) = exterior_trace(h, nodes);
        let mut p = cauchy_pieces(&g, &vals, &ders, -1.0, n_fit, &series)?;
        shift_constants(&mut p, &g, q, &vals, -1.0)?;
        Ok(p)
    };
    let coarse = run(m)?;
    let fine = run(2 * m)?;
    let change = coefficient_change(&coarse, &fine);
    if change > 1e-9 {
        return Err(ScatterError::NonConvergent {
            what: "Cauchy–Royden boundary quadrature".into(),
            change,
            tolerance: 1e-9,
        });
    }
    Ok(TwoSidedFunction {
        side1: coarse.side1,
        side2: coarse.side2,
        basepoint: q,
    })
}

/// Overfare `O₁₂`: the exterior harmonic function with the same boundary values on `Γ`.
/// Exact for Faber-polynomial data: the trace has finitely many Fourier modes.
pub fn overfare_to_exterior(config: &CurveConfig, h: &InteriorHarmonic, m: usize) -> Result<ExteriorHarmonic> {
    let g = exterior_map(config)?;
    let n = fit_size(&g, h.holo.len());
    if m < 2 * n + 1 {
        return Err(ScatterError::DimensionMismatch {
            expected: 2 * n + 1,
            found: m,
        });
    }
    let series = FaberSeries::new(&g, h.holo.len(), DEFAULT_SERIES_BOUND)?;
    let (vals, _) = interior_trace(h, &series, m);
    Ok(exterior_from_samples(&vals, n))
}

/// Overfare `O₂₁`: least-squares interior fit of size `n` to the boundary values of `h`;
/// `ResidualTooLarge` if the RMS misfit exceeds `tol`.
pub fn overfare_to_interior(
    config: &CurveConfig,
    h: &ExteriorHarmonic,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<InteriorHarmonic> {
    let g = exterior_map(config)?;
    let series = FaberSeries::new(&g, n, DEFAULT_SERIES_BOUND)?;
    let (vals, _) = exterior_trace(h, m);
    interior_dirichlet_solve_with(&g, &series, &vals, n, tol)
}

/// Homogeneous Dirichlet energy of an interior function, `‖∂h‖² + ‖∂̄h‖²`, from the Faber Gram.
pub fn interior_energy(h: &InteriorHarmonic) -> Result<f64> {
    let n = h.holo.len();
    let series = FaberSeries::new(&h.map, n, DEFAULT_SERIES_BOUND)?;
    let gram = faber_gram(&series, n);
    let mut e = 0.0;
    for m in 0..n {
        for l in 0..n {
            e += (h.holo[m] * h.holo[l].conj() * gram[(m, l)]).re;
            e += (h.antiholo[m] * h.antiholo[l].conj() * gram[(m, l)].conj()).re;
        }
    }
    Ok(e.max(0.0))
}

/// Coefficientwise difference of two interior functions on the same map.
pub fn interior_difference(a: &InteriorHarmonic, b: &InteriorHarmonic) -> InteriorHarmonic {
    let n = a.holo.len().max(b.holo.len());
    let get = |v: &[C64], i: usize| v.get(i).copied().unwrap_or_default();
    InteriorHarmonic {
        map: a.map.clone(),
        c0: a.c0 - b.c0,
        holo: (0..n).map(|i| get(&a.holo, i) - get(&b.holo, i)).collect(),
        antiholo: (0..n).map(|i| get(&a.antiholo, i) - get(&b.antiholo, i)).collect(),
        residual: 0.0,
    }
}

/// Residuals of the jump-derivative relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpDerivativeReport {
    /// `‖∂J₁₂h − T₁₂∂̄h‖` over the first `N` exterior modes.
    pub across: f64,
    /// `‖∂J₁₁h − (∂h + T₁₁∂̄h)‖` over the first `N` orthonormal interior modes.
    pub within: f64,
    /// `‖∂̄J₁₁h‖`, which vanishes at genus zero.
    pub antiholomorphic: f64,
}

impl JumpDerivativeReport {
    /// Largest of the three residuals.
    pub fn max(&self) -> f64 {
        self.across.max(self.within).max(self.antiholomorphic)
    }
}

/// Compares the derivatives of `J^q h` with the Schiffer blocks applied to `∂̄h`.
pub fn jump_derivative_check(
    config: &CurveConfig,
    h: &InteriorHarmonic,
    q: Basepoint,
    m: usize,
) -> Result<JumpDerivativeReport> {
    let g = exterior_map(config)?;
    let n = h.holo.len();
    let j = cauchy_royden(config, h, q, m)?;
    let big = j.side1.holo.len();
    let series = FaberSeries::new(&g, big, DEFAULT_SERIES_BOUND)?;
    let c = faber_orthonormal_basis(&series, n)?.factor;
    let c_inv = upper_triangular_inverse(&c)?;
    let blocks = build_blocks(config, n, Method::Series, m)?;
    // ∂̄h = Σ q_k conj(dF_k) in the basis ē_p: coefficients conj(C⁻¹ conj(q))
    let qbar: Vec<C64> = h.antiholo.iter().map(|x| x.conj()).collect();
    let dbar: Vec<C64> = (0..n)
        .map(|p| (0..n).map(|k| c_inv[(p, k)] * qbar[k]).sum::<C64>().conj())
        .collect();
    let apply = |t: &CMat, v: &[C64]| -> Vec<C64> {
        (0..t.nrows())
            .map(|r| (0..v.len()).map(|s| t[(r, s)] * v[s]).sum())
            .collect()
    };
    let t12 = apply(&blocks.t12.matrix, &dbar);
    let t11 = apply(&blocks.t11.matrix, &dbar);
    // ∂J₁₂h = Σ A_l d(ζ^{-l}) = −Σ A_l √(2πl) u_l
    let across = (0..n)
        .map(|l| (-j.side2.holo[l] * (2.0 * PI * (l + 1) as f64).sqrt() - t12[l]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    // ∂(J₁₁h − h) = Σ x_k dF_k projected on e_p: Σ_k x_k (dF_k, e_p)
    let x: Vec<C64> = (0..big)
        .map(|k| j.side1.holo[k] - h.holo.get(k).copied().unwrap_or_default())
        .collect();
    let gram = faber_gram(&series, big);
    let within = (0..n)
        .map(|p| {
            let mut proj = C64::default();
            for (k, xk) in x.iter().enumerate() {
                for jj in 0..=p {
                    proj += xk * gram[(k, jj)] * c[(jj, p)].conj();
                }
            }
            (proj - t11[p]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    let anti = InteriorHarmonic {
        map: g.clone(),
        c0: C64::default(),
        holo: vec![C64::default(); big],
        antiholo: j.side1.antiholo.clone(),
        residual: 0.0,
    };
    Ok(JumpDerivativeReport {
        across,
        within,
        antiholomorphic: interior_energy(&anti)?.sqrt(),
    })
}

/// Homogeneous Dirichlet norm of `O₂₁J₁₂h − (J₁₁h − h)` on `Σ₁`.
pub fn jump_formula_check(config: &CurveConfig, h: &InteriorHarmonic, q: Basepoint, m: usize) -> Result<f64> {
    let j = cauchy_royden(config, h, q, m)?;
    let n = j.side1.holo.len();
    let over = overfare_to_interior(config, &j.side2, n, m, 1e-8)?;
    let rhs = interior_difference(&j.side1, h);
    Ok(interior_energy(&interior_difference(&over, &rhs))?.sqrt())
}

/// Homogeneous Dirichlet norms of `J₁h + J₂(O₁₂h)` on `Σ₁` and on `Σ₂`; returns the larger.
pub fn two_sided_limit_check(config: &CurveConfig, h: &InteriorHarmonic, m: usize) -> Result<f64> {
    let j1 = cauchy_royden(config, h, Basepoint::Infinity, m)?;
    let over = overfare_to_exterior(config, h, m)?;
    let j2 = cauchy_royden_exterior(config, &over, Basepoint::Infinity, m)?;
    let mut s1 = j1.side1.clone();
    for (a, b) in s1.holo.iter_mut().zip(&j2.side1.holo) {
        *a += b;
    }
    for (a, b) in s1.antiholo.iter_mut().zip(&j2.side1.antiholo) {
        *a += b;
    }
    let neg = ExteriorHarmonic {
        c0: -j2.side2.c0,
        holo: j2.side2.holo.iter().map(|x| -x).collect(),
        antiholo: j2.side2.antiholo.iter().map(|x| -x).collect(),
    };
    let s2 = j1.side2.sub(&neg);
    Ok(interior_energy(&s1)?.sqrt().max(s2.energy().sqrt()))
}

/// Largest `|h(z) + (1/πi) ∮_{S¹} ∂_w g(w; z) h(w)|` over the samples, with the disk Green's
/// function `g(w; z) = −log|(w − z)/(1 − z̄w)|`, at `m` nodes checked against `2m`.
pub fn greens_reproducing_check(h: &DiskHarmonicFunction, samples: &[C64], m: usize) -> Result<f64> {
    let integral = |z: C64, nodes: usize| -> C64 {
        let mut acc = C64::default();
        for j in 0..nodes {
            let w = c64(0.0, 2.0 * PI * j as f64 / nodes as f64).exp();
            let dw = c64(0.0, 1.0) * w * (2.0 * PI / nodes as f64);
            let dg = -0.5 * ((w - z).inv() + z.conj() / (c64(1.0, 0.0) - z.conj() * w));
            acc += dg * h.eval(w) * dw;
        }
        acc / c64(0.0, PI)
    };
    let mut worst: f64 = 0.0;
    for &z in samples {
        if z.norm() > 1.0 - MIN_CURVE_DISTANCE {
            return Err(ScatterError::SampleNearCurve {
                distance: 1.0 - z.norm(),
                minimum: MIN_CURVE_DISTANCE,
            });
        }
        let coarse = integral(z, m);
        let fine = integral(z, 2 * m);
        let change = (fine - coarse).norm();
        if change > 1e-12 {
            return Err(ScatterError::NonConvergent {
                what: "Green's reproducing quadrature".into(),
                change,
                tolerance: 1e-12,
            });
        }
        worst = worst.max((h.eval(z) + fine).norm());
    }
    Ok(worst)
}
