//! Separating curves and the data attached to them.
//!
//! A genus-zero configuration is either the unit circle, a pair of concentric
//! circles `|z| = r`, `|z| = R` (the annulus `Σ₂` between two caps `Σ₁`), or the
//! analytic curve `Γ = g(|z| = 1)` of an exterior map
//! `g(z) = z + b₀ + Σ_{k=1}^d b_k z^{-k}`. For the latter, `Σ₁ = Ω₁` is the bounded
//! interior of `Γ` and `Σ₂ = Ω₂` the exterior containing `∞`.
//!
//! Faber polynomials are monic, `F_n(g(z)) = z^n + O(z^{-1})`, and are always
//! handled through their Laurent expansions `Φ_n(z) = F_n(g(z))`; expanding `F_n`
//! in monomials of `w` and evaluating on `Γ` cancels catastrophically for `n ≳ 15`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::boundary::{AnnulusHarmonicFunction, FourierFunction};
use crate::error::{Result, ScatterError};
use crate::linalg::{c64, lstsq, orthonormalizing_factor, CMat, CVec, C64};

/// Default univalence certificate bound `κ_max`.
pub const DEFAULT_KAPPA_MAX: f64 = 0.9;
/// Default bound on Faber and Grunsky coefficient magnitudes.
pub const DEFAULT_SERIES_BOUND: f64 = 1e6;
/// Gram matrices with a larger condition number are rejected.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

/// Exterior map `g(z) = z + b₀ + Σ_{k=1}^d b_k z^{-k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorMapPoly {
    pub b0: C64,
    /// `b_1..b_d`.
    pub tail: Vec<C64>,
    pub kappa_max: f64,
}

impl ExteriorMapPoly {
    /// Map with the default certificate bound. Trailing zero coefficients are dropped.
    pub fn new(b0: C64, tail: Vec<C64>) -> Self {
        Self::with_kappa(b0, tail, DEFAULT_KAPPA_MAX)
    }

    /// Map with an explicit certificate bound.
    pub fn with_kappa(b0: C64, mut tail: Vec<C64>, kappa_max: f64) -> Self {
        while tail.last().is_some_and(|b| *b == C64::default()) {
            tail.pop();
        }
        Self { b0, tail, kappa_max }
    }

    /// The identity map.
    pub fn identity() -> Self {
        Self::new(C64::default(), Vec::new())
    }

    /// Joukowski map `z + c/z`, whose image of the unit circle is an ellipse.
    pub fn joukowski(c: C64) -> Self {
        Self::new(C64::default(), vec![c])
    }

    /// Degree `d` of the tail.
    pub fn degree(&self) -> usize {
        self.tail.len()
    }

    /// Tail coefficient `b_k` (zero for `k = 0` or `k > d`).
    pub fn b(&self, k: usize) -> C64 {
        if k == 0 || k > self.tail.len() {
            C64::default()
        } else {
            self.tail[k - 1]
        }
    }

    /// Certificate sum `Σ k |b_k|`.
    pub fn certificate_sum(&self) -> f64 {
        self.tail
            .iter()
            .enumerate()
            .map(|(i, b)| (i + 1) as f64 * b.norm())
            .sum()
    }

    /// `g(z)`.
    pub fn eval(&self, z: C64) -> C64 {
        let zi = z.inv();
        let mut acc = C64::default();
        for b in self.tail.iter().rev() {
            acc = (acc + b) * zi;
        }
        z + self.b0 + acc
    }

    /// `g'(z)`.
    pub fn derivative(&self, z: C64) -> C64 {
        let zi = z.inv();
        let mut acc = c64(1.0, 0.0);
        let mut p = zi;
        for (i, b) in self.tail.iter().enumerate() {
            p *= zi;
            acc -= b * (i + 1) as f64 * p;
        }
        acc
    }

    /// Smallest `r` with `Σ k|b_k| r^{-k-1} ≤ 1`. On `|z| > r` the difference quotient
    /// `(g(z) − g(ζ))/(z − ζ)` stays away from zero, so `g` is univalent there and the
    /// Grunsky coefficients obey `|b_{mn}| ≤ C ρ^{m+n}` for every `ρ > r`.
    pub fn univalence_radius(&self) -> f64 {
        let f = |r: f64| -> f64 {
            self.tail
                .iter()
                .enumerate()
                .map(|(i, b)| (i + 1) as f64 * b.norm() * r.powi(-(i as i32) - 2))
                .sum()
        };
        if self.tail.iter().all(|b| *b == C64::default()) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64.max(self.certificate_sum()));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    /// Nodes `w_j = g(e^{iθ_j})` and derivatives `dw/dθ` at `θ_j = 2πj/m`.
    pub fn boundary(&self, m: usize) -> Vec<(C64, C64)> {
        (0..m)
            .map(|j| {
                let z = c64(0.0, 2.0 * PI * j as f64 / m as f64).exp();
                (self.eval(z), self.derivative(z) * c64(0.0, 1.0) * z)
            })
            .collect()
    }
}

/// Genus-zero configuration of a separating curve.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveConfig {
    /// `Γ = |z| = 1`, `Σ₁` the unit disk.
    UnitCircle,
    /// `Σ₂ = {r < |z| < R}`, `Σ₁` the two caps `|z| < r` and `|z| > R`.
    ConcentricAnnulus { r: f64, big_r: f64 },
    /// `Γ = g(|z| = 1)`.
    ExteriorPolyCurve(ExteriorMapPoly),
}

impl CurveConfig {
    /// Number of boundary curves (caps).
    pub fn caps(&self) -> usize {
        match self {
            CurveConfig::ConcentricAnnulus { .. } => 2,
            _ => 1,
        }
    }

    /// Exterior map of a single-curve configuration (identity for the unit circle).
    pub fn exterior_map(&self) -> Option<ExteriorMapPoly> {
        match self {
            CurveConfig::UnitCircle => Some(ExteriorMapPoly::identity()),
            CurveConfig::ExteriorPolyCurve(g) => Some(g.clone()),
            CurveConfig::ConcentricAnnulus { .. } => None,
        }
    }
}

/// Outcome of the configuration check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateReport {
    pub pass: bool,
    /// `1 − Σ k|b_k|` for exterior maps; `1 − r/R` for concentric circles.
    pub margin: f64,
    /// Radius beyond which `g` is certified univalent (see [`ExteriorMapPoly::univalence_radius`]);
    /// `r/R` for concentric circles.
    pub extension_radius: f64,
}

/// Certificate data without failing on violation.
pub fn certificate(c: &CurveConfig) -> CertificateReport {
    match c {
        CurveConfig::UnitCircle => CertificateReport {
            pass: true,
            margin: 1.0,
            extension_radius: 0.0,
        },
        CurveConfig::ConcentricAnnulus { r, big_r } => {
            let ok = r.is_finite() && big_r.is_finite() && *r > 0.0 && r < big_r;
            let ratio = if ok { r / big_r } else { f64::NAN };
            CertificateReport {
                pass: ok,
                margin: 1.0 - ratio,
                extension_radius: ratio,
            }
        }
        CurveConfig::ExteriorPolyCurve(g) => {
            let s = g.certificate_sum();
            let finite = g.b0.is_finite() && g.tail.iter().all(|b| b.is_finite());
            CertificateReport {
                pass: finite && g.kappa_max < 1.0 && s <= g.kappa_max,
                margin: 1.0 - s,
                extension_radius: g.univalence_radius(),
            }
        }
    }
}

/// Certificate check; `InvalidConfig` when it fails.
pub fn validate_config(c: &CurveConfig) -> Result<CertificateReport> {
    let rep = certificate(c);
    if rep.pass {
        return Ok(rep);
    }
    Err(ScatterError::InvalidConfig(match c {
        CurveConfig::ConcentricAnnulus { r, big_r } => {
            format!("concentric radii must satisfy 0 < r < R, got r = {r}, R = {big_r}")
        }
        CurveConfig::ExteriorPolyCurve(g) => format!(
            "univalence certificate violated: sum k|b_k| = {:.6} exceeds kappa_max = {} (margin {:.6})",
            g.certificate_sum(),
            g.kappa_max,
            rep.margin
        ),
        CurveConfig::UnitCircle => unreachable!("the unit circle always passes"),
    }))
}

/// Laurent expansions `Φ_n(z) = F_n(g(z)) = z^n + Σ_{k≥1} φ_{n,k} z^{-k}` for `n ≤ n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaberSeries {
    n_max: usize,
    degree: usize,
    /// `neg[n][k-1] = φ_{n,k}` for `1 ≤ k ≤ n·d`.
    neg: Vec<Vec<C64>>,
    /// Largest modulus of a nonnegative-power coefficient below `z^n` before it was discarded.
    pub duality_defect: f64,
}

impl FaberSeries {
    /// Runs the Faber recursion on Laurent series,
    /// `Φ_n = (g − b₀)Φ_{n−1} − Σ_{k=1}^{n−1} b_k Φ_{n−1−k} − (n−1) b_{n−1}`.
    pub fn new(g: &ExteriorMapPoly, n_max: usize, bound: f64) -> Result<Self> {
        let d = g.degree();
        let off = n_max * d;
        let size = off + n_max + 1;
        let idx = |p: i64| (p + off as i64) as usize;
        let mut phi: Vec<Vec<C64>> = Vec::with_capacity(n_max + 1);
        let mut unit = vec![C64::default(); size];
        unit[idx(0)] = c64(1.0, 0.0);
        phi.push(unit);
        let mut defect: f64 = 0.0;
        for n in 1..=n_max {
            let prev = &phi[n - 1];
            let mut next = vec![C64::default(); size];
            // (z + Σ b_k z^{-k}) Φ_{n-1}
            for (i, &c) in prev.iter().enumerate() {
                if c == C64::default() {
                    continue;
                }
                next[i + 1] += c;
                for k in 1..=d {
                    if i >= k {
                        next[i - k] += g.b(k) * c;
                    }
                }
            }
            for k in 1..n.min(d + 1) {
                let src = &phi[n - 1 - k];
                for (t, s) in next.iter_mut().zip(src) {
                    *t -= g.b(k) * s;
                }
            }
            next[idx(0)] -= g.b(n - 1) * (n - 1) as f64;
            for p in 0..n as i64 {
                defect = defect.max(next[idx(p)].norm());
                next[idx(p)] = C64::default();
            }
            if let Some(big) = next.iter().map(|c| c.norm()).find(|&m| m > bound || !m.is_finite()) {
                return Err(ScatterError::SeriesOverflow { magnitude: big, bound });
            }
            phi.push(next);
        }
        let neg = phi
            .iter()
            .enumerate()
            .map(|(n, v)| (1..=n * d).map(|k| v[idx(-(k as i64))]).collect())
            .collect();
        Ok(Self {
            n_max,
            degree: d,
            neg,
            duality_defect: defect,
        })
    }

    /// Largest `n` available.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Degree of the underlying map.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `φ_{n,k}`, the coefficient of `z^{-k}` in `Φ_n` (`k ≥ 1`).
    pub fn neg_coeff(&self, n: usize, k: usize) -> C64 {
        self.neg
            .get(n)
            .and_then(|v| v.get(k.wrapping_sub(1)))
            .copied()
            .unwrap_or_default()
    }

    /// Grunsky coefficient `b_{n,k} = φ_{n,k} / n` (`n, k ≥ 1`).
    pub fn grunsky(&self, n: usize, k: usize) -> C64 {
        if n == 0 {
            C64::default()
        } else {
            self.neg_coeff(n, k) / n as f64
        }
    }

    /// Value of `Φ_n'(z)`.
    pub fn eval_derivative(&self, n: usize, z: C64) -> C64 {
        let zi = z.inv();
        let mut acc = C64::default();
        for (k, c) in self.neg[n].iter().enumerate().rev() {
            acc = (acc - c * (k + 1) as f64) * zi;
        }
        acc * zi
            + if n == 0 {
                C64::default()
            } else {
                z.powi(n as i32 - 1) * n as f64
            }
    }

    /// Value of `Φ_n(z)`.
    pub fn eval(&self, n: usize, z: C64) -> C64 {
        let zi = z.inv();
        let mut acc = C64::default();
        for c in self.neg[n].iter().rev() {
            acc = (acc + c) * zi;
        }
        acc + z.powi(n as i32)
    }
}

/// Grunsky and Faber data of an exterior map at truncation `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrunskyData {
    /// `b_{mn}`, `1 ≤ m, n ≤ N`.
    pub b: CMat,
    /// `√(mn) b_{mn}`.
    pub normalized: CMat,
    /// Monomial coefficients of `F_1..F_N`: `faber[n-1][j]` multiplies `w^j`.
    pub faber: Vec<Vec<C64>>,
    /// Full Laurent data (needed for rows beyond `N`).
    pub series: FaberSeries,
}

/// Grunsky coefficients from the Faber recursion with the default magnitude bound.
pub fn grunsky_coefficients(g: &ExteriorMapPoly, n: usize) -> Result<GrunskyData> {
    grunsky_coefficients_bounded(g, n, DEFAULT_SERIES_BOUND)
}

/// Grunsky coefficients from the Faber recursion; `SeriesOverflow` above `bound`.
pub fn grunsky_coefficients_bounded(g: &ExteriorMapPoly, n: usize, bound: f64) -> Result<GrunskyData> {
    let series = FaberSeries::new(g, n, bound)?;
    let b = CMat::from_fn(n, n, |i, j| series.grunsky(i + 1, j + 1));
    let normalized = CMat::from_fn(n, n, |i, j| b[(i, j)] * (((i + 1) * (j + 1)) as f64).sqrt());
    Ok(GrunskyData {
        b,
        normalized,
        faber: faber_monomials(g, n),
        series,
    })
}

/// Monomial coefficients of the monic Faber polynomials `F_1..F_n`.
pub fn faber_monomials(g: &ExteriorMapPoly, n: usize) -> Vec<Vec<C64>> {
    let mut polys: Vec<Vec<C64>> = vec![vec![c64(1.0, 0.0)]];
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut next = vec![C64::default(); k + 1];
        for (j, &c) in prev.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= g.b0 * c;
        }
        for i in 1..k.min(g.degree() + 1) {
            for (j, &c) in polys[k - 1 - i].iter().enumerate() {
                next[j] -= g.b(i) * c;
            }
        }
        next[0] -= g.b(k - 1) * (k - 1) as f64;
        polys.push(next);
    }
    polys.remove(0);
    polys
}

/// Values `F_0(w), …, F_n(w)` by the three-term-style recursion in `w`.
pub fn faber_values(g: &ExteriorMapPoly, w: C64, n: usize) -> Vec<C64> {
    let mut v = vec![c64(1.0, 0.0)];
    for k in 1..=n {
        let mut next = (w - g.b0) * v[k - 1];
        for i in 1..k.min(g.degree() + 1) {
            next -= g.b(i) * v[k - 1 - i];
        }
        next -= g.b(k - 1) * (k - 1) as f64;
        v.push(next);
    }
    v
}

/// Derivatives `F_0'(w), …, F_n'(w)` from the differentiated recursion.
pub fn faber_derivative_values(g: &ExteriorMapPoly, w: C64, n: usize) -> Vec<C64> {
    let v = faber_values(g, w, n);
    let mut dv = vec![C64::default()];
    for k in 1..=n {
        let mut next = v[k - 1] + (w - g.b0) * dv[k - 1];
        for i in 1..k.min(g.degree() + 1) {
            next -= g.b(i) * dv[k - 1 - i];
        }
        dv.push(next);
    }
    dv
}

/// Grunsky coefficients from the bilinear expansion
/// `(g(z) − g(ζ))/(z − ζ) = 1 − Q(1/z, 1/ζ)`, `Q(u, v) = Σ_k b_k Σ_{p+q=k+1} u^p v^q`,
/// and `b_{mn} = [u^m v^n] Σ_j Q^j / j`.
pub fn grunsky_bilinear(g: &ExteriorMapPoly, n: usize, bound: f64) -> Result<CMat> {
    let s = n + 1;
    let mut q = vec![C64::default(); s * s];
    for k in 1..=g.degree() {
        for p in 1..=k {
            let r = k + 1 - p;
            if p <= n && r <= n {
                q[p * s + r] += g.b(k);
            }
        }
    }
    let mut power = q.clone();
    let mut acc = q.clone();
    for j in 2..=n {
        let mut next = vec![C64::default(); s * s];
        for a in 0..s {
            for b in 0..s {
                let x = power[a * s + b];
                if x == C64::default() {
                    continue;
                }
                for c in 0..s - a {
                    for d in 0..s - b {
                        next[(a + c) * s + b + d] += x * q[c * s + d];
                    }
                }
            }
        }
        if let Some(big) = next.iter().map(|c| c.norm()).find(|&m| m > bound || !m.is_finite()) {
            return Err(ScatterError::SeriesOverflow { magnitude: big, bound });
        }
        for (t, x) in acc.iter_mut().zip(&next) {
            *t += x / j as f64;
        }
        power = next;
    }
    Ok(CMat::from_fn(n, n, |i, j| acc[(i + 1) * s + j + 1]))
}

/// Trapezoid value of the moment and the same rule applied to the integrand's modulus,
/// which sets the roundoff scale.
fn area_moment_raw(g: &ExteriorMapPoly, j: usize, k: usize, m: usize) -> (C64, f64) {
    let mut acc = C64::default();
    let mut scale = 0.0;
    for (w, dw) in g.boundary(m) {
        let term = w.powi(j as i32) * w.conj().powi(k as i32 + 1) * dw;
        acc += term;
        scale += term.norm();
    }
    let weight = 2.0 * PI / m as f64 / (2.0 * (k + 1) as f64);
    (acc * weight / c64(0.0, 1.0), scale * weight)
}

/// `∬_{Ω₁} w^j w̄^k dA = (1/(2i(k+1))) ∮_Γ w^j w̄^{k+1} dw` by the `m`-point trapezoid rule,
/// checked against `2m` points relative to the integral of the integrand's modulus.
pub fn area_moment(g: &ExteriorMapPoly, j: usize, k: usize, m: usize) -> Result<C64> {
    let (coarse, _) = area_moment_raw(g, j, k, m);
    let (fine, scale) = area_moment_raw(g, j, k, 2 * m);
    let change = (fine - coarse).norm() / scale.max(1.0);
    let tolerance = 1e-12;
    if change > tolerance {
        return Err(ScatterError::NonConvergent {
            what: format!("area moment ({j}, {k})"),
            change,
            tolerance,
        });
    }
    Ok(coarse)
}

/// Gram matrix of polynomial one-forms on `Ω₁` and its orthonormalizing factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GramBasis {
    /// `G_{jl} = (φ_j, φ_l)` for the raw basis `φ`.
    pub gram: CMat,
    /// Upper-triangular `C` with positive diagonal such that `ψ_n = Σ_m C_{mn} φ_m` is orthonormal.
    pub factor: CMat,
}

impl GramBasis {
    fn from_gram(gram: CMat) -> Result<Self> {
        let factor = orthonormalizing_factor(&gram.transpose(), GRAM_CONDITION_LIMIT)?;
        Ok(Self { gram, factor })
    }
}

/// Gram matrix of `w^j dw` (`0 ≤ j < N`) from area moments, with
/// `(w^j dw, w^l dw) = ∬ w^j dw ∧ *conj(w^l dw) = 2 ∬ w^j w̄^l dA`.
pub fn gram_orthonormal_basis(g: &ExteriorMapPoly, n: usize, m: usize) -> Result<GramBasis> {
    let mut gram = CMat::zeros(n, n);
    for j in 0..n {
        for l in j..n {
            let v = area_moment(g, j, l, m)? * 2.0;
            gram[(j, l)] = v;
            gram[(l, j)] = v.conj();
        }
    }
    GramBasis::from_gram(gram)
}

/// Exact Gram matrix of `dF_m` (`1 ≤ m ≤ N`):
/// `(dF_m, dF_l) = 2π [m δ_{ml} − m l Σ_k k b_{mk} conj(b_{lk})]`.
pub fn faber_gram(series: &FaberSeries, n: usize) -> CMat {
    let d = series.degree();
    CMat::from_fn(n, n, |i, j| {
        let (m, l) = (i + 1, j + 1);
        let kmax = m.min(l) * d;
        let mut s = C64::default();
        for k in 1..=kmax {
            s += series.grunsky(m, k) * series.grunsky(l, k).conj() * k as f64;
        }
        let diag = if m == l { m as f64 } else { 0.0 };
        (c64(diag, 0.0) - s * (m * l) as f64) * (2.0 * PI)
    })
}

/// Orthonormal basis of `dF_1..dF_N` from [`faber_gram`].
pub fn faber_orthonormal_basis(series: &FaberSeries, n: usize) -> Result<GramBasis> {
    GramBasis::from_gram(faber_gram(series, n))
}

/// Harmonic function `c0 + Σ p_k F_k(w) + Σ q_k conj(F_k(w))` on `Ω₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorHarmonic {
    pub map: ExteriorMapPoly,
    pub c0: C64,
    /// `p_1..p_N`.
    pub holo: Vec<C64>,
    /// `q_1..q_N`.
    pub antiholo: Vec<C64>,
    /// Root-mean-square boundary misfit of the fit that produced it (0 when built directly).
    pub residual: f64,
}

impl InteriorHarmonic {
    /// Value at `w ∈ Ω₁`.
    pub fn eval(&self, w: C64) -> C64 {
        let n = self.holo.len();
        let f = faber_values(&self.map, w, n);
        let mut acc = self.c0;
        for ((p, q), fk) in self.holo.iter().zip(&self.antiholo).zip(&f[1..]) {
            acc += p * fk + q * fk.conj();
        }
        acc
    }

    /// Value on `Γ` at the parameter point `z = e^{iθ}` using the stable Laurent data.
    pub fn eval_on_curve(&self, series: &FaberSeries, z: C64) -> C64 {
        let mut acc = self.c0;
        for k in 1..=self.holo.len() {
            let f = series.eval(k, z);
            acc += self.holo[k - 1] * f + self.antiholo[k - 1] * f.conj();
        }
        acc
    }

    /// Monomial form `(P, Q)` with the function equal to `P(w) + conj(Q(w))`, `Q(0) = 0`.
    pub fn monomials(&self) -> (Vec<C64>, Vec<C64>) {
        let n = self.holo.len();
        let faber = faber_monomials(&self.map, n);
        let mut p = vec![C64::default(); n + 1];
        let mut q = vec![C64::default(); n + 1];
        p[0] = self.c0;
        for (k, poly) in faber.iter().enumerate() {
            for (j, &c) in poly.iter().enumerate() {
                p[j] += self.holo[k] * c;
                q[j] += self.antiholo[k].conj() * c;
            }
        }
        // fold the constant of conj(Q) into P
        p[0] += q[0].conj();
        q[0] = C64::default();
        (p, q)
    }
}

/// Least-squares Dirichlet solve on `Ω₁` in the basis `{1, F_k, conj F_k}` (`k ≤ N`)
/// against boundary data `f(θ)` given along `θ ↦ g(e^{iθ})` at `m` nodes.
pub fn interior_dirichlet_solve(
    g: &ExteriorMapPoly,
    f: &FourierFunction,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<InteriorHarmonic> {
    let series = FaberSeries::new(g, n, DEFAULT_SERIES_BOUND)?;
    interior_dirichlet_solve_with(g, &series, &f.samples(m), n, tol)
}

/// As [`interior_dirichlet_solve`], taking boundary samples at `θ_j = 2πj/m` directly.
pub fn interior_dirichlet_solve_with(
    g: &ExteriorMapPoly,
    series: &FaberSeries,
    samples: &[C64],
    n: usize,
    tol: f64,
) -> Result<InteriorHarmonic> {
    let m = samples.len();
    if m < 2 * n + 1 {
        return Err(ScatterError::DimensionMismatch {
            expected: 2 * n + 1,
            found: m,
        });
    }
    let mut a = CMat::zeros(m, 2 * n + 1);
    for j in 0..m {
        let z = c64(0.0, 2.0 * PI * j as f64 / m as f64).exp();
        a[(j, 0)] = c64(1.0, 0.0);
        for k in 1..=n {
            let v = series.eval(k, z);
            a[(j, k)] = v;
            a[(j, n + k)] = v.conj();
        }
    }
    let (x, misfit) = lstsq(&a, &CVec::from_column_slice(samples))?;
    let residual = misfit / (m as f64).sqrt();
    if residual > tol {
        return Err(ScatterError::ResidualTooLarge {
            what: "interior Dirichlet fit".into(),
            residual,
            tolerance: tol,
        });
    }
    Ok(InteriorHarmonic {
        map: g.clone(),
        c0: x[0],
        holo: (1..=n).map(|k| x[k]).collect(),
        antiholo: (1..=n).map(|k| x[n + k]).collect(),
        residual,
    })
}

/// Harmonic measure `ω = (log|z| − log r)/log(R/r)` of the outer circle on `r < |z| < R`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMeasureAnnulus {
    pub r: f64,
    pub big_r: f64,
    pub omega: AnnulusHarmonicFunction,
}

impl HarmonicMeasureAnnulus {
    /// `log(R/r)`.
    pub fn log_ratio(&self) -> f64 {
        (self.big_r / self.r).ln()
    }

    /// Coefficient `c` of `∂ω = c dz/z` (and of `∂̄ω = c dz̄/z̄`), `c = 1/(2 log(R/r))`.
    pub fn d_coefficient(&self) -> f64 {
        0.5 / self.log_ratio()
    }
}

/// Harmonic measure of `|z| = R` relative to `|z| = r`.
pub fn harmonic_measure(r: f64, big_r: f64) -> Result<HarmonicMeasureAnnulus> {
    if !(r > 0.0 && r < big_r && big_r.is_finite()) {
        return Err(ScatterError::InvalidConfig(format!(
            "annulus radii must satisfy 0 < r < R, got r = {r}, R = {big_r}"
        )));
    }
    let l = (big_r / r).ln();
    let omega = AnnulusHarmonicFunction::new(c64(-r.ln() / l, 0.0), c64(1.0 / l, 0.0), Vec::new(), r, big_r)?;
    Ok(HarmonicMeasureAnnulus { r, big_r, omega })
}

/// Boundary period matrix `Π₁₁ = ∫_{|z|=R} *dω = 2π / log(R/r)`.
pub fn period_matrix(r: f64, big_r: f64) -> Result<DMatrix<f64>> {
    let h = harmonic_measure(r, big_r)?;
    Ok(DMatrix::from_element(1, 1, 2.0 * PI / h.log_ratio()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn validate_examples() {
        let id = validate_config(&CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::identity())).unwrap();
        assert!(id.pass && id.margin == 1.0);
        let j = validate_config(&CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::joukowski(c64(
            0.5, 0.0,
        ))))
        .unwrap();
        assert!((j.margin - 0.5).abs() < 1e-15);
        assert!((j.extension_radius - 0.5f64.sqrt()).abs() < 1e-14);
        let bad = CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::joukowski(c64(2.0, 0.0)));
        assert!(matches!(validate_config(&bad), Err(ScatterError::InvalidConfig(_))));
        assert!(validate_config(&CurveConfig::ConcentricAnnulus { r: 2.0, big_r: 0.5 }).is_err());
    }

    #[test]
    fn faber_polynomials_of_joukowski() {
        let c = c64(0.3, 0.1);
        let f = faber_monomials(&ExteriorMapPoly::joukowski(c), 3);
        assert_eq!(f[0], vec![C64::default(), c64(1.0, 0.0)]);
        assert!(close(f[1][0], -c * 2.0, 1e-15) && f[1][1] == C64::default() && f[1][2] == c64(1.0, 0.0));
        assert!(close(f[2][1], -c * 3.0, 1e-15) && f[2][0] == C64::default());
    }

    #[test]
    fn grunsky_examples() {
        let id = grunsky_coefficients(&ExteriorMapPoly::identity(), 6).unwrap();
        assert!(id.b.iter().all(|x| *x == C64::default()));
        let c = c64(0.4, -0.2);
        let data = grunsky_coefficients(&ExteriorMapPoly::joukowski(c), 8).unwrap();
        for m in 1..=8 {
            for n in 1..=8 {
                let expected = if m == n {
                    c.powi(m as i32) / m as f64
                } else {
                    C64::default()
                };
                assert!(close(data.b[(m - 1, n - 1)], expected, 1e-15));
            }
            assert!(close(data.normalized[(m - 1, m - 1)], c.powi(m as i32), 1e-15));
        }
        assert!((crate::linalg::spectral_norm(&data.normalized) - c.norm()).abs() < 1e-12);
    }

    #[test]
    fn faber_series_matches_monomial_evaluation_at_low_degree() {
        let g = ExteriorMapPoly::new(c64(0.1, 0.2), vec![c64(0.2, 0.1), c64(-0.1, 0.05), c64(0.03, 0.0)]);
        let s = FaberSeries::new(&g, 6, DEFAULT_SERIES_BOUND).unwrap();
        assert!(s.duality_defect < 1e-13);
        let z = c64(1.3, 0.4);
        let vals = faber_values(&g, g.eval(z), 6);
        let dvals = faber_derivative_values(&g, g.eval(z), 6);
        for n in 1..=6 {
            assert!(close(s.eval(n, z), vals[n], 1e-11), "n = {n}");
            assert!(
                close(s.eval_derivative(n, z), dvals[n] * g.derivative(z), 1e-11),
                "n = {n}"
            );
        }
    }

    #[test]
    fn area_moment_examples() {
        let id = ExteriorMapPoly::identity();
        assert!(close(area_moment(&id, 0, 0, 64).unwrap(), c64(PI, 0.0), 1e-14));
        assert!(close(area_moment(&id, 1, 0, 64).unwrap(), C64::default(), 1e-14));
        assert!(close(area_moment(&id, 1, 1, 64).unwrap(), c64(PI / 2.0, 0.0), 1e-14));
        // ellipse with semi-axes 1 ± c has area π(1 − c²)
        let c = 0.3;
        let a = area_moment(&ExteriorMapPoly::joukowski(c64(c, 0.0)), 0, 0, 64).unwrap();
        assert!(close(a, c64(PI * (1.0 - c * c), 0.0), 1e-13));
    }

    #[test]
    fn gram_examples() {
        let id = gram_orthonormal_basis(&ExteriorMapPoly::identity(), 5, 64).unwrap();
        for n in 0..5 {
            assert!(close(
                id.factor[(n, n)],
                c64(((n + 1) as f64 / (2.0 * PI)).sqrt(), 0.0),
                1e-13
            ));
        }
        let g = ExteriorMapPoly::joukowski(c64(0.3, 0.0));
        let one = gram_orthonormal_basis(&g, 1, 64).unwrap();
        let area = area_moment(&g, 0, 0, 64).unwrap().re;
        assert!((one.factor[(0, 0)].re - (2.0 * area).powf(-0.5)).abs() < 1e-14);
        let zero_tail = ExteriorMapPoly::new(C64::default(), vec![C64::default(); 3]);
        assert_eq!(
            gram_orthonormal_basis(&zero_tail, 4, 64).unwrap(),
            gram_orthonormal_basis(&ExteriorMapPoly::identity(), 4, 64).unwrap()
        );
    }

    #[test]
    fn faber_gram_of_joukowski_is_diagonal() {
        let c = c64(0.5, 0.2);
        let s = FaberSeries::new(&ExteriorMapPoly::joukowski(c), 6, DEFAULT_SERIES_BOUND).unwrap();
        let g = faber_gram(&s, 6);
        for m in 1..=6 {
            for l in 1..=6 {
                let expected = if m == l {
                    2.0 * PI * m as f64 * (1.0 - c.norm_sqr().powi(m as i32))
                } else {
                    0.0
                };
                assert!(close(g[(m - 1, l - 1)], c64(expected, 0.0), 1e-13));
            }
        }
    }

    #[test]
    fn dirichlet_solve_examples() {
        let id = ExteriorMapPoly::identity();
        let e1 = FourierFunction::from_modes(1, &[(1, c64(1.0, 0.0))]).unwrap();
        let h = interior_dirichlet_solve(&id, &e1, 4, 64, 1e-10).unwrap();
        assert!(close(h.holo[0], c64(1.0, 0.0), 1e-14) && h.residual < 1e-14);
        let cos = FourierFunction::from_modes(1, &[(1, c64(0.5, 0.0)), (-1, c64(0.5, 0.0))]).unwrap();
        let h = interior_dirichlet_solve(&id, &cos, 4, 64, 1e-10).unwrap();
        let (p, q) = h.monomials();
        assert!(close(p[1], c64(0.5, 0.0), 1e-14) && close(q[1], c64(0.5, 0.0), 1e-14));

        let g = ExteriorMapPoly::joukowski(c64(0.3, 0.0));
        let m = 128;
        let samples: Vec<C64> = g.boundary(m).iter().map(|(w, _)| c64(w.re, 0.0)).collect();
        let s = FaberSeries::new(&g, 6, DEFAULT_SERIES_BOUND).unwrap();
        let h = interior_dirichlet_solve_with(&g, &s, &samples, 6, 1e-10).unwrap();
        assert!(h.residual < 1e-10);
        let w = c64(0.2, -0.3);
        assert!(close(h.eval(w), c64(w.re, 0.0), 1e-12));
    }

    #[test]
    fn harmonic_measure_examples() {
        let e = std::f64::consts::E;
        assert!((period_matrix(1.0, e).unwrap()[(0, 0)] - 2.0 * PI).abs() < 1e-14);
        assert!((period_matrix(1.0, e * e).unwrap()[(0, 0)] - PI).abs() < 1e-14);
        let h = harmonic_measure(0.5, 2.0).unwrap();
        assert!(h.omega.eval(c64(0.0, 0.5)).norm() < 1e-15);
        assert!((h.omega.eval(c64(-2.0, 0.0)) - c64(1.0, 0.0)).norm() < 1e-15);
    }
}
