//! Schiffer kernels and the comparison operators `T_{j,k}` on genus-zero configurations.
//!
//! Bases (all orthonormal for `(α, β) = ∬ α ∧ *β̄`):
//!
//! * `Σ₁ = Ω₁` holomorphic: `e_n = Σ_m C_{mn} dF_m`, the Gram–Schmidt orthonormalization of
//!   the Faber differentials (equivalently of `w^{n-1} dw`) with positive leading coefficients.
//! * `Σ₂ = Ω₂` holomorphic: `u_l = −d(ζ^{-l})/√(2πl)`, where `ζ = g^{-1}(w)`.
//! * Antiholomorphic bases are the conjugates `ē_n`, `ū_l`.
//! * Concentric circles: caps carry `√(n/2π) r^{-n} z^{n-1} dz` (inner) and
//!   `√(n/2π) R^n z^{-n-1} dz` (outer); the annulus carries `z^k dz / ν_k`, `−N−1 ≤ k ≤ N−1`.
//!
//! A block for `T_{j,k}` maps the antiholomorphic basis of `Σ_j` to the holomorphic basis
//! of `Σ_k`: column `n` holds the coefficients of `T_{j,k}` applied to the `n`-th domain vector.
//! With these choices `T₁₂ = T₂₁ᵀ` and `T_{k,k}` is symmetric, so the adjoint of a block is its
//! conjugate transpose and `T_{j,k}^* = conj(T_{k,j})`.

use std::f64::consts::PI;

use crate::error::{Result, ScatterError};
use crate::geometry::{
    faber_derivative_values, faber_orthonormal_basis, gram_orthonormal_basis, validate_config, CurveConfig,
    ExteriorMapPoly, FaberSeries, DEFAULT_SERIES_BOUND,
};
use crate::linalg::{c64, dft_coefficients, dft_mode, max_abs_entry, power_norm, upper_triangular_inverse, CMat, C64};

/// Which side of the curve a basis lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    One,
    Two,
    /// The compact surface itself (targets of `S`, sources of `R`).
    Surface,
}

/// Type of the one-forms in a basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    Holomorphic,
    Antiholomorphic,
}

impl FormKind {
    /// The other kind.
    pub fn conjugate(self) -> Self {
        match self {
            FormKind::Holomorphic => FormKind::Antiholomorphic,
            FormKind::Antiholomorphic => FormKind::Holomorphic,
        }
    }
}

/// Family of an orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisFamily {
    /// Monomial forms on the unit disk.
    DiskMonomial,
    /// Orthonormalized Faber differentials on `Ω₁`.
    FaberGram,
    /// Orthonormalized monomial forms `w^j dw` on `Ω₁`.
    MonomialGram,
    /// Pullbacks of `d(ζ^{-l})` under the exterior map.
    ExteriorPullback,
    /// Inner and outer cap monomials of the concentric configuration.
    CapMonomial,
    /// Laurent monomials `z^k dz` on the annulus.
    AnnulusMonomial,
    /// Fourier mode `k` on the strips of the square torus.
    TorusMode(i64),
    /// Zero-dimensional space.
    Empty,
}

/// Basis tag of a block's domain or codomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisTag {
    pub side: Side,
    pub family: BasisFamily,
    pub kind: FormKind,
    pub dim: usize,
}

impl BasisTag {
    /// Tag of the conjugate basis.
    pub fn conjugate(self) -> Self {
        Self {
            kind: self.kind.conjugate(),
            ..self
        }
    }
}

/// How a block was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Grunsky/Faber series.
    Series,
    /// Boundary-reduced trapezoid quadrature.
    Quadrature,
    /// Exact closed form.
    ClosedForm,
}

/// Dense operator matrix with basis and provenance tags.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBlock {
    pub matrix: CMat,
    pub domain: BasisTag,
    pub codomain: BasisTag,
    pub method: Method,
    pub truncation: usize,
}

impl OperatorBlock {
    /// Block of the Hilbert adjoint (conjugate transpose, tags swapped).
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            domain: self.codomain,
            codomain: self.domain,
            method: self.method,
            truncation: self.truncation,
        }
    }

    /// Block of the conjugate operator `ᾱ ↦ conj(T α)` (entrywise conjugate, tags conjugated).
    pub fn conjugate(&self) -> Self {
        Self {
            matrix: self.matrix.map(|z| z.conj()),
            domain: self.domain.conjugate(),
            codomain: self.codomain.conjugate(),
            method: self.method,
            truncation: self.truncation,
        }
    }
}

/// Density of `L_sphere(z, w) = −(1/2πi) dw dz/(w − z)²`; `K_sphere ≡ 0`.
pub fn kernel_l_sphere(z: C64, w: C64) -> Result<C64> {
    if z == w {
        return Err(ScatterError::SingularPoint);
    }
    Ok(-(c64(0.0, 2.0 * PI).inv()) / ((w - z) * (w - z)))
}

/// Density of the disk Bergman kernel `K_𝔻(z, w) = (1/2πi)/(1 − w̄z)²`.
pub fn kernel_k_disk(z: C64, w: C64) -> Result<C64> {
    let den = c64(1.0, 0.0) - w.conj() * z;
    if den == C64::default() {
        return Err(ScatterError::SingularPoint);
    }
    Ok(c64(0.0, 2.0 * PI).inv() / (den * den))
}

/// Densities `(L_𝔻, K_𝔻) = (−(1/2πi)/(w − z)², (1/2πi)/(1 − w̄z)²)`.
pub fn kernel_lk_disk(z: C64, w: C64) -> Result<(C64, C64)> {
    Ok((kernel_l_sphere(z, w)?, kernel_k_disk(z, w)?))
}

/// Four Schiffer blocks of a genus-zero configuration at a common truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct SchifferBlocks {
    pub t11: OperatorBlock,
    pub t12: OperatorBlock,
    pub t21: OperatorBlock,
    pub t22: OperatorBlock,
}

impl SchifferBlocks {
    /// Block `T_{j,k}` for `j, k ∈ {1, 2}`.
    pub fn get(&self, j: usize, k: usize) -> Result<&OperatorBlock> {
        match (j, k) {
            (1, 1) => Ok(&self.t11),
            (1, 2) => Ok(&self.t12),
            (2, 1) => Ok(&self.t21),
            (2, 2) => Ok(&self.t22),
            _ => Err(ScatterError::InvalidConfig(format!(
                "no block T_({j},{k}) at genus zero"
            ))),
        }
    }

    /// The same operators with the labels of the two sides exchanged.
    pub fn relabeled(&self) -> Self {
        Self {
            t11: self.t22.clone(),
            t12: self.t21.clone(),
            t21: self.t12.clone(),
            t22: self.t11.clone(),
        }
    }
}

fn tag(side: Side, family: BasisFamily, kind: FormKind, dim: usize) -> BasisTag {
    BasisTag {
        side,
        family,
        kind,
        dim,
    }
}

fn blocks_from(mats: [CMat; 4], fam1: BasisFamily, fam2: BasisFamily, method: Method, n: usize) -> SchifferBlocks {
    let [t11, t12, t21, t22] = mats;
    let d1 = t11.ncols();
    let d2 = t22.ncols();
    let h1 = tag(Side::One, fam1, FormKind::Holomorphic, d1);
    let h2 = tag(Side::Two, fam2, FormKind::Holomorphic, d2);
    let mk = |m: CMat, dom: BasisTag, cod: BasisTag| OperatorBlock {
        matrix: m,
        domain: dom,
        codomain: cod,
        method,
        truncation: n,
    };
    SchifferBlocks {
        t11: mk(t11, h1.conjugate(), h1),
        t12: mk(t12, h1.conjugate(), h2),
        t21: mk(t21, h2.conjugate(), h1),
        t22: mk(t22, h2.conjugate(), h2),
    }
}

/// Assembles all four blocks. `Series` falls back to the closed form for concentric circles;
/// `Quadrature` uses `m` boundary nodes and is available for single-curve configurations.
pub fn build_blocks(config: &CurveConfig, n: usize, method: Method, m: usize) -> Result<SchifferBlocks> {
    validate_config(config)?;
    if n == 0 {
        return Err(ScatterError::InvalidConfig("truncation must be positive".into()));
    }
    match (config, method) {
        (CurveConfig::ConcentricAnnulus { r, big_r }, Method::Series | Method::ClosedForm) => Ok(blocks_from(
            concentric_blocks(*r, *big_r, n),
            BasisFamily::CapMonomial,
            BasisFamily::AnnulusMonomial,
            Method::ClosedForm,
            n,
        )),
        (CurveConfig::ConcentricAnnulus { .. }, Method::Quadrature) => Err(ScatterError::Unsupported(
            "boundary quadrature assembly needs a single separating curve".into(),
        )),
        (CurveConfig::UnitCircle, Method::ClosedForm) => {
            let id = CMat::identity(n, n);
            let zero = CMat::zeros(n, n);
            Ok(blocks_from(
                [zero.clone(), id.clone(), id, zero],
                BasisFamily::DiskMonomial,
                BasisFamily::ExteriorPullback,
                Method::ClosedForm,
                n,
            ))
        }
        (_, Method::Series | Method::ClosedForm) => {
            let g = config.exterior_map().expect("single-curve configuration");
            Ok(blocks_from(
                series_blocks(&g, n)?,
                BasisFamily::FaberGram,
                BasisFamily::ExteriorPullback,
                Method::Series,
                n,
            ))
        }
        (_, Method::Quadrature) => {
            let g = config.exterior_map().expect("single-curve configuration");
            Ok(blocks_from(
                quadrature_blocks(&g, n, m)?,
                BasisFamily::MonomialGram,
                BasisFamily::ExteriorPullback,
                Method::Quadrature,
                n,
            ))
        }
    }
}

/// Single block `T_{j,k}`.
pub fn build_t(config: &CurveConfig, j: usize, k: usize, n: usize, method: Method, m: usize) -> Result<OperatorBlock> {
    build_blocks(config, n, method, m)?.get(j, k).cloned()
}

/// Genus-zero `S_k` (zero map into the trivial space `𝒜(sphere)`) and `R_k` (from it).
pub fn build_s_and_r(config: &CurveConfig, k: usize, n: usize) -> Result<(OperatorBlock, OperatorBlock)> {
    validate_config(config)?;
    let (side, family, dim) = match (config, k) {
        (CurveConfig::ConcentricAnnulus { .. }, 1) => (Side::One, BasisFamily::CapMonomial, 2 * n),
        (CurveConfig::ConcentricAnnulus { .. }, 2) => (Side::Two, BasisFamily::AnnulusMonomial, 2 * n + 1),
        (_, 1) => (Side::One, BasisFamily::FaberGram, n),
        (_, 2) => (Side::Two, BasisFamily::ExteriorPullback, n),
        _ => return Err(ScatterError::InvalidConfig(format!("no side {k} at genus zero"))),
    };
    let local = tag(side, family, FormKind::Holomorphic, dim);
    let surface = tag(Side::Surface, BasisFamily::Empty, FormKind::Holomorphic, 0);
    let s = OperatorBlock {
        matrix: CMat::zeros(0, dim),
        domain: local,
        codomain: surface,
        method: Method::ClosedForm,
        truncation: n,
    };
    let r = OperatorBlock {
        matrix: CMat::zeros(dim, 0),
        domain: surface,
        codomain: local,
        method: Method::ClosedForm,
        truncation: n,
    };
    Ok((s, r))
}

/// Series assembly from Faber/Grunsky data.
fn series_blocks(g: &ExteriorMapPoly, n: usize) -> Result<[CMat; 4]> {
    let d = g.degree();
    let kmax = (n * d).max(n);
    let series = FaberSeries::new(g, kmax, DEFAULT_SERIES_BOUND)?;
    let c = faber_orthonormal_basis(&series, n)?.factor;
    let c_conj = c.map(|z| z.conj());
    let b = |i: usize, j: usize| series.grunsky(i, j);

    // T₁₂ conj(dF_m) = Σ_l P_{lm} u_l
    let p = CMat::from_fn(n, n, |li, mi| {
        let (l, m) = (li + 1, mi + 1);
        let mut s = C64::default();
        for k in 1..=(m.min(l) * d) {
            s += b(m, k).conj() * b(l, k) * k as f64;
        }
        let diag = if l == m { (2.0 * PI * m as f64).sqrt() } else { 0.0 };
        c64(diag, 0.0) - s * (m as f64 * (2.0 * PI * l as f64).sqrt())
    });
    let t12 = &p * &c_conj;

    // T₁₁ conj(dF_m) = m Σ_k conj(b_{mk}) dF_k, then project on e_p with the Faber Gram rows.
    let a = CMat::from_fn(kmax, n, |ki, mi| b(mi + 1, ki + 1).conj() * (mi + 1) as f64);
    let gram_rows = CMat::from_fn(n, kmax, |ji, ki| {
        let (j, k) = (ji + 1, ki + 1);
        let mut s = C64::default();
        for i in 1..=(j.min(k) * d) {
            s += b(k, i) * b(j, i).conj() * i as f64;
        }
        let diag = if j == k { k as f64 } else { 0.0 };
        (c64(diag, 0.0) - s * (j * k) as f64) * (2.0 * PI)
    });
    // gram_rows[j, k] = (dF_k, dF_j)
    let t11 = c.adjoint() * gram_rows * a * &c_conj;

    let c_inv = upper_triangular_inverse(&c)?;
    let t21 = CMat::from_fn(n, n, |pi, mi| c_inv[(pi, mi)] / (2.0 * PI * (mi + 1) as f64).sqrt());
    let t22 = CMat::from_fn(n, n, |li, mi| {
        -b(li + 1, mi + 1) * (((li + 1) * (mi + 1)) as f64).sqrt()
    });
    Ok([t11, t12, t21, t22])
}

/// Closed-form blocks for the caps `|z| < r`, `|z| > R` around the annulus `r < |z| < R`.
fn concentric_blocks(r: f64, big_r: f64, n: usize) -> [CMat; 4] {
    let rho = r / big_r;
    let d1 = 2 * n;
    let d2 = 2 * n + 1;
    // annulus index of v_k is k + n + 1
    let v = |k: i64| (k + n as i64 + 1) as usize;
    let mut t11 = CMat::zeros(d1, d1);
    let mut t12 = CMat::zeros(d2, d1);
    let mut t22 = CMat::zeros(d2, d2);
    for i in 0..n {
        let k = (i + 1) as i32;
        let q = rho.powi(k);
        let s = (1.0 - q * q).sqrt();
        t11[(n + i, i)] = c64(q, 0.0);
        t11[(i, n + i)] = c64(q, 0.0);
        t12[(v(-(k as i64) - 1), i)] = c64(s, 0.0);
        t12[(v(k as i64 - 1), n + i)] = c64(s, 0.0);
        t22[(v(-(k as i64) - 1), v(k as i64 - 1))] = c64(-q, 0.0);
        t22[(v(k as i64 - 1), v(-(k as i64) - 1))] = c64(-q, 0.0);
    }
    t22[(v(-1), v(-1))] = c64(-1.0, 0.0);
    let t21 = t12.transpose();
    [t11, t12, t21, t22]
}

/// Normalization `ν_k` of the annulus basis `z^k dz / ν_k` on `r < |z| < R`.
pub fn annulus_basis_norm(r: f64, big_r: f64, k: i64) -> f64 {
    if k == -1 {
        (4.0 * PI * (big_r / r).ln()).sqrt()
    } else {
        let e = (2 * k + 2) as i32;
        (2.0 * PI * (big_r.powi(e) - r.powi(e)) / (k + 1) as f64).sqrt()
    }
}

/// Trapezoid data on `Γ`: nodes, `dw/dθ`, and the subtracted Cauchy matrix.
struct CurveQuadrature {
    w: Vec<C64>,
    dw: Vec<C64>,
    /// `K_{ij} = dw_j / (w_j − w_i) / (i m)` for `i ≠ j`.
    kernel: Vec<C64>,
    m: usize,
}

impl CurveQuadrature {
    fn new(g: &ExteriorMapPoly, m: usize) -> Self {
        let (w, dw): (Vec<C64>, Vec<C64>) = g.boundary(m).into_iter().unzip();
        let scale = c64(0.0, m as f64).inv();
        let mut kernel = vec![C64::default(); m * m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    kernel[i * m + j] = dw[j] / (w[j] - w[i]) * scale;
                }
            }
        }
        Self { w, dw, kernel, m }
    }

    /// `(1/2πi) ∮_Γ (h(w) − h(w_i))/(w − w_i) dw` at every node, with the diagonal limit `dh/dθ`.
    fn subtracted(&self, h: &[C64], dh: &[C64]) -> Vec<C64> {
        let m = self.m;
        let scale = c64(0.0, m as f64).inv();
        (0..m)
            .map(|i| {
                let row = &self.kernel[i * m..(i + 1) * m];
                let mut acc = dh[i] * scale;
                for j in 0..m {
                    if j != i {
                        acc += row[j] * (h[j] - h[i]);
                    }
                }
                acc
            })
            .collect()
    }

    /// `i ∮_Γ Φ conj(dΨ)` with `dΨ = psi_prime(w) dw`.
    fn interior_pairing(&self, phi: &[C64], psi_prime: &[C64]) -> C64 {
        let mut acc = C64::default();
        for i in 0..self.m {
            acc += phi[i] * (psi_prime[i] * self.dw[i]).conj();
        }
        acc * c64(0.0, 2.0 * PI / self.m as f64)
    }
}

/// Quadrature assembly through the jump relations `T₁₂∂̄h = ∂J₁₂h`, `T₁₁∂̄h = ∂J₁₁h`
/// for antiholomorphic `h`, with boundary values of the Cauchy integrals from the
/// subtracted trapezoid rule.
fn quadrature_blocks(g: &ExteriorMapPoly, n: usize, m: usize) -> Result<[CMat; 4]> {
    if m < 4 * n {
        return Err(ScatterError::InvalidConfig(format!(
            "quadrature needs at least 4N = {} nodes, got {m}",
            4 * n
        )));
    }
    // the blocks are translation invariant, and centred monomials keep the Gram matrix
    // well conditioned; both flags span the same spaces, so the orthonormal bases coincide
    let centred = ExteriorMapPoly::with_kappa(C64::default(), g.tail.clone(), g.kappa_max);
    let g = &centred;
    let c = gram_orthonormal_basis(g, n, m)?.factor;
    let q = CurveQuadrature::new(g, m);
    // e_p = Ψ_p'(w) dw with Ψ_p' = Σ_j C_{jp} w^j; H_p = Σ_j C_{jp} w^{j+1}/(j+1)
    let mut psi_prime = vec![vec![C64::default(); m]; n];
    let mut primitive = vec![vec![C64::default(); m]; n];
    for i in 0..m {
        let w = q.w[i];
        let mut wp = c64(1.0, 0.0);
        let powers: Vec<C64> = (0..=n)
            .map(|_| {
                let v = wp;
                wp *= w;
                v
            })
            .collect();
        for p in 0..n {
            let mut d = C64::default();
            let mut h = C64::default();
            for j in 0..=p {
                d += c[(j, p)] * powers[j];
                h += c[(j, p)] * powers[j + 1] / (j + 1) as f64;
            }
            psi_prime[p][i] = d;
            primitive[p][i] = h;
        }
    }
    let exterior_coeffs = |vals: &[C64]| -> Vec<C64> {
        let f = dft_coefficients(vals);
        (1..=n)
            .map(|l| -dft_mode(&f, -(l as i64)) * (2.0 * PI * l as f64).sqrt())
            .collect()
    };
    let mut t11 = CMat::zeros(n, n);
    let mut t12 = CMat::zeros(n, n);
    let mut t21 = CMat::zeros(n, n);
    let mut t22 = CMat::zeros(n, n);
    for col in 0..n {
        // h = conj(H_col) on Σ₁
        let h: Vec<C64> = primitive[col].iter().map(|v| v.conj()).collect();
        let dh: Vec<C64> = (0..m).map(|i| (psi_prime[col][i] * q.dw[i]).conj()).collect();
        let sub = q.subtracted(&h, &dh);
        let inside: Vec<C64> = sub.iter().zip(&h).map(|(s, v)| s + v).collect();
        for (l, v) in exterior_coeffs(&sub).into_iter().enumerate() {
            t12[(l, col)] = v;
        }
        for p in 0..n {
            t11[(p, col)] = q.interior_pairing(&inside, &psi_prime[p]);
        }

        // h = conj(U_l), U_l = −ζ^{-l}/√(2πl) on Σ₂, integrated over −Γ
        let l = (col + 1) as f64;
        let norm = (2.0 * PI * l).sqrt();
        let h: Vec<C64> = (0..m)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / m as f64;
                -c64(0.0, l * t).exp() / norm
            })
            .collect();
        let dh: Vec<C64> = h.iter().map(|v| v * c64(0.0, l)).collect();
        let sub: Vec<C64> = q.subtracted(&h, &dh).into_iter().map(|s| -s).collect();
        let inside: Vec<C64> = sub.iter().zip(&h).map(|(s, v)| s - v).collect();
        for (k, v) in exterior_coeffs(&sub).into_iter().enumerate() {
            t22[(k, col)] = v;
        }
        for p in 0..n {
            t21[(p, col)] = q.interior_pairing(&inside, &psi_prime[p]);
        }
    }
    Ok([t11, t12, t21, t22])
}

/// Largest entrywise difference between series and quadrature assemblies;
/// `MethodDisagreement` above `tol`.
pub fn cross_validate(config: &CurveConfig, n: usize, m: usize, tol: f64) -> Result<f64> {
    let s = build_blocks(config, n, Method::Series, m)?;
    let q = build_blocks(config, n, Method::Quadrature, m)?;
    let diff = [(&s.t11, &q.t11), (&s.t12, &q.t12), (&s.t21, &q.t21), (&s.t22, &q.t22)]
        .iter()
        .map(|(a, b)| max_abs_entry(&(&a.matrix - &b.matrix)))
        .fold(0.0, f64::max);
    if diff > tol {
        return Err(ScatterError::MethodDisagreement {
            difference: diff,
            tolerance: tol,
        });
    }
    Ok(diff)
}

/// Residuals of the genus-zero quadratic identities and of the adjoint relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticReport {
    /// `‖I − (T₁₁*T₁₁ + T₁₂*T₁₂)‖`.
    pub first: f64,
    /// `‖I − (T₂₁*T₂₁ + T₂₂*T₂₂)‖`.
    pub second: f64,
    /// `‖T₁₁*T₂₁ + T₁₂*T₂₂‖`.
    pub third: f64,
    /// `‖T₂₂*T₁₂ + T₂₁*T₁₁‖`.
    pub fourth: f64,
    /// `max(‖T₁₂* − conj(T₂₁)‖, ‖T₁₁* − conj(T₁₁)‖, ‖T₂₂* − conj(T₂₂)‖)`, entrywise maximum.
    pub adjoint: f64,
    /// Largest power-iteration residual among the norms above.
    pub power_residual: f64,
}

impl QuadraticReport {
    /// Largest of the four identity residuals.
    pub fn max_identity(&self) -> f64 {
        self.first.max(self.second).max(self.third).max(self.fourth)
    }
}

/// Spectral-norm residuals (power iteration, fixed seed) of the four genus-zero identities.
pub fn verify_quadratic_identities(blocks: &SchifferBlocks) -> Result<QuadraticReport> {
    let (t11, t12, t21, t22) = (
        &blocks.t11.matrix,
        &blocks.t12.matrix,
        &blocks.t21.matrix,
        &blocks.t22.matrix,
    );
    let d1 = t11.ncols();
    let d2 = t22.ncols();
    let shapes = [
        (t11.shape(), (d1, d1)),
        (t12.shape(), (d2, d1)),
        (t21.shape(), (d1, d2)),
        (t22.shape(), (d2, d2)),
    ];
    for (found, expected) in shapes {
        if found != expected {
            return Err(ScatterError::DimensionMismatch {
                expected: expected.0 * expected.1,
                found: found.0 * found.1,
            });
        }
    }
    let mats = [
        CMat::identity(d1, d1) - (t11.adjoint() * t11 + t12.adjoint() * t12),
        CMat::identity(d2, d2) - (t21.adjoint() * t21 + t22.adjoint() * t22),
        t11.adjoint() * t21 + t12.adjoint() * t22,
        t22.adjoint() * t12 + t21.adjoint() * t11,
    ];
    let norms: Vec<_> = mats.iter().map(power_norm).collect();
    let conj = |a: &CMat| a.map(|z| z.conj());
    let adjoint = max_abs_entry(&(t12.adjoint() - conj(t21)))
        .max(max_abs_entry(&(t11.adjoint() - conj(t11))))
        .max(max_abs_entry(&(t22.adjoint() - conj(t22))));
    Ok(QuadraticReport {
        first: norms[0].norm,
        second: norms[1].norm,
        third: norms[2].norm,
        fourth: norms[3].norm,
        adjoint,
        power_residual: norms.iter().map(|p| p.residual).fold(0.0, f64::max),
    })
}

/// Tolerance for the quadratic identities at truncation `n`:
/// `max(1e-9, 3|b₁|^{2(N+1)})` for degree-one maps, `max(1e-9, 3(N+1)²ρ^{2(N+1)})` with the
/// certified univalence radius `ρ` otherwise, and `1e-9` for closed-form configurations.
pub fn quadratic_tolerance(config: &CurveConfig, n: usize) -> f64 {
    let e = 2 * (n as i32 + 1);
    match config {
        CurveConfig::ExteriorPolyCurve(g) if g.degree() == 1 => (3.0 * g.b(1).norm().powi(e)).max(1e-9),
        CurveConfig::ExteriorPolyCurve(g) if g.degree() > 1 => {
            (3.0 * ((n + 1) * (n + 1)) as f64 * g.univalence_radius().powi(e)).max(1e-9)
        }
        _ => 1e-9,
    }
}

/// Value of `PV ∬_{Σ₁} L_{Σ₁}(z, ·) ∧ ᾱ` at each sample `z`, for `ᾱ = Σ a_n ē_n`.
///
/// The principal value of the sphere kernel is reduced to `(1/2πi) ∮_Γ conj(H(w))/(w − z)² dw`
/// (with `dH = α`), and the regular part `L_ℝ − L_{Σ₁}` contributes `T₁₁ᾱ` from the series.
/// Their difference vanishes by Schiffer's identity. The contour integral is checked at `m`
/// and `2m` nodes.
pub fn schiffer_identity_check(config: &CurveConfig, coeffs: &[C64], samples: &[C64], m: usize) -> Result<f64> {
    validate_config(config)?;
    if coeffs.iter().all(|a| *a == C64::default()) {
        return Ok(0.0);
    }
    let g = config
        .exterior_map()
        .ok_or_else(|| ScatterError::Unsupported("Schiffer identity check needs a single separating curve".into()))?;
    let n = coeffs.len();
    let blocks = build_blocks(config, n, Method::Series, m)?;
    let series = FaberSeries::new(&g, n, DEFAULT_SERIES_BOUND)?;
    let c = faber_orthonormal_basis(&series, n)?.factor;
    // α = Σ_n a_n e_n with coefficients x_m on dF_m
    let x: Vec<C64> = (0..n)
        .map(|mi| (0..n).map(|ni| c[(mi, ni)] * coeffs[ni].conj()).sum())
        .collect();
    let t_col: Vec<C64> = (0..n)
        .map(|p| (0..n).map(|ni| blocks.t11.matrix[(p, ni)] * coeffs[ni]).sum())
        .collect();
    let contour = |z: C64, nodes: usize| -> Result<C64> {
        let mut acc = C64::default();
        let mut dmin = f64::INFINITY;
        for j in 0..nodes {
            let zeta = c64(0.0, 2.0 * PI * j as f64 / nodes as f64).exp();
            let w = g.eval(zeta);
            let dw = g.derivative(zeta) * c64(0.0, 1.0) * zeta;
            let mut h = C64::default();
            for (k, xk) in x.iter().enumerate() {
                h += xk * series.eval(k + 1, zeta);
            }
            dmin = dmin.min((w - z).norm());
            acc += h.conj() / ((w - z) * (w - z)) * dw;
        }
        if dmin < 1e-3 {
            return Err(ScatterError::SampleNearCurve {
                distance: dmin,
                minimum: 1e-3,
            });
        }
        Ok(acc * (2.0 * PI / nodes as f64) / c64(0.0, 2.0 * PI))
    };
    let mut worst: f64 = 0.0;
    for &z in samples {
        let coarse = contour(z, m)?;
        let fine = contour(z, 2 * m)?;
        let change = (fine - coarse).norm();
        if change > 1e-10 * coarse.norm().max(1.0) {
            return Err(ScatterError::NonConvergent {
                what: "Schiffer identity contour integral".into(),
                change,
                tolerance: 1e-10,
            });
        }
        let dfz = faber_derivative_values(&g, z, n);
        let mut regular = C64::default();
        for p in 0..n {
            let mut ep = C64::default();
            for mi in 0..=p {
                ep += c[(mi, p)] * dfz[mi + 1];
            }
            regular += t_col[p] * ep;
        }
        worst = worst.max((fine - regular).norm());
    }
    Ok(worst)
}
