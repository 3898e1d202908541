//! The square torus `ℂ/(ℤ + iℤ)` cut by the horizontal circles `y = y₁` and `y = y₂` into the
//! strips `Σ₁ = {y₁ < y < y₂}` and `Σ₂ = {y₂ < y < y₁ + 1}`.
//!
//! Translation in `x` splits every operator into Fourier modes `k`. On mode `k ≠ 0` each strip
//! carries one holomorphic form `e^{2πikz} dz` and one antiholomorphic form `e^{2πikz̄} dz̄`;
//! mode `0` carries `dz`, `dz̄` and the global holomorphic form `dz` of the torus. Translation in
//! `y` multiplies these forms by positive constants, so only the heights `h₁ = y₂ − y₁` and
//! `h₂ = 1 − h₁` enter the normalized blocks.

use std::f64::consts::PI;

use crate::error::{Result, ScatterError};
use crate::linalg::{c64, max_abs_entry, CMat, CVec, C64};
use crate::scattering::{index_of, CompatibleTriple, IndexEstimate, ScatteringMatrix};
use crate::schiffer::{BasisFamily, BasisTag, FormKind, Method, OperatorBlock, Side};

/// Largest supported mode cutoff; the normalizations stay inside `f64` range below it.
pub const MAX_MODES: usize = 32;

/// Strip configuration on the square torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusConfig {
    pub y1: f64,
    pub y2: f64,
    /// Mode cutoff `K`: modes `−K..=K` are assembled.
    pub modes: usize,
    /// Half-width `L` of the square lattice cutoff `max(|m|, |n|) ≤ L`.
    pub lattice_cutoff: usize,
}

impl Default for TorusConfig {
    fn default() -> Self {
        Self {
            y1: 0.0,
            y2: 0.5,
            modes: 8,
            lattice_cutoff: 64,
        }
    }
}

impl TorusConfig {
    /// Checks `0 ≤ y₁ < y₂ < 1`, `K ≤ MAX_MODES` and a lattice cutoff of at least 4.
    pub fn validate(&self) -> Result<()> {
        if !(self.y1.is_finite() && self.y2.is_finite() && 0.0 <= self.y1 && self.y1 < self.y2 && self.y2 < 1.0) {
            return Err(ScatterError::InvalidConfig(format!(
                "torus slices must satisfy 0 <= y1 < y2 < 1, got y1 = {}, y2 = {}",
                self.y1, self.y2
            )));
        }
        if self.modes > MAX_MODES {
            return Err(ScatterError::InvalidConfig(format!(
                "torus mode cutoff {} exceeds {MAX_MODES}",
                self.modes
            )));
        }
        if self.lattice_cutoff < 4 {
            return Err(ScatterError::InvalidConfig(format!(
                "lattice cutoff {} is below 4",
                self.lattice_cutoff
            )));
        }
        Ok(())
    }

    /// Height (and area) of `Σ₁`.
    pub fn h1(&self) -> f64 {
        self.y2 - self.y1
    }

    /// Height (and area) of `Σ₂`.
    pub fn h2(&self) -> f64 {
        1.0 - self.h1()
    }
}

/// `q = e^{−2π}`, the nome of the square lattice.
fn nome() -> f64 {
    (-2.0 * PI).exp()
}

/// Eisenstein series `G₄ = Σ' ω^{-4}` of the square lattice from its `q`-expansion.
pub fn eisenstein_g4() -> f64 {
    let q = nome();
    let mut e4 = 1.0;
    for n in 1..=12u32 {
        let sigma3: f64 = (1..=n).filter(|d| n % d == 0).map(|d| (d as f64).powi(3)).sum();
        e4 += 240.0 * sigma3 * q.powi(n as i32);
    }
    PI.powi(4) / 45.0 * e4
}

/// Weierstrass `℘` of the square lattice by its `q`-expansion, valid for `0 < Im u < 1`.
pub fn weierstrass_p_series(u: C64) -> Result<C64> {
    if !(u.im > 0.0 && u.im < 1.0) {
        return Err(ScatterError::InvalidConfig(format!(
            "q-expansion needs 0 < Im u < 1, got {}",
            u.im
        )));
    }
    let q = nome();
    let mut acc = c64(-PI, 0.0);
    for n in 1..=200 {
        let nf = n as f64;
        let qn = q.powi(n);
        let term = (c64(0.0, 2.0 * PI * nf) * u).exp() + (c64(0.0, -2.0 * PI * nf) * u).exp() * qn;
        let weight = 4.0 * PI * PI * nf / (1.0 - qn);
        acc -= term * weight;
        let bound = weight * ((-2.0 * PI * nf * u.im).exp() + qn * (2.0 * PI * nf * u.im).exp());
        if bound < 1e-18 * acc.norm() {
            break;
        }
    }
    Ok(acc)
}

/// Lattice evaluation of `℘(u)` with its tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub value: C64,
    pub tail_bound: f64,
}

/// `℘(u) = u^{-2} + Σ' [(u − ω)^{-2} − ω^{-2}]` over the square cutoff `max(|m|, |n|) ≤ L`.
///
/// `u` is first reduced to the period square centered at 0. The shells beyond `L` contribute
/// `Σ_{p ≡ 2 (4)} (p+1) u^p Σ ω^{-p-2}`; the `p = 2` part is added exactly through `G₄` and
/// the remaining terms are bounded by `Σ_{p ≥ 6} (p+1)|u|^p 8/(p L^p)`.
pub fn weierstrass_p_lattice(u: C64, cutoff: usize) -> Result<LatticeSum> {
    let u = c64(u.re - u.re.round(), u.im - u.im.round());
    if u.norm() < 1e-12 {
        return Err(ScatterError::SingularPoint);
    }
    let l = cutoff as i64;
    let mut value = u.inv() * u.inv();
    let mut g4_inner = 0.0;
    for m in -l..=l {
        for n in -l..=l {
            if m == 0 && n == 0 {
                continue;
            }
            let w = c64(m as f64, n as f64);
            let d = u - w;
            value += (d * d).inv() - (w * w).inv();
            g4_inner += (w * w * w * w).inv().re;
        }
    }
    value += u * u * 3.0 * (eisenstein_g4() - g4_inner);
    let lf = cutoff as f64;
    let x = u.norm() / lf;
    let mut tail_bound = 0.0;
    let mut p = 6;
    while p < 400 {
        let t = (p + 1) as f64 * 8.0 / p as f64 * x.powi(p);
        tail_bound += t;
        if t < 1e-300 {
            break;
        }
        p += 4;
    }
    Ok(LatticeSum { value, tail_bound })
}

/// Densities of the torus kernels at `u = w − z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusKernels {
    /// Coefficient of `dz dw` in `L_𝕋(z, w)`.
    pub l_density: C64,
    /// Coefficient of `dz dw̄` in `K_𝕋(z, w)`.
    pub k_constant: C64,
    pub tail_bound: f64,
}

/// Bergman kernel constant, fixed by `∬_𝕋 K(z, w) ∧ dw = dz` and `dw̄ ∧ dw = 2i dA`.
pub fn bergman_constant() -> C64 {
    c64(0.0, 2.0).inv()
}

/// `L = −(1/2πi) ℘(u) dz dw` and the constant Bergman kernel; `TailTooLarge` if the lattice
/// tail bound exceeds `tol`.
pub fn torus_kernels(u: C64, cutoff: usize, tol: f64) -> Result<TorusKernels> {
    let p = weierstrass_p_lattice(u, cutoff)?;
    if p.tail_bound > tol {
        return Err(ScatterError::TailTooLarge {
            bound: p.tail_bound,
            tolerance: tol,
        });
    }
    Ok(TorusKernels {
        l_density: -p.value / c64(0.0, 2.0 * PI),
        k_constant: bergman_constant(),
        tail_bound: p.tail_bound,
    })
}

/// `|∬_𝕋 K(z, w) ∧ dw − 1|` by the midpoint rule on a `grid × grid` mesh.
pub fn bergman_reproducing_residual(grid: usize) -> f64 {
    let da = 1.0 / (grid * grid) as f64;
    let mut acc = C64::default();
    for _ in 0..grid * grid {
        // K dz dw̄ ∧ dw = K · 2i dA dz
        acc += bergman_constant() * c64(0.0, 2.0) * da;
    }
    (acc - c64(1.0, 0.0)).norm()
}

/// `x`-Fourier coefficient of `℘` at height `0 < t < 1` for frequency `k`.
pub fn p_fourier_coefficient(k: i64, t: f64) -> f64 {
    let q = nome();
    let a = 2.0 * PI * k.unsigned_abs() as f64;
    let kf = k.unsigned_abs() as f64;
    let qk = q.powf(kf);
    match k.signum() {
        0 => -PI,
        1 => -4.0 * PI * PI * kf * (-a * t).exp() / (1.0 - qk),
        _ => -4.0 * PI * PI * kf * qk * (a * t).exp() / (1.0 - qk),
    }
}

/// Normalized blocks of one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBlock {
    pub k: i64,
    pub t11: CMat,
    pub t12: CMat,
    pub t21: CMat,
    pub t22: CMat,
    /// `S_j: 𝒜(Σ_j) → 𝒜(𝕋)`; `1×1` at `k = 0`, `0×1` otherwise.
    pub s1: CMat,
    pub s2: CMat,
    /// `R_j: 𝒜(𝕋) → 𝒜(Σ_j)`.
    pub r1: CMat,
    pub r2: CMat,
}

fn scalar(x: f64) -> CMat {
    CMat::from_element(1, 1, c64(x, 0.0))
}

/// Closed-form blocks of mode `k` (bases `e^{2πikz}dz`, `e^{2πikz̄}dz̄` normalized per strip).
pub fn build_mode_operators(cfg: &TorusConfig, k: i64) -> Result<ModeBlock> {
    cfg.validate()?;
    if k.unsigned_abs() as usize > cfg.modes {
        return Err(ScatterError::InvalidConfig(format!(
            "mode {k} exceeds cutoff {}",
            cfg.modes
        )));
    }
    let (h1, h2) = (cfg.h1(), cfg.h2());
    if k == 0 {
        let c = (h1 * h2).sqrt();
        return Ok(ModeBlock {
            k,
            t11: scalar(h2),
            t12: scalar(-c),
            t21: scalar(-c),
            t22: scalar(h1),
            s1: scalar(h1.sqrt()),
            s2: scalar(h2.sqrt()),
            r1: scalar(h1.sqrt()),
            r2: scalar(h2.sqrt()),
        });
    }
    let a = 2.0 * PI * k.unsigned_abs() as f64;
    let p = (-a * h1).exp();
    let r = (-a * h2).exp();
    let den = 1.0 - p * r;
    let cross = -((-(-2.0 * a * h1).exp_m1()) * (-(-2.0 * a * h2).exp_m1())).sqrt() / den;
    Ok(ModeBlock {
        k,
        t11: scalar((p - r) / den),
        t12: scalar(cross),
        t21: scalar(cross),
        t22: scalar((r - p) / den),
        s1: CMat::zeros(0, 1),
        s2: CMat::zeros(0, 1),
        r1: CMat::zeros(1, 0),
        r2: CMat::zeros(1, 0),
    })
}

/// `T₁₂` (source strip height `h₁`) or `T₂₁` (source height `h₂`) of mode `k` by composite
/// Simpson quadrature of `(1/π) ∫ c_k(y_z − y_w) e^{2πk y_w} dy_w` over the source strip.
pub fn cross_entry_by_quadrature(k: i64, h_src: f64, nodes: usize) -> f64 {
    let a = 2.0 * PI * k as f64;
    let nodes = nodes + nodes % 2;
    let yz = 0.5 * (h_src + 1.0);
    let step = h_src / nodes as f64;
    let mut integral = 0.0;
    for i in 0..=nodes {
        let y = i as f64 * step;
        let w = if i == 0 || i == nodes {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        integral += w * p_fourier_coefficient(k, yz - y) * (a * y).exp();
    }
    integral *= step / 3.0;
    // norms: antiholomorphic source 2∫_0^h e^{2ay}, holomorphic target 2∫_h^1 e^{-2ay}
    let norm = |s: f64, lo: f64, hi: f64| -> f64 {
        if s == 0.0 {
            2.0 * (hi - lo)
        } else {
            2.0 * ((s * hi).exp() - (s * lo).exp()) / s
        }
    };
    let src = norm(2.0 * a, 0.0, h_src);
    let dst = norm(-2.0 * a, h_src, 1.0);
    integral / PI / src.sqrt() * dst.sqrt() * (a * yz).exp()
}

fn tag(side: Side, k: i64, kind: FormKind, dim: usize) -> BasisTag {
    BasisTag {
        side,
        family: BasisFamily::TorusMode(k),
        kind,
        dim,
    }
}

fn block(matrix: CMat, domain: BasisTag, codomain: BasisTag, n: usize) -> OperatorBlock {
    OperatorBlock {
        matrix,
        domain,
        codomain,
        method: Method::ClosedForm,
        truncation: n,
    }
}

/// Scattering matrix of mode `k`: `(−T̄₁₁, −T̄₂₁, R̄₁; −T̄₁₂, −T̄₂₂, R̄₂; S₁, S₂, 0)` at `k = 0`,
/// the upper `2×2` part otherwise.
///
/// Conjugation sends the frequency `−k` forms to frequency `k`, so the `T̄` entries are those
/// of mode `−k`; they coincide with mode `k`.
pub fn scattering_3x3(cfg: &TorusConfig, k: i64) -> Result<ScatteringMatrix> {
    let m = build_mode_operators(cfg, -k)?;
    let s = build_mode_operators(cfg, k)?;
    let neg_conj = |a: &CMat| -a.map(|z| z.conj());
    let conj = |a: &CMat| a.map(|z| z.conj());
    let h1 = tag(Side::One, k, FormKind::Holomorphic, 1);
    let h2 = tag(Side::Two, k, FormKind::Holomorphic, 1);
    let dim_s = s.s1.nrows();
    let surf = tag(Side::Surface, k, FormKind::Holomorphic, dim_s);
    let n = cfg.modes;
    let mut rows = vec![
        vec![
            block(neg_conj(&m.t11), h1, h1.conjugate(), n),
            block(neg_conj(&m.t21), h2, h1.conjugate(), n),
        ],
        vec![
            block(neg_conj(&m.t12), h1, h2.conjugate(), n),
            block(neg_conj(&m.t22), h2, h2.conjugate(), n),
        ],
    ];
    if dim_s > 0 {
        rows[0].push(block(conj(&s.r1), surf.conjugate(), h1.conjugate(), n));
        rows[1].push(block(conj(&s.r2), surf.conjugate(), h2.conjugate(), n));
        rows.push(vec![
            block(s.s1.clone(), h1, surf, n),
            block(s.s2.clone(), h2, surf, n),
            block(CMat::zeros(dim_s, dim_s), surf.conjugate(), surf, n),
        ]);
    }
    ScatteringMatrix::new(rows)
}

/// Assembled `T₁₂` over modes `−K..=K` (block diagonal).
pub fn assembled_t12(cfg: &TorusConfig) -> Result<CMat> {
    let k = cfg.modes as i64;
    let dim = 2 * cfg.modes + 1;
    let mut t = CMat::zeros(dim, dim);
    for (i, mode) in (-k..=k).enumerate() {
        t[(i, i)] = build_mode_operators(cfg, mode)?.t12[(0, 0)];
    }
    Ok(t)
}

/// Index estimate of the assembled `T₁₂`.
pub fn torus_index(cfg: &TorusConfig, rel: f64) -> Result<IndexEstimate> {
    index_of(&assembled_t12(cfg)?, rel)
}

/// Per-mode residuals: blocks of `S*S − I` grouped by identity family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIdentities {
    pub k: i64,
    /// Diagonal block on `Σ₁`.
    pub first: f64,
    /// Diagonal block on `Σ₂`.
    pub second: f64,
    /// Off-diagonal blocks between the strips.
    pub cross: f64,
    /// Blocks involving `𝒜(𝕋)` (mode 0 only).
    pub augmented: f64,
    pub unitarity: f64,
}

/// Identity residuals of the torus configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusReport {
    pub modes: Vec<ModeIdentities>,
    /// `|S₁S₁* + S₂S₂* − I|` on `𝒜(𝕋)`.
    pub s_completeness: f64,
    /// `|T₁₁∂̄ω₁ + ∂ω₁ − R₁S₁∂ω₁|`.
    pub harmonic_measure: f64,
    /// `|S₁ʰdω₁ + S₂ʰdω₂|` with `ω₂` the overfare of `ω₁`.
    pub catalyzing: f64,
    /// Largest entry of the assembled `T₁₂` outside its mode-diagonal.
    pub cross_mode: f64,
    pub index: IndexEstimate,
}

impl TorusReport {
    /// Largest unitarity residual over the modes.
    pub fn max_unitarity(&self) -> f64 {
        self.modes.iter().map(|m| m.unitarity).fold(0.0, f64::max)
    }

    /// Largest identity residual over the modes.
    pub fn max_identity(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| m.first.max(m.second).max(m.cross).max(m.augmented))
            .fold(0.0, f64::max)
    }
}

/// Orthonormal coefficients `(holo, antiholo)` of `dω₁` and `dω₂` at mode 0.
fn measure_coefficients(cfg: &TorusConfig) -> (C64, C64) {
    // dy = (dz − dz̄)/(2i); ω₁ = (y − y₁)/h₁, ω₂ = (y₁ + 1 − y)/h₂; e_j = dz/√(2h_j)
    let (h1, h2) = (cfg.h1(), cfg.h2());
    let c1 = c64(0.0, 2.0 * h1).inv() * (2.0 * h1).sqrt();
    let c2 = -c64(0.0, 2.0 * h2).inv() * (2.0 * h2).sqrt();
    (c1, c2)
}

/// Runs the per-mode identities, the mode-0 measure identities and the index estimate.
pub fn torus_identity_suite(cfg: &TorusConfig) -> Result<TorusReport> {
    cfg.validate()?;
    let kmax = cfg.modes as i64;
    let mut modes = Vec::new();
    for k in -kmax..=kmax {
        let s = scattering_3x3(cfg, k)?;
        let a = s.assembled();
        let defect = a.adjoint() * &a - CMat::identity(a.ncols(), a.ncols());
        let part = |r: usize, c: usize| defect[(r, c)].norm();
        let augmented = if a.ncols() == 3 {
            [(0, 2), (1, 2), (2, 0), (2, 1), (2, 2)]
                .iter()
                .map(|&(r, c)| part(r, c))
                .fold(0.0, f64::max)
        } else {
            0.0
        };
        modes.push(ModeIdentities {
            k,
            first: part(0, 0),
            second: part(1, 1),
            cross: part(0, 1).max(part(1, 0)),
            augmented,
            unitarity: s.unitarity_residual,
        });
    }
    let m0 = build_mode_operators(cfg, 0)?;
    let s_completeness = (&m0.s1 * m0.s1.adjoint() + &m0.s2 * m0.s2.adjoint() - CMat::identity(1, 1))[(0, 0)].norm();
    let (c1, c2) = measure_coefficients(cfg);
    // ∂̄ω₁ = conj(∂ω₁) on the conjugate basis
    let harmonic_measure = (m0.t11[(0, 0)] * c1.conj() + c1 - (&m0.r1 * &m0.s1)[(0, 0)] * c1).norm();
    let holo = m0.s1[(0, 0)] * c1 + m0.s2[(0, 0)] * c2;
    let anti = m0.s1[(0, 0)] * c1.conj() + m0.s2[(0, 0)] * c2.conj();
    let catalyzing = (holo.norm_sqr() + anti.norm_sqr()).sqrt();
    let t12 = assembled_t12(cfg)?;
    let off = CMat::from_fn(t12.nrows(), t12.ncols(), |i, j| {
        if i == j {
            C64::default()
        } else {
            t12[(i, j)]
        }
    });
    Ok(TorusReport {
        modes,
        s_completeness,
        harmonic_measure,
        catalyzing,
        cross_mode: max_abs_entry(&off),
        index: torus_index(cfg, crate::scattering::DEFAULT_INDEX_THRESHOLD)?,
    })
}

/// Tolerance on the `Σ₂` period in [`torus_compatible_from`].
pub const TORUS_PERIOD_TOLERANCE: f64 = 1e-10;

/// Compatible triple of mode `k` from `α₂ + β̄₂` on `Σ₂` and (at `k = 0`) `ζ = [ξ, η̄]`:
/// `α₁ + β̄₁ = O(α₂ + β̄₂ − R₂ʰζ) + R₁ʰζ`. At `k = 0` the form `α₂ + β̄₂ − R₂ʰζ` must have zero
/// period around the strip (else `NotSemiExact`); at `k ≠ 0` `ζ` must be empty.
pub fn torus_compatible_from(
    cfg: &TorusConfig,
    k: i64,
    alpha2: C64,
    beta2bar: C64,
    zeta: &[C64],
) -> Result<CompatibleTriple> {
    cfg.validate()?;
    let (h1, h2) = (cfg.h1(), cfg.h2());
    let one = |z: C64| CVec::from_element(1, z);
    if k == 0 {
        if zeta.len() != 2 {
            return Err(ScatterError::DimensionMismatch {
                expected: 2,
                found: zeta.len(),
            });
        }
        // raw coefficients on dz, dz̄
        let a = alpha2 / (2.0 * h2).sqrt();
        let b = beta2bar / (2.0 * h2).sqrt();
        let xi = zeta[0] / 2f64.sqrt();
        let eta = zeta[1] / 2f64.sqrt();
        let c = a - xi;
        let period = c + (b - eta);
        if period.norm() > TORUS_PERIOD_TOLERANCE {
            return Err(ScatterError::NotSemiExact { period: period.norm() });
        }
        // primitive 2ic·y on Σ₂ overfares to slope −2ic h₂/h₁ on Σ₁
        let alpha1 = (xi - c * h2 / h1) * (2.0 * h1).sqrt();
        let beta1 = (eta + c * h2 / h1) * (2.0 * h1).sqrt();
        return Ok(CompatibleTriple {
            alpha1: one(alpha1),
            beta1bar: one(beta1),
            alpha2: one(alpha2),
            beta2bar: one(beta2bar),
            zeta: zeta.to_vec(),
        });
    }
    if !zeta.is_empty() {
        return Err(ScatterError::DimensionMismatch {
            expected: 0,
            found: zeta.len(),
        });
    }
    if k.unsigned_abs() as usize > cfg.modes {
        return Err(ScatterError::InvalidConfig(format!(
            "mode {k} exceeds cutoff {}",
            cfg.modes
        )));
    }
    // frame y₁ = 0: Σ₁ = [0, h₁], Σ₂ = [h₁, 1]
    let s = 2.0 * PI * k as f64;
    let norm = |e: f64, lo: f64, hi: f64| 2.0 * ((e * hi).exp() - (e * lo).exp()) / e;
    let a = alpha2 / norm(-2.0 * s, h1, 1.0).sqrt();
    let b = beta2bar / norm(2.0 * s, h1, 1.0).sqrt();
    // match p e^{-sy} + q e^{sy} to a e^{-sy} + b e^{sy} at y = h₁ and at y = 0 ≡ 1
    let top = a * (-s * h1).exp() + b * (s * h1).exp();
    let bottom = a * (-s).exp() + b * s.exp();
    let (e_m, e_p) = ((-s * h1).exp(), (s * h1).exp());
    let det = e_m - e_p;
    let p = (top - bottom * e_p) / det;
    let q = (bottom * e_m - top) / det;
    Ok(CompatibleTriple {
        alpha1: one(p * norm(-2.0 * s, 0.0, h1).sqrt()),
        beta1bar: one(q * norm(2.0 * s, 0.0, h1).sqrt()),
        alpha2: one(alpha2),
        beta2bar: one(beta2bar),
        zeta: Vec::new(),
    })
}

/// `|S₁ʰ(α₁ + β̄₁) + S₂ʰ(α₂ + β̄₂) − ζ|` for a mode-0 triple; zero for other modes.
pub fn catalyzing_residual(cfg: &TorusConfig, t: &CompatibleTriple) -> Result<f64> {
    if t.zeta.is_empty() {
        return Ok(0.0);
    }
    let m0 = build_mode_operators(cfg, 0)?;
    let (s1, s2) = (m0.s1[(0, 0)], m0.s2[(0, 0)]);
    let holo = s1 * t.alpha1[0] + s2 * t.alpha2[0] - t.zeta[0];
    let anti = s1 * t.beta1bar[0] + s2 * t.beta2bar[0] - t.zeta[1];
    Ok((holo.norm_sqr() + anti.norm_sqr()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::scatter_residual;

    fn configs() -> [TorusConfig; 2] {
        [
            TorusConfig::default(),
            TorusConfig {
                y1: 0.0,
                y2: 0.3,
                ..TorusConfig::default()
            },
        ]
    }

    #[test]
    fn lattice_sum_matches_q_expansion() {
        for u in [c64(0.3, 0.2), c64(-0.41, 0.77), c64(0.05, 0.5)] {
            let lat = weierstrass_p_lattice(u, 64).unwrap();
            let ser = weierstrass_p_series(u).unwrap();
            assert!((lat.value - ser).norm() < 1e-10 * ser.norm().max(1.0), "{u}");
            assert!(lat.tail_bound < 1e-10);
        }
        // square-lattice symmetry ℘(iu) = −℘(u)
        let u = c64(0.21, 0.13);
        let a = weierstrass_p_lattice(u, 48).unwrap().value;
        let b = weierstrass_p_lattice(c64(0.0, 1.0) * u, 48).unwrap().value;
        assert!((a + b).norm() < 1e-10);
        assert!(matches!(
            weierstrass_p_lattice(c64(1.0, 1.0), 8),
            Err(ScatterError::SingularPoint)
        ));
    }

    #[test]
    fn kernel_examples() {
        assert!(bergman_reproducing_residual(64) < 1e-12);
        let k = bergman_constant();
        // K(w, z) = −conj(K(z, w)) for a constant density
        assert!((k + k.conj()).norm() < 1e-16);
        // removable part ℘(u) − u^{-2} stays bounded and tends to 0
        let mut prev = f64::INFINITY;
        for s in [1e-1, 1e-2, 1e-3] {
            let u = c64(s, 0.5 * s);
            let kern = torus_kernels(u, 32, 1e-8).unwrap();
            let reg = (-kern.l_density * c64(0.0, 2.0 * PI) - (u * u).inv()).norm();
            assert!(reg < prev && reg < 1.0);
            prev = reg;
        }
        assert!(matches!(
            torus_kernels(c64(0.4, 0.4), 4, 1e-14),
            Err(ScatterError::TailTooLarge { .. })
        ));
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for cfg in configs() {
            for k in [-3, -1, 0, 1, 2, 5] {
                let m = build_mode_operators(&cfg, k).unwrap();
                let t12 = cross_entry_by_quadrature(k, cfg.h1(), 4000);
                let t21 = cross_entry_by_quadrature(k, cfg.h2(), 4000);
                assert!(
                    (m.t12[(0, 0)].re - t12).abs() < 1e-10,
                    "k={k}: {} vs {t12}",
                    m.t12[(0, 0)]
                );
                assert!((m.t21[(0, 0)].re - t21).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn mode_zero_examples() {
        let cfg = configs()[1];
        let m = build_mode_operators(&cfg, 0).unwrap();
        // R₁(dz) = dz on Σ₁ has squared norm 2h₁: R₁ê = √h₁ e₁ with ê = dz/√2
        let r = m.r1[(0, 0)].re * 2f64.sqrt();
        assert!((r * r - 2.0 * cfg.h1()).abs() < 1e-15);
        let sym = TorusConfig::default();
        for k in 1..=4 {
            let a = build_mode_operators(&sym, k).unwrap();
            assert_eq!(a.t11, a.t22);
            assert_eq!(a.t12, a.t21);
            let b = build_mode_operators(&sym, -k).unwrap();
            assert_eq!(a.t12, b.t12.map(|z| z.conj()));
        }
    }

    #[test]
    fn identity_suite_and_index() {
        for cfg in configs() {
            let rep = torus_identity_suite(&cfg).unwrap();
            assert!(rep.max_unitarity() < 1e-12);
            assert!(rep.max_identity() < 1e-12);
            assert!(rep.s_completeness < 1e-15);
            assert!(rep.harmonic_measure < 1e-14 && rep.catalyzing < 1e-14);
            assert_eq!(rep.cross_mode, 0.0);
            assert_eq!((rep.index.ker, rep.index.coker, rep.index.index), (0, 0, 0));
            let wide = TorusConfig { modes: 16, ..cfg };
            let e = torus_index(&wide, 1e-6).unwrap();
            assert_eq!((e.ker, e.coker), (0, 0));
        }
        let s = scattering_3x3(&TorusConfig::default(), 1).unwrap();
        assert_eq!(s.input_dims(), vec![1, 1]);
        let s0 = scattering_3x3(&TorusConfig::default(), 0).unwrap();
        assert_eq!(s0.input_dims(), vec![1, 1, 1]);
    }

    #[test]
    fn compatible_triples_scatter() {
        for cfg in configs() {
            for k in [-2i64, -1, 1, 3] {
                let t = torus_compatible_from(&cfg, k, c64(0.3, -0.2), c64(-0.1, 0.5), &[]).unwrap();
                let s = scattering_3x3(&cfg, k).unwrap();
                assert!(scatter_residual(&s, &t).unwrap() < 1e-10, "k={k}");
            }
            // mode 0: choose ξ freely, η̄ from the period condition
            let (a2, b2) = (c64(0.3, -0.2), c64(-0.1, 0.5));
            let xi = c64(0.2, 0.1);
            let h2 = cfg.h2();
            let eta = ((a2 + b2) / (2.0 * h2).sqrt() - xi / 2f64.sqrt()) * 2f64.sqrt();
            let t = torus_compatible_from(&cfg, 0, a2, b2, &[xi, eta]).unwrap();
            let s = scattering_3x3(&cfg, 0).unwrap();
            assert!(scatter_residual(&s, &t).unwrap() < 1e-12);
            assert!(catalyzing_residual(&cfg, &t).unwrap() < 1e-12);
            assert!(matches!(
                torus_compatible_from(&cfg, 0, a2, b2, &[xi, eta + 1.0]),
                Err(ScatterError::NotSemiExact { .. })
            ));
        }
    }
}
