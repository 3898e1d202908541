//! Fourier analysis on the unit circle.
//!
//! Conventions: a function on the circle is `f(e^{iθ}) = Σ c_n e^{inθ}` with
//! `c_n = (1/2π) ∫ f e^{-inθ} dθ`. Boundary one-form classes are stored by their
//! canonical disk representative
//! `Σ f_n z^n dz + Σ g_n z̄^n dz̄ + (a/4πi)(dz/z − dz̄/z̄)`, `n ≥ 0`,
//! and act on functions by `L(h) = lim_{r→1} ∫_{|z|=r} h α`.

use std::f64::consts::PI;

use crate::error::{Result, ScatterError};
use crate::linalg::{c64, C64};

/// Truncated Fourier series on the unit circle, modes `-N..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierFunction {
    coeffs: Vec<C64>,
    truncation: usize,
}

impl FourierFunction {
    /// The zero function at truncation `n`.
    pub fn zeros(n: usize) -> Self {
        Self {
            coeffs: vec![C64::default(); 2 * n + 1],
            truncation: n,
        }
    }

    /// Builds a series from `(mode, coefficient)` pairs; modes beyond `n` are rejected.
    pub fn from_modes(n: usize, modes: &[(i64, C64)]) -> Result<Self> {
        let mut f = Self::zeros(n);
        for &(k, v) in modes {
            if k.unsigned_abs() as usize > n {
                return Err(ScatterError::DimensionMismatch {
                    expected: n,
                    found: k.unsigned_abs() as usize,
                });
            }
            f.coeffs[(k + n as i64) as usize] += v;
        }
        Ok(f)
    }

    /// Builds a series whose coefficient of mode `k` is `g(k)`.
    pub fn from_fn(n: usize, mut g: impl FnMut(i64) -> C64) -> Self {
        let coeffs = (-(n as i64)..=n as i64).map(&mut g).collect();
        Self { coeffs, truncation: n }
    }

    /// Truncation order `N`.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Coefficient of mode `k` (zero outside `|k| ≤ N`).
    pub fn coeff(&self, k: i64) -> C64 {
        if k.unsigned_abs() as usize > self.truncation {
            C64::default()
        } else {
            self.coeffs[(k + self.truncation as i64) as usize]
        }
    }

    /// Iterator over `(mode, coefficient)` in increasing mode order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        let n = self.truncation as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - n, c))
    }

    /// Value at angle `theta`.
    pub fn eval(&self, theta: f64) -> C64 {
        self.modes().map(|(k, c)| c * c64(0.0, k as f64 * theta).exp()).sum()
    }

    /// Values at the `m` equispaced nodes `θ_j = 2πj/m`.
    pub fn samples(&self, m: usize) -> Vec<C64> {
        (0..m).map(|j| self.eval(2.0 * PI * j as f64 / m as f64)).collect()
    }

    /// Derivative with respect to `θ`.
    pub fn d_theta(&self) -> Self {
        Self::from_fn(self.truncation, |k| self.coeff(k) * c64(0.0, k as f64))
    }

    /// `L²(dθ)` norm, `(2π Σ |c_n|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (2.0 * PI * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Whether `c_{-n} = conj(c_n)` holds to `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.modes().all(|(k, c)| (c - self.coeff(-k).conj()).norm() <= tol)
    }
}

/// Canonical representative of a boundary one-form class of truncation `N`.
///
/// `holo[n]` multiplies `z^n dz`, `antiholo[n]` multiplies `z̄^n dz̄` (`0 ≤ n < N`),
/// and `period` multiplies `(1/4πi)(dz/z − dz̄/z̄) = dθ/2π`. The class then acts on
/// every Fourier mode `e^{ikθ}` with `|k| ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFormClass {
    pub holo: Vec<C64>,
    pub antiholo: Vec<C64>,
    pub period: C64,
    truncation: usize,
}

impl BoundaryFormClass {
    /// The zero class.
    pub fn zero(n: usize) -> Self {
        Self {
            holo: vec![C64::default(); n],
            antiholo: vec![C64::default(); n],
            period: C64::default(),
            truncation: n,
        }
    }

    /// Builds a class, padding the coefficient lists with zeros up to `n`.
    pub fn new(n: usize, holo: &[C64], antiholo: &[C64], period: C64) -> Result<Self> {
        if holo.len() > n || antiholo.len() > n {
            return Err(ScatterError::DimensionMismatch {
                expected: n,
                found: holo.len().max(antiholo.len()),
            });
        }
        let mut b = Self::zero(n);
        b.holo[..holo.len()].copy_from_slice(holo);
        b.antiholo[..antiholo.len()].copy_from_slice(antiholo);
        b.period = period;
        Ok(b)
    }

    /// Truncation order `N`.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Dual-action coefficients `α_k = L(e^{ikθ})`, `|k| ≤ N`, packed as a Fourier series.
    pub fn dual_action(&self) -> FourierFunction {
        let two_pi_i = c64(0.0, 2.0 * PI);
        FourierFunction::from_fn(self.truncation, |k| match k {
            0 => self.period,
            k if k < 0 => two_pi_i * self.holo[(-k - 1) as usize],
            k => -two_pi_i * self.antiholo[(k - 1) as usize],
        })
    }

    /// Inverse of [`Self::dual_action`].
    pub fn from_dual_action(alpha: &FourierFunction) -> Self {
        let n = alpha.truncation();
        let two_pi_i = c64(0.0, 2.0 * PI);
        Self {
            holo: (0..n).map(|j| alpha.coeff(-(j as i64) - 1) / two_pi_i).collect(),
            antiholo: (0..n).map(|j| -alpha.coeff(j as i64 + 1) / two_pi_i).collect(),
            period: alpha.coeff(0),
            truncation: n,
        }
    }

    /// Class of the one-form `ρ(θ) dθ` on the circle.
    pub fn from_density(rho: &FourierFunction) -> Self {
        let alpha = FourierFunction::from_fn(rho.truncation(), |k| rho.coeff(-k) * (2.0 * PI));
        Self::from_dual_action(&alpha)
    }

    /// Coefficientwise difference (truncation is the larger of the two).
    pub fn difference(&self, other: &Self) -> Self {
        let n = self.truncation.max(other.truncation);
        let a = self.dual_action();
        let b = other.dual_action();
        Self::from_dual_action(&FourierFunction::from_fn(n, |k| a.coeff(k) - b.coeff(k)))
    }
}

/// Pairing `L_b(h)` from the closed-form table:
/// the period pairs with `ĥ(0)`, `f_n` with `2πi ĥ(−n−1)`, `g_n` with `−2πi ĥ(n+1)`.
pub fn pair(b: &BoundaryFormClass, h: &FourierFunction) -> C64 {
    let two_pi_i = c64(0.0, 2.0 * PI);
    let mut acc = b.period * h.coeff(0);
    for (n, f) in b.holo.iter().enumerate() {
        acc += two_pi_i * f * h.coeff(-(n as i64) - 1);
    }
    for (n, g) in b.antiholo.iter().enumerate() {
        acc -= two_pi_i * g * h.coeff(n as i64 + 1);
    }
    acc
}

/// `H^{1/2}` norm `(Σ (1+n²)^{1/2} |c_n|²)^{1/2}`.
pub fn h_half_norm(f: &FourierFunction) -> f64 {
    f.modes()
        .map(|(k, c)| (1.0 + (k * k) as f64).sqrt() * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `H^{-1/2}` norm `(Σ |α_n|² / (1+n²)^{1/2})^{1/2}` of the dual action.
pub fn h_minus_half_norm(b: &BoundaryFormClass) -> f64 {
    b.dual_action()
        .modes()
        .map(|(k, a)| a.norm_sqr() / (1.0 + (k * k) as f64).sqrt())
        .sum::<f64>()
        .sqrt()
}

fn douglas_raw(f: &FourierFunction, m: usize) -> f64 {
    let vals = f.samples(m);
    let dvals = f.d_theta().samples(m);
    let inv_chord: Vec<f64> = (0..m)
        .map(|d| {
            if d == 0 {
                0.0
            } else {
                let s = (PI * d as f64 / m as f64).sin();
                1.0 / (4.0 * s * s)
            }
        })
        .collect();
    let w = 2.0 * PI / m as f64;
    let mut total = 0.0;
    for i in 0..m {
        let mut row = dvals[i].norm_sqr();
        for j in 0..m {
            if j != i {
                let d = (i + m - j) % m;
                row += (vals[i] - vals[j]).norm_sqr() * inv_chord[d];
            }
        }
        total += row;
    }
    total * w * w
}

/// Raw Douglas double integral `∬ |f(z)−f(ζ)|²/|z−ζ|² |dz||dζ|` by an `m × m` trapezoid rule.
///
/// The diagonal uses the limit `|df/dθ|²`. The value at `m` nodes is returned after
/// checking that `2m` nodes agree to relative tolerance `tol`.
pub fn douglas_energy(f: &FourierFunction, m: usize, tol: f64) -> Result<f64> {
    if m < 4 * f.truncation().max(1) {
        return Err(ScatterError::InvalidConfig(format!(
            "Douglas quadrature needs at least 4N = {} nodes, got {m}",
            4 * f.truncation().max(1)
        )));
    }
    let coarse = douglas_raw(f, m);
    let fine = douglas_raw(f, 2 * m);
    let change = (fine - coarse).abs() / fine.abs().max(1.0);
    if change > tol {
        return Err(ScatterError::NonConvergent {
            what: "Douglas energy".into(),
            change,
            tolerance: tol,
        });
    }
    Ok(coarse)
}

/// Ratio `douglas_energy / dirichlet_energy` calibrated on `F(z) = z`.
pub fn douglas_kappa(m: usize) -> Result<f64> {
    let f = FourierFunction::from_modes(1, &[(1, c64(1.0, 0.0))])?;
    let d = douglas_energy(&f, m, 1e-12)?;
    Ok(d / dirichlet_energy(&poisson_extend(&f)))
}

/// Harmonic function `c0 + Σ a_n z^n + Σ b_n z̄^n` on the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskHarmonicFunction {
    pub c0: C64,
    /// `a_1..a_N`.
    pub holo: Vec<C64>,
    /// `b_1..b_N`.
    pub antiholo: Vec<C64>,
}

impl DiskHarmonicFunction {
    /// Builds a function, padding both coefficient lists to a common length.
    pub fn new(c0: C64, holo: &[C64], antiholo: &[C64]) -> Self {
        let n = holo.len().max(antiholo.len());
        let mut a = holo.to_vec();
        let mut b = antiholo.to_vec();
        a.resize(n, C64::default());
        b.resize(n, C64::default());
        Self {
            c0,
            holo: a,
            antiholo: b,
        }
    }

    /// Truncation order.
    pub fn truncation(&self) -> usize {
        self.holo.len()
    }

    /// Value at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = self.c0;
        let mut zp = c64(1.0, 0.0);
        let mut zbp = c64(1.0, 0.0);
        for (a, b) in self.holo.iter().zip(&self.antiholo) {
            zp *= z;
            zbp *= z.conj();
            acc += a * zp + b * zbp;
        }
        acc
    }

    /// Boundary trace on `|z| = 1`.
    pub fn trace(&self) -> FourierFunction {
        let n = self.truncation();
        FourierFunction::from_fn(n, |k| match k {
            0 => self.c0,
            k if k > 0 => self.holo[(k - 1) as usize],
            k => self.antiholo[(-k - 1) as usize],
        })
    }

    /// Restriction to the annulus `r < |z| < 1`.
    pub fn embed(&self, r: f64) -> Result<AnnulusHarmonicFunction> {
        let modes = self
            .holo
            .iter()
            .zip(&self.antiholo)
            .map(|(&a, &b)| [a, C64::default(), b, C64::default()])
            .collect();
        AnnulusHarmonicFunction::new(self.c0, C64::default(), modes, r, 1.0)
    }
}

/// Dirichlet energy `∬ dh ∧ *dh̄ = 2π Σ n (|a_n|² + |b_n|²)`.
pub fn dirichlet_energy(h: &DiskHarmonicFunction) -> f64 {
    2.0 * PI
        * h.holo
            .iter()
            .zip(&h.antiholo)
            .enumerate()
            .map(|(i, (a, b))| (i + 1) as f64 * (a.norm_sqr() + b.norm_sqr()))
            .sum::<f64>()
}

/// Conformally invariant norm `(dirichlet_energy + |2π c0|²)^{1/2}`.
pub fn h_conf_norm(h: &DiskHarmonicFunction) -> f64 {
    (dirichlet_energy(h) + (2.0 * PI * h.c0.norm()).powi(2)).sqrt()
}

/// Harmonic extension of a boundary series into the disk.
pub fn poisson_extend(f: &FourierFunction) -> DiskHarmonicFunction {
    let n = f.truncation();
    DiskHarmonicFunction {
        c0: f.coeff(0),
        holo: (1..=n as i64).map(|k| f.coeff(k)).collect(),
        antiholo: (1..=n as i64).map(|k| f.coeff(-k)).collect(),
    }
}

/// Harmonic function on `r < |z| < R`:
/// `c0 + dlog·log|z| + Σ_n (p_n z^n + q_n z^{-n} + s_n z̄^n + t_n z̄^{-n})`,
/// with `modes[n-1] = [p_n, q_n, s_n, t_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusHarmonicFunction {
    pub c0: C64,
    pub dlog: C64,
    pub modes: Vec<[C64; 4]>,
    pub r: f64,
    pub big_r: f64,
}

impl AnnulusHarmonicFunction {
    /// Builds a function on the annulus; requires `0 < r < R`.
    pub fn new(c0: C64, dlog: C64, modes: Vec<[C64; 4]>, r: f64, big_r: f64) -> Result<Self> {
        if !(r > 0.0 && r < big_r) {
            return Err(ScatterError::InvalidConfig(format!(
                "annulus radii must satisfy 0 < r < R, got r = {r}, R = {big_r}"
            )));
        }
        Ok(Self {
            c0,
            dlog,
            modes,
            r,
            big_r,
        })
    }

    /// Value at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = self.c0 + self.dlog * z.norm().ln();
        let zi = z.inv();
        let (mut zp, mut zm) = (c64(1.0, 0.0), c64(1.0, 0.0));
        for m in &self.modes {
            zp *= z;
            zm *= zi;
            acc += m[0] * zp + m[1] * zm + m[2] * zp.conj() + m[3] * zm.conj();
        }
        acc
    }

    /// Trace on the circle `|z| = rho` as a Fourier series in `θ`.
    pub fn trace_on(&self, rho: f64) -> FourierFunction {
        let n = self.modes.len();
        FourierFunction::from_fn(n, |k| {
            if k == 0 {
                return self.c0 + self.dlog * rho.ln();
            }
            let j = k.unsigned_abs() as usize - 1;
            let m = &self.modes[j];
            let up = rho.powi(k.abs() as i32);
            let down = up.recip();
            if k > 0 {
                m[0] * up + m[3] * down
            } else {
                m[1] * down + m[2] * up
            }
        })
    }
}

/// Disk-harmonic function with the same boundary values at `|z| = 1` (requires `R = 1`).
pub fn bounce_annulus_to_disk(h: &AnnulusHarmonicFunction) -> Result<DiskHarmonicFunction> {
    if (h.big_r - 1.0).abs() > 1e-15 {
        return Err(ScatterError::InvalidConfig(format!(
            "bounce needs outer radius 1, got {}",
            h.big_r
        )));
    }
    Ok(DiskHarmonicFunction {
        c0: h.c0,
        holo: h.modes.iter().map(|m| m[0] + m[3]).collect(),
        antiholo: h.modes.iter().map(|m| m[2] + m[1]).collect(),
    })
}

/// Riesz data of a boundary class: the `H^{1/2}` representer and its density on the collar.
#[derive(Debug, Clone, PartialEq)]
pub struct RieszRepresenter {
    /// `F` with `L_b(h) = ⟨h, F⟩_{H^{1/2}}`.
    pub riesz: FourierFunction,
    /// `ρ(s e^{iθ}) = Σ (1+n²)^{1/2} F̂(n) s^{|n|} e^{inθ}` on `r < |z| < 1`.
    pub density: AnnulusHarmonicFunction,
}

impl RieszRepresenter {
    /// `(1/2π) ∫ h(e^{iθ}) conj(ρ(s e^{iθ})) dθ` by an `m`-point trapezoid rule.
    pub fn pair_on_circle(&self, h: &FourierFunction, s: f64, m: usize) -> C64 {
        let hs = h.samples(m);
        let mut acc = C64::default();
        for (j, hv) in hs.iter().enumerate() {
            let t = 2.0 * PI * j as f64 / m as f64;
            acc += hv * self.density.eval(c64(0.0, t).exp() * s).conj();
        }
        acc / m as f64
    }
}

/// Riesz representer of `L_b` in `H^{1/2}(S¹)`: `F̂(n) = conj(α_n)/(1+n²)^{1/2}`.
pub fn riesz_representer(b: &BoundaryFormClass, r: f64) -> Result<RieszRepresenter> {
    if !(r > 0.0 && r < 1.0) {
        return Err(ScatterError::InvalidConfig(format!(
            "collar radius must lie in (0, 1), got {r}"
        )));
    }
    let alpha = b.dual_action();
    let n = alpha.truncation();
    let riesz = FourierFunction::from_fn(n, |k| alpha.coeff(k).conj() / (1.0 + (k * k) as f64).sqrt());
    let modes = (1..=n as i64)
        .map(|k| {
            [
                alpha.coeff(k).conj(),
                C64::default(),
                alpha.coeff(-k).conj(),
                C64::default(),
            ]
        })
        .collect();
    let density = AnnulusHarmonicFunction::new(alpha.coeff(0).conj(), C64::default(), modes, r, 1.0)?;
    Ok(RieszRepresenter { riesz, density })
}
