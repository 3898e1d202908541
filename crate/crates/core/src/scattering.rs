//! Scattering matrices, compatible triples, the period map, the Grunsky operator, index
//! estimates and the holomorphic boundary-value problem at genus zero.
//!
//! All coefficient vectors are taken in the orthonormal bases of [`crate::schiffer`]: holomorphic
//! parts on the basis `e_p`, antiholomorphic parts on the conjugate basis `ē_p`.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::boundary::{h_minus_half_norm, BoundaryFormClass, FourierFunction};
use crate::error::{Result, ScatterError};
use crate::geometry::{
    faber_gram, faber_orthonormal_basis, harmonic_measure, validate_config, CurveConfig, FaberSeries, InteriorHarmonic,
    DEFAULT_SERIES_BOUND,
};
use crate::jump::{overfare_to_interior, ExteriorHarmonic};
use crate::linalg::{
    c64, condition_number, dft_coefficients, dft_mode, lstsq, singular_values, spectral_norm, CMat, CVec, C64,
};
use crate::schiffer::{annulus_basis_norm, build_blocks, Method, OperatorBlock, SchifferBlocks};

/// Default relative singular-value threshold of the index estimate.
pub const DEFAULT_INDEX_THRESHOLD: f64 = 1e-6;

/// Harmonic one-forms on both sides related by overfare, with the catalyzing form `ζ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompatibleTriple {
    pub alpha1: CVec,
    pub beta1bar: CVec,
    pub alpha2: CVec,
    pub beta2bar: CVec,
    /// Empty at genus zero; `[ξ, η̄]` (holomorphic and antiholomorphic coefficient) on the torus.
    pub zeta: Vec<C64>,
}

impl CompatibleTriple {
    /// Incoming data `(α₁, α₂[, η̄])`.
    pub fn incoming(&self) -> Vec<CVec> {
        let mut v = vec![self.alpha1.clone(), self.alpha2.clone()];
        if self.zeta.len() == 2 {
            v.push(CVec::from_element(1, self.zeta[1]));
        }
        v
    }

    /// Outgoing data `(β̄₁, β̄₂[, ξ])`.
    pub fn outgoing(&self) -> Vec<CVec> {
        let mut v = vec![self.beta1bar.clone(), self.beta2bar.clone()];
        if self.zeta.len() == 2 {
            v.push(CVec::from_element(1, self.zeta[0]));
        }
        v
    }
}

/// Block scattering matrix with its unitarity residual `‖S*S − I‖₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    /// Row-major square array of blocks (2×2 at genus zero, 3×3 on a torus mode).
    pub blocks: Vec<Vec<OperatorBlock>>,
    pub unitarity_residual: f64,
}

impl ScatteringMatrix {
    /// Checks block shapes and computes the unitarity residual.
    pub fn new(blocks: Vec<Vec<OperatorBlock>>) -> Result<Self> {
        let k = blocks.len();
        if k == 0 || blocks.iter().any(|row| row.len() != k) {
            return Err(ScatterError::DimensionMismatch {
                expected: k * k,
                found: blocks.iter().map(Vec::len).sum(),
            });
        }
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                let rows = blocks[i][0].matrix.nrows();
                let cols = blocks[0][j].matrix.ncols();
                if b.matrix.shape() != (rows, cols) {
                    return Err(ScatterError::DimensionMismatch {
                        expected: rows * cols,
                        found: b.matrix.len(),
                    });
                }
            }
        }
        let mut s = Self {
            blocks,
            unitarity_residual: 0.0,
        };
        let full = s.assembled();
        s.unitarity_residual = if full.is_empty() {
            0.0
        } else {
            spectral_norm(&(full.adjoint() * &full - CMat::identity(full.ncols(), full.ncols())))
        };
        Ok(s)
    }

    /// Input dimensions, one per block column.
    pub fn input_dims(&self) -> Vec<usize> {
        self.blocks[0].iter().map(|b| b.matrix.ncols()).collect()
    }

    /// Output dimensions, one per block row.
    pub fn output_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|row| row[0].matrix.nrows()).collect()
    }

    /// The full dense matrix.
    pub fn assembled(&self) -> CMat {
        let rows: usize = self.output_dims().iter().sum();
        let cols: usize = self.input_dims().iter().sum();
        let mut full = CMat::zeros(rows, cols);
        let mut r0 = 0;
        for row in &self.blocks {
            let mut c0 = 0;
            for b in row {
                full.view_mut((r0, c0), b.matrix.shape()).copy_from(&b.matrix);
                c0 += b.matrix.ncols();
            }
            r0 += row[0].matrix.nrows();
        }
        full
    }

    /// The matrix with the two sides exchanged (block rows and columns permuted).
    pub fn relabeled(&self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.swap(0, 1);
        for row in &mut blocks {
            row.swap(0, 1);
        }
        Self {
            blocks,
            unitarity_residual: self.unitarity_residual,
        }
    }
}

fn neg_conj(b: &OperatorBlock) -> OperatorBlock {
    let mut c = b.conjugate();
    c.matrix = -c.matrix;
    c
}

/// Scattering matrix of the four Schiffer blocks.
pub fn scattering_from_blocks(t: &SchifferBlocks) -> Result<ScatteringMatrix> {
    ScatteringMatrix::new(vec![
        vec![neg_conj(&t.t11), neg_conj(&t.t21)],
        vec![neg_conj(&t.t12), neg_conj(&t.t22)],
    ])
}

/// Genus-zero scattering matrix `−[[T̄₁₁, T̄₂₁], [T̄₁₂, T̄₂₂]]` at truncation `n` (series blocks).
pub fn build_scattering_genus0(config: &CurveConfig, n: usize) -> Result<ScatteringMatrix> {
    scattering_from_blocks(&build_blocks(config, n, Method::Series, 0)?)
}

/// Applies the matrix to the incoming data of a triple.
pub fn scatter(s: &ScatteringMatrix, t: &CompatibleTriple) -> Result<Vec<CVec>> {
    apply_blocks(s, &t.incoming())
}

/// Applies the matrix to a list of block vectors.
pub fn apply_blocks(s: &ScatteringMatrix, input: &[CVec]) -> Result<Vec<CVec>> {
    let dims = s.input_dims();
    if input.len() != dims.len() {
        return Err(ScatterError::DimensionMismatch {
            expected: dims.len(),
            found: input.len(),
        });
    }
    for (v, d) in input.iter().zip(&dims) {
        if v.len() != *d {
            return Err(ScatterError::DimensionMismatch {
                expected: *d,
                found: v.len(),
            });
        }
    }
    Ok(s.blocks
        .iter()
        .map(|row| {
            row.iter()
                .zip(input)
                .fold(CVec::zeros(row[0].matrix.nrows()), |acc, (b, v)| acc + &b.matrix * v)
        })
        .collect())
}

/// `‖S(incoming) − outgoing‖` for a triple.
pub fn scatter_residual(s: &ScatteringMatrix, t: &CompatibleTriple) -> Result<f64> {
    let out = scatter(s, t)?;
    Ok(out
        .iter()
        .zip(t.outgoing())
        .map(|(a, b)| (a - b).norm_squared())
        .sum::<f64>()
        .sqrt())
}

/// Orthonormal coordinates `(α, β̄)` of `dh` on `Ω₁` in the first `n` basis forms.
pub fn interior_form_coordinates(h: &InteriorHarmonic, n: usize) -> Result<(CVec, CVec)> {
    let big = h.holo.len().max(n);
    let series = FaberSeries::new(&h.map, big, DEFAULT_SERIES_BOUND)?;
    let c = faber_orthonormal_basis(&series, n)?.factor;
    let gram = faber_gram(&series, big);
    // (Σ x_k dF_k, e_p) with e_p = Σ_{j ≤ p} C_{jp} dF_j and gram[(k, j)] = (dF_k, dF_j)
    let project = |x: &[C64], p: usize| -> C64 {
        let mut acc = C64::default();
        for (k, xk) in x.iter().enumerate() {
            for j in 0..=p {
                acc += xk * gram[(k, j)] * c[(j, p)].conj();
            }
        }
        acc
    };
    let ybar: Vec<C64> = h.antiholo.iter().map(|y| y.conj()).collect();
    let alpha = CVec::from_fn(n, |p, _| project(&h.holo, p));
    let beta = CVec::from_fn(n, |p, _| project(&ybar, p).conj());
    Ok((alpha, beta))
}

/// Builds the `Σ₁` side of a compatible triple from a form `α₂ + β̄₂` on `Σ₂` by overfare.
///
/// On a single curve the data live on the exterior pullback basis and the `Σ₁` side is
/// refitted in Faber polynomials from `m` boundary nodes. On concentric circles the annulus
/// form must have zero period around the core circle (else `NotSemiExact`) and the cap
/// extensions are exact. At genus zero `ζ` must be empty.
pub fn compatible_from(
    config: &CurveConfig,
    alpha2: &CVec,
    beta2bar: &CVec,
    zeta: &[C64],
    n: usize,
    m: usize,
) -> Result<CompatibleTriple> {
    validate_config(config)?;
    if !zeta.is_empty() {
        return Err(ScatterError::DimensionMismatch {
            expected: 0,
            found: zeta.len(),
        });
    }
    match config {
        CurveConfig::ConcentricAnnulus { r, big_r } => concentric_compatible(*r, *big_r, alpha2, beta2bar, n),
        _ => {
            let g = config.exterior_map().expect("single-curve configuration");
            for v in [alpha2, beta2bar] {
                if v.len() != n {
                    return Err(ScatterError::DimensionMismatch {
                        expected: n,
                        found: v.len(),
                    });
                }
            }
            // u_l = −d(ζ^{-l})/√(2πl)
            let scale = |l: usize| -(2.0 * PI * (l + 1) as f64).sqrt().recip();
            let h = ExteriorHarmonic {
                c0: C64::default(),
                holo: (0..n).map(|l| alpha2[l] * scale(l)).collect(),
                antiholo: (0..n).map(|l| beta2bar[l] * scale(l)).collect(),
            };
            let fit = (2 * n * g.degree()).max(n).min(m / 4);
            let side1 = overfare_to_interior(config, &h, fit, m, 1e-8)?;
            let (alpha1, beta1bar) = interior_form_coordinates(&side1, n)?;
            Ok(CompatibleTriple {
                alpha1,
                beta1bar,
                alpha2: alpha2.clone(),
                beta2bar: beta2bar.clone(),
                zeta: Vec::new(),
            })
        }
    }
}

/// Tolerance on the core-circle period of a concentric `Σ₂` form.
pub const PERIOD_TOLERANCE: f64 = 1e-10;

fn concentric_compatible(r: f64, big_r: f64, alpha2: &CVec, beta2bar: &CVec, n: usize) -> Result<CompatibleTriple> {
    let d2 = 2 * n + 1;
    for v in [alpha2, beta2bar] {
        if v.len() != d2 {
            return Err(ScatterError::DimensionMismatch {
                expected: d2,
                found: v.len(),
            });
        }
    }
    let v = |k: i64| (k + n as i64 + 1) as usize;
    let nu = |k: i64| annulus_basis_norm(r, big_r, k);
    let period = c64(0.0, 2.0 * PI) * (alpha2[v(-1)] - beta2bar[v(-1)]) / nu(-1);
    if period.norm() > PERIOD_TOLERANCE {
        return Err(ScatterError::NotSemiExact { period: period.norm() });
    }
    // Primitive H = Σ_n (P_n z^n + Q_n z^{-n} + S_n z̄^n + T_n z̄^{-n}) + D log|z|.
    let mut alpha1 = CVec::zeros(2 * n);
    let mut beta1bar = CVec::zeros(2 * n);
    for i in 0..n {
        let k = (i + 1) as i64;
        let kf = k as f64;
        let p = alpha2[v(k - 1)] / (kf * nu(k - 1));
        let q = -alpha2[v(-k - 1)] / (kf * nu(-k - 1));
        let s = beta2bar[v(k - 1)] / (kf * nu(k - 1));
        let t = -beta2bar[v(-k - 1)] / (kf * nu(-k - 1));
        let w = (2.0 * PI * kf).sqrt();
        // inner cap: z^n coefficient P + T r^{-2n}, z̄^n coefficient S + Q r^{-2n}
        let rn = r.powi(k as i32);
        alpha1[i] = (p + t / (rn * rn)) * w * rn;
        beta1bar[i] = (s + q / (rn * rn)) * w * rn;
        // outer cap: z^{-n} coefficient Q + S R^{2n}, z̄^{-n} coefficient T + P R^{2n}
        let bn = big_r.powi(k as i32);
        alpha1[n + i] = -(q + s * bn * bn) * w / bn;
        beta1bar[n + i] = -(t + p * bn * bn) * w / bn;
    }
    Ok(CompatibleTriple {
        alpha1,
        beta1bar,
        alpha2: alpha2.clone(),
        beta2bar: beta2bar.clone(),
        zeta: Vec::new(),
    })
}

/// Period `∮_{|z|=ρ}` of the annulus form `Σ a_k v_k + Σ b_k v̄_k`, trapezoid rule at `m` nodes
/// checked against `2m`.
pub fn annulus_period(r: f64, big_r: f64, holo: &CVec, antiholo: &CVec, rho: f64, m: usize) -> Result<C64> {
    let n = (holo.len().saturating_sub(1)) / 2;
    let integral = |nodes: usize| -> C64 {
        let mut acc = C64::default();
        for j in 0..nodes {
            let z = c64(0.0, 2.0 * PI * j as f64 / nodes as f64).exp() * rho;
            let dz = c64(0.0, 1.0) * z * (2.0 * PI / nodes as f64);
            for (idx, (a, b)) in holo.iter().zip(antiholo).enumerate() {
                let k = idx as i64 - n as i64 - 1;
                let f = z.powi(k as i32) / annulus_basis_norm(r, big_r, k);
                acc += a * f * dz + b * (f * dz).conj();
            }
        }
        acc
    };
    let coarse = integral(m);
    let fine = integral(2 * m);
    let change = (fine - coarse).norm();
    if change > 1e-10 {
        return Err(ScatterError::NonConvergent {
            what: "annulus period quadrature".into(),
            change,
            tolerance: 1e-10,
        });
    }
    Ok(fine)
}

/// Period of `T₁₂ᾱ` around the core circle `|z| = ρ` of the concentric annulus, for `ᾱ` given
/// on the conjugate cap basis.
pub fn cohomology_period_check(config: &CurveConfig, alpha_bar: &CVec, rho: f64, m: usize) -> Result<C64> {
    let CurveConfig::ConcentricAnnulus { r, big_r } = *config else {
        return Err(ScatterError::Unsupported(
            "period check needs the concentric configuration".into(),
        ));
    };
    if !(rho > r && rho < big_r) {
        return Err(ScatterError::InvalidConfig(format!(
            "period circle radius {rho} is outside the annulus"
        )));
    }
    let n = alpha_bar.len() / 2;
    let blocks = build_blocks(config, n, Method::ClosedForm, m)?;
    let image = &blocks.t12.matrix * alpha_bar;
    annulus_period(r, big_r, &image, &CVec::zeros(image.len()), rho, m)
}

/// Numerical kernel and cokernel of `T₁₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexEstimate {
    pub ker: usize,
    pub coker: usize,
    pub index: i64,
    /// Singular values in descending order.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Orthonormal cokernel directions (columns) in the `Σ₂` holomorphic basis.
    pub coker_basis: CMat,
}

/// Counts singular values of `t` below `rel · σ_max`; `ThresholdAmbiguous` if one lies within a
/// factor 10 of the threshold.
pub fn index_of(t: &CMat, rel: f64) -> Result<IndexEstimate> {
    let (rows, cols) = t.shape();
    let size = rows.max(cols);
    let mut padded = CMat::zeros(size, size);
    padded.view_mut((0, 0), (rows, cols)).copy_from(t);
    let svd = padded.svd(true, false);
    let u = svd.u.expect("left singular vectors");
    let sigma = svd.singular_values;
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let threshold = rel * smax;
    for &s in sigma.iter() {
        if s > threshold / 10.0 && s < threshold * 10.0 {
            return Err(ScatterError::ThresholdAmbiguous { sigma: s, threshold });
        }
    }
    let rank = sigma.iter().filter(|&&s| s >= threshold).count();
    let small: Vec<usize> = (0..size).filter(|&i| sigma[i] < threshold).collect();
    let coker_basis = if rows > 0 {
        let chosen: Vec<CVec> = small.iter().map(|&i| u.column(i).rows(0, rows).into_owned()).collect();
        if chosen.is_empty() {
            CMat::zeros(rows, 0)
        } else {
            CMat::from_columns(&chosen)
        }
    } else {
        CMat::zeros(0, 0)
    };
    let mut sv = singular_values(t);
    sv.truncate(rows.min(cols));
    Ok(IndexEstimate {
        ker: cols - rank,
        coker: rows - rank,
        index: cols as i64 - rows as i64,
        singular_values: sv,
        threshold,
        coker_basis,
    })
}

/// Index estimate of `T₁₂` on a capped genus-zero configuration.
pub fn index_estimate(config: &CurveConfig, n: usize, rel: f64) -> Result<IndexEstimate> {
    let blocks = build_blocks(config, n, Method::Series, 0)?;
    index_of(&blocks.t12.matrix, rel)
}

/// Angle between the span of the cokernel directions and `∂ω` on the concentric configuration.
pub fn cokernel_measure_angle(config: &CurveConfig, est: &IndexEstimate) -> Result<f64> {
    let CurveConfig::ConcentricAnnulus { .. } = config else {
        return Err(ScatterError::Unsupported(
            "harmonic measure needs the concentric configuration".into(),
        ));
    };
    let rows = est.coker_basis.nrows();
    if rows.is_multiple_of(2) {
        return Err(ScatterError::DimensionMismatch {
            expected: rows + 1,
            found: rows,
        });
    }
    // ∂ω is a multiple of v_{-1}, at index n
    let n = (rows - 1) / 2;
    let overlap = est.coker_basis.row(n).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok(overlap.min(1.0).acos())
}

/// `Θ = −T₁₂` and `Υ = −T₁₁` with the smallest singular value of `Θ` and the norm of `Υ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMap {
    pub theta: CMat,
    pub upsilon: CMat,
    pub theta_sigma_min: f64,
    pub upsilon_norm: f64,
}

/// Period map of a capped genus-zero configuration.
pub fn period_map(config: &CurveConfig, n: usize) -> Result<PeriodMap> {
    let blocks = build_blocks(config, n, Method::Series, 0)?;
    let theta = -blocks.t12.matrix.clone();
    let upsilon = -blocks.t11.matrix.clone();
    let sv = singular_values(&theta);
    let theta_sigma_min = sv
        .iter()
        .take(theta.nrows().min(theta.ncols()))
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let upsilon_norm = spectral_norm(&upsilon);
    Ok(PeriodMap {
        theta,
        upsilon,
        theta_sigma_min,
        upsilon_norm,
    })
}

/// Normalized Grunsky matrix `√(mn) b_mn = −T₂₂` in the exterior pullback basis, with its norm.
pub fn grunsky_operator(config: &CurveConfig, n: usize) -> Result<(OperatorBlock, f64)> {
    if !matches!(config, CurveConfig::ExteriorPolyCurve(_) | CurveConfig::UnitCircle) {
        return Err(ScatterError::Unsupported(
            "Grunsky operator needs an exterior map".into(),
        ));
    }
    let mut block = build_blocks(config, n, Method::Series, 0)?.t22;
    block.matrix = -block.matrix;
    let norm = spectral_norm(&block.matrix);
    Ok((block, norm))
}

/// Solution of the holomorphic boundary-value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpSolution {
    pub gamma_bar: CVec,
    /// Holomorphic form on `Σ₂`, `β = −T₁₂γ̄`.
    pub beta: CVec,
    /// Least-squares misfit of `[I; −T₁₁]γ̄ = δ`.
    pub misfit: f64,
    /// Condition number of `[I; −T₁₁]`.
    pub condition: f64,
    /// `‖T₁₁‖₂`.
    pub t11_norm: f64,
}

/// Tolerance on the least-squares misfit of the boundary-value problem.
pub const BVP_SOLVABILITY_TOLERANCE: f64 = 1e-9;

/// `δ = (I − T₁₁)γ̄` on `Σ₁`: antiholomorphic part `γ̄`, holomorphic part `−T₁₁γ̄`.
pub fn bvp_datum(config: &CurveConfig, gamma_bar: &CVec) -> Result<(CVec, CVec)> {
    let blocks = build_blocks(config, gamma_bar.len(), Method::Series, 0)?;
    Ok((gamma_bar.clone(), -(&blocks.t11.matrix * gamma_bar)))
}

/// Finds `γ̄` with `(I − T₁₁)γ̄ = δ` by stacked least squares and returns `β = −T₁₂γ̄`.
/// `NotSolvable` if `δ` is not in the image to [`BVP_SOLVABILITY_TOLERANCE`]; `ζ` must be empty.
pub fn solve_holomorphic_bvp(
    config: &CurveConfig,
    delta_anti: &CVec,
    delta_holo: &CVec,
    zeta: &[C64],
    n: usize,
) -> Result<BvpSolution> {
    if !zeta.is_empty() {
        return Err(ScatterError::DimensionMismatch {
            expected: 0,
            found: zeta.len(),
        });
    }
    let blocks = build_blocks(config, n, Method::Series, 0)?;
    let d1 = blocks.t11.matrix.ncols();
    for v in [delta_anti, delta_holo] {
        if v.len() != d1 {
            return Err(ScatterError::DimensionMismatch {
                expected: d1,
                found: v.len(),
            });
        }
    }
    let mut a = CMat::zeros(2 * d1, d1);
    a.view_mut((0, 0), (d1, d1)).copy_from(&CMat::identity(d1, d1));
    a.view_mut((d1, 0), (d1, d1)).copy_from(&(-&blocks.t11.matrix));
    let mut rhs = CVec::zeros(2 * d1);
    rhs.rows_mut(0, d1).copy_from(delta_anti);
    rhs.rows_mut(d1, d1).copy_from(delta_holo);
    let (gamma_bar, misfit) = lstsq(&a, &rhs)?;
    let scale = rhs.norm().max(1.0);
    if misfit > BVP_SOLVABILITY_TOLERANCE * scale {
        return Err(ScatterError::NotSolvable { residual: misfit });
    }
    let beta = -(&blocks.t12.matrix * &gamma_bar);
    Ok(BvpSolution {
        gamma_bar,
        beta,
        misfit,
        condition: condition_number(&a),
        t11_norm: spectral_norm(&blocks.t11.matrix),
    })
}

/// `H^{-1/2}` norm of the difference between the boundary classes on `Γ` of `δ` (from `Σ₁`)
/// and `β` (from `Σ₂`), by pulling both forms back to the curve at `m` nodes.
pub fn bvp_boundary_class_residual(
    config: &CurveConfig,
    delta_anti: &CVec,
    delta_holo: &CVec,
    beta: &CVec,
    m: usize,
) -> Result<f64> {
    let g = config
        .exterior_map()
        .ok_or_else(|| ScatterError::Unsupported("boundary classes need a single separating curve".into()))?;
    let n = delta_holo.len();
    let series = FaberSeries::new(&g, n, DEFAULT_SERIES_BOUND)?;
    let c = faber_orthonormal_basis(&series, n)?.factor;
    // α = Σ_p a_p e_p = Σ_k x_k dF_k with x = C a; ᾱ likewise with conjugates
    let x = &c * delta_holo;
    let y = &c * delta_anti.map(|z| z.conj());
    let mut rho_delta = Vec::with_capacity(m);
    let mut rho_beta = Vec::with_capacity(m);
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64;
        let zeta = c64(0.0, t).exp();
        let mut d = C64::default();
        for k in 0..n {
            let df = series.eval_derivative(k + 1, zeta) * c64(0.0, 1.0) * zeta;
            d += x[k] * df + (y[k] * df).conj();
        }
        rho_delta.push(d);
        let mut b = C64::default();
        for (l, bl) in beta.iter().enumerate() {
            let lf = (l + 1) as f64;
            b += bl * c64(0.0, lf) * c64(0.0, -lf * t).exp() / (2.0 * PI * lf).sqrt();
        }
        rho_beta.push(b);
    }
    let class = |samples: &[C64]| -> BoundaryFormClass {
        let f = dft_coefficients(samples);
        let trunc = m / 4;
        BoundaryFormClass::from_density(&FourierFunction::from_fn(trunc, |k| dft_mode(&f, k)))
    };
    Ok(h_minus_half_norm(&class(&rho_delta).difference(&class(&rho_beta))))
}

/// Residuals of the harmonic-measure identities on the concentric configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicMeasureReport {
    /// `‖T₂₂∂̄ω + ∂ω‖`.
    pub t22_residual: f64,
    /// `‖T₂₁∂̄ω‖`.
    pub t21_residual: f64,
    /// `‖S(0, ∂ω) − (0, ∂̄ω)‖`.
    pub scattering_residual: f64,
}

/// Harmonic-measure identities of the annulus `Σ₂` at truncation `n`.
pub fn harmonic_measure_operator_check(config: &CurveConfig, n: usize) -> Result<HarmonicMeasureReport> {
    let CurveConfig::ConcentricAnnulus { r, big_r } = *config else {
        return Err(ScatterError::Unsupported(
            "harmonic measure needs the concentric configuration".into(),
        ));
    };
    let omega = harmonic_measure(r, big_r)?;
    harmonic_measure_residuals(config, n, omega.d_coefficient())
}

/// The same residuals for the annulus function with `∂ω = c dz/z`; `c = 0` is a constant.
pub fn harmonic_measure_residuals(config: &CurveConfig, n: usize, c: f64) -> Result<HarmonicMeasureReport> {
    let CurveConfig::ConcentricAnnulus { r, big_r } = *config else {
        return Err(ScatterError::Unsupported(
            "harmonic measure needs the concentric configuration".into(),
        ));
    };
    let blocks = build_blocks(config, n, Method::ClosedForm, 0)?;
    let d2 = 2 * n + 1;
    let mut d_omega = CVec::zeros(d2);
    d_omega[n] = c64(c * annulus_basis_norm(r, big_r, -1), 0.0);
    // ∂̄ω has the same real coefficient on the conjugate basis
    let dbar_omega = d_omega.clone();
    let t22_residual = (&blocks.t22.matrix * &dbar_omega + &d_omega).norm();
    let t21_residual = (&blocks.t21.matrix * &dbar_omega).norm();
    let s = scattering_from_blocks(&blocks)?;
    let out = apply_blocks(&s, &[CVec::zeros(2 * n), d_omega])?;
    let scattering_residual = (out[0].norm_squared() + (&out[1] - &dbar_omega).norm_squared()).sqrt();
    Ok(HarmonicMeasureReport {
        t22_residual,
        t21_residual,
        scattering_residual,
    })
}

/// Column vector from a slice.
pub fn cvec(values: &[C64]) -> CVec {
    DVector::from_column_slice(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ExteriorMapPoly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, n: usize, decay: f64) -> CVec {
        CVec::from_fn(n, |i, _| {
            c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * decay.powi(i as i32)
        })
    }

    #[test]
    fn unit_circle_scattering() {
        let s = build_scattering_genus0(&CurveConfig::UnitCircle, 8).unwrap();
        assert!(s.unitarity_residual < 1e-13);
        assert!(s.blocks[0][0].matrix.norm() < 1e-13 && s.blocks[1][1].matrix.norm() < 1e-13);
        let mut a1 = CVec::zeros(8);
        a1[2] = c64(1.0, 0.0);
        let out = apply_blocks(&s, &[a1, CVec::zeros(8)]).unwrap();
        assert!((out[1][2] + c64(1.0, 0.0)).norm() < 1e-13);
        let zero = apply_blocks(&s, &[CVec::zeros(8), CVec::zeros(8)]).unwrap();
        assert!(zero.iter().all(|v| v.norm() == 0.0));
        assert!(apply_blocks(&s, &[CVec::zeros(7), CVec::zeros(8)]).is_err());
    }

    #[test]
    fn scattering_is_symmetric_and_relabeling_permutes() {
        let g = ExteriorMapPoly::new(C64::default(), vec![c64(0.2, 0.1), c64(-0.05, 0.08), c64(0.02, 0.0)]);
        let s = build_scattering_genus0(&CurveConfig::ExteriorPolyCurve(g), 12).unwrap();
        let a = s.assembled();
        assert!((&a - a.transpose()).norm() < 1e-12);
        assert!(s.unitarity_residual < 1e-6);
        let r = s.relabeled().assembled();
        let n = 12;
        let perm = CMat::from_fn(2 * n, 2 * n, |i, j| {
            if j == (i + n) % (2 * n) {
                c64(1.0, 0.0)
            } else {
                C64::default()
            }
        });
        assert!((&perm * &a * &perm - r).norm() < 1e-14);
    }

    #[test]
    fn compatible_triples_scatter_on_the_circle() {
        let n = 6;
        let mut a2 = CVec::zeros(n);
        // α₂ = d(1/z) = −√(2π) u₁
        a2[0] = c64(-(2.0 * PI).sqrt(), 0.0);
        let t = compatible_from(&CurveConfig::UnitCircle, &a2, &CVec::zeros(n), &[], n, 128).unwrap();
        assert!(t.alpha1.norm() < 1e-12);
        // dz̄ = √(2π) ē₁
        assert!((t.beta1bar[0] - c64((2.0 * PI).sqrt(), 0.0)).norm() < 1e-12);
        let s = build_scattering_genus0(&CurveConfig::UnitCircle, n).unwrap();
        assert!(scatter_residual(&s, &t).unwrap() < 1e-12);
    }

    #[test]
    fn compatible_triples_scatter_on_an_ellipse_and_a_general_curve() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in [
            ExteriorMapPoly::joukowski(c64(0.5, 0.2)),
            ExteriorMapPoly::new(c64(0.1, -0.2), vec![c64(0.2, 0.1), c64(-0.05, 0.08), c64(0.02, 0.0)]),
        ] {
            let cfg = CurveConfig::ExteriorPolyCurve(g);
            let n = 16;
            let a2 = random_vec(&mut rng, n, 0.4);
            let b2 = random_vec(&mut rng, n, 0.4);
            let t = compatible_from(&cfg, &a2, &b2, &[], n, 512).unwrap();
            let s = build_scattering_genus0(&cfg, n).unwrap();
            let res = scatter_residual(&s, &t).unwrap();
            assert!(res < 1e-7, "{res}");
        }
    }

    #[test]
    fn concentric_triples_and_harmonic_measure() {
        let cfg = CurveConfig::ConcentricAnnulus { r: 0.5, big_r: 2.0 };
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut a2 = random_vec(&mut rng, 2 * n + 1, 1.0);
        let mut b2 = random_vec(&mut rng, 2 * n + 1, 1.0);
        b2[n] = a2[n];
        let t = compatible_from(&cfg, &a2, &b2, &[], n, 0).unwrap();
        let s = build_scattering_genus0(&cfg, n).unwrap();
        assert!(scatter_residual(&s, &t).unwrap() < 1e-12);
        // perturbing Σ₂ by dω keeps the Σ₁ side and compatibility
        let c = harmonic_measure(0.5, 2.0).unwrap().d_coefficient() * annulus_basis_norm(0.5, 2.0, -1);
        a2[n] += c;
        b2[n] += c;
        let t2 = compatible_from(&cfg, &a2, &b2, &[], n, 0).unwrap();
        assert_eq!(t.alpha1, t2.alpha1);
        assert!(scatter_residual(&s, &t2).unwrap() < 1e-12);
        a2[n] += 1.0;
        assert!(matches!(
            compatible_from(&cfg, &a2, &b2, &[], n, 0),
            Err(ScatterError::NotSemiExact { .. })
        ));
        let rep = harmonic_measure_operator_check(&cfg, n).unwrap();
        assert!(rep.t22_residual < 1e-9 && rep.t21_residual < 1e-9 && rep.scattering_residual < 1e-8);
        let flat = harmonic_measure_residuals(&cfg, n, 0.0).unwrap();
        assert_eq!(
            (flat.t22_residual, flat.t21_residual, flat.scattering_residual),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn periods_of_the_image_vanish() {
        let cfg = CurveConfig::ConcentricAnnulus { r: 0.5, big_r: 2.0 };
        let n = 6;
        for i in 0..2 * n {
            let mut a = CVec::zeros(2 * n);
            a[i] = c64(1.0, 0.0);
            assert!(cohomology_period_check(&cfg, &a, 1.0, 256).unwrap().norm() < 1e-10);
        }
        assert_eq!(
            cohomology_period_check(&cfg, &CVec::zeros(2 * n), 1.0, 64).unwrap(),
            C64::default()
        );
        let mut dlog = CVec::zeros(2 * n + 1);
        dlog[n] = c64(annulus_basis_norm(0.5, 2.0, -1), 0.0);
        let p = annulus_period(0.5, 2.0, &dlog, &CVec::zeros(2 * n + 1), 1.0, 64).unwrap();
        assert!((p - c64(0.0, 2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn index_examples() {
        let e = index_estimate(&CurveConfig::UnitCircle, 16, DEFAULT_INDEX_THRESHOLD).unwrap();
        assert_eq!((e.ker, e.coker, e.index), (0, 0, 0));
        let cfg = CurveConfig::ConcentricAnnulus { r: 0.5, big_r: 2.0 };
        for n in [16, 24, 32] {
            let e = index_estimate(&cfg, n, DEFAULT_INDEX_THRESHOLD).unwrap();
            assert_eq!((e.ker, e.coker, e.index), (0, 1, -1));
            assert!(cokernel_measure_angle(&cfg, &e).unwrap() < 1e-3);
        }
        let amb = CMat::from_diagonal(&cvec(&[c64(1.0, 0.0), c64(2e-6, 0.0)]));
        assert!(matches!(
            index_of(&amb, 1e-6),
            Err(ScatterError::ThresholdAmbiguous { .. })
        ));
    }

    #[test]
    fn period_map_and_grunsky_operator() {
        let p = period_map(&CurveConfig::UnitCircle, 8).unwrap();
        assert!(p.upsilon_norm < 1e-14 && (p.theta_sigma_min - 1.0).abs() < 1e-14);
        let c = c64(0.3, 0.4);
        let cfg = CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::joukowski(c));
        let (gr, norm) = grunsky_operator(&cfg, 10).unwrap();
        assert!((norm - 0.5).abs() < 1e-10);
        for m in 0..10 {
            assert!((gr.matrix[(m, m)] - c.powi(m as i32 + 1)).norm() < 1e-12);
        }
        assert!((&gr.matrix - gr.matrix.transpose()).norm() < 1e-14);
        let (id, norm) = grunsky_operator(&CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::identity()), 6).unwrap();
        assert!(id.matrix.norm() == 0.0 && norm == 0.0);
        let norms: Vec<f64> = [0.4, 0.2, 0.05]
            .iter()
            .map(|&s| {
                let g = ExteriorMapPoly::new(C64::default(), vec![c64(s, 0.0), c64(0.5 * s, 0.1 * s)]);
                period_map(&CurveConfig::ExteriorPolyCurve(g), 12).unwrap().upsilon_norm
            })
            .collect();
        assert!(norms[0] > norms[1] && norms[1] > norms[2] && norms[0] < 1.0);
    }

    #[test]
    fn holomorphic_bvp_examples() {
        let n = 6;
        let z = CVec::zeros(n);
        let sol = solve_holomorphic_bvp(&CurveConfig::UnitCircle, &z, &z, &[], n).unwrap();
        assert!(sol.beta.norm() == 0.0);
        let mut e = CVec::zeros(n);
        e[1] = c64(1.0, 0.0);
        let sol = solve_holomorphic_bvp(&CurveConfig::UnitCircle, &e, &z, &[], n).unwrap();
        assert!((&sol.gamma_bar - &e).norm() < 1e-14 && (&sol.beta + &e).norm() < 1e-14);

        let cfg = CurveConfig::ExteriorPolyCurve(ExteriorMapPoly::joukowski(c64(0.4, 0.1)));
        let n = 16;
        let mut g = CVec::zeros(n);
        g[0] = c64(1.0, 0.0);
        let (da, dh) = bvp_datum(&cfg, &g).unwrap();
        let sol = solve_holomorphic_bvp(&cfg, &da, &dh, &[], n).unwrap();
        assert!(sol.condition <= 1.1 / (1.0 - sol.t11_norm));
        let res = bvp_boundary_class_residual(&cfg, &da, &dh, &sol.beta, 512).unwrap();
        assert!(res < 1e-7, "{res}");
        // a pure antiholomorphic datum is not in the image when T₁₁ ≠ 0
        assert!(matches!(
            solve_holomorphic_bvp(&cfg, &g, &CVec::zeros(n), &[], n),
            Err(ScatterError::NotSolvable { .. })
        ));
    }
}
