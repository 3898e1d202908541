//! Dense complex linear algebra helpers built on `nalgebra`.
//!
//! Everything here is deterministic: the power iteration draws its start
//! vector from a fixed-seed ChaCha stream and all reductions run in index order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use crate::error::{Result, ScatterError};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;
/// Dense complex matrix.
pub type CMat = DMatrix<C64>;
/// Dense complex column vector.
pub type CVec = DVector<C64>;

/// Seed of the power-iteration start vector.
pub const POWER_SEED: u64 = 0x5e_ed0f_5ca7;
/// Iteration cap of the power method.
pub const POWER_MAX_ITER: usize = 200;

/// Shorthand for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Singular values in decreasing order; empty for a matrix with a zero dimension.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Largest singular value computed from a full SVD (0 for empty matrices).
pub fn spectral_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// 2-norm condition number (infinite when the matrix is singular).
pub fn condition_number(a: &CMat) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// Largest entry modulus.
pub fn max_abs_entry(a: &CMat) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// Outcome of the power method on `A^H A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerNorm {
    /// Estimated spectral norm of `A`.
    pub norm: f64,
    /// Residual `|A^H A v - sigma^2 v|` of the final iterate.
    pub residual: f64,
    /// Iterations performed.
    pub iterations: usize,
}

/// Spectral norm by power iteration on `A^H A` with a fixed seed and a 200-step cap.
pub fn power_norm(a: &CMat) -> PowerNorm {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return PowerNorm {
            norm: 0.0,
            residual: 0.0,
            iterations: 0,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v = CVec::from_fn(n, |_, _| c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let nv = v.norm();
    v /= c64(nv, 0.0);
    let ah = a.adjoint();
    let mut lambda = 0.0;
    let mut residual = 0.0;
    let mut iterations = 0;
    for it in 0..POWER_MAX_ITER {
        iterations = it + 1;
        let w = &ah * (a * &v);
        let new_lambda = v.dotc(&w).re;
        residual = (&w - &v * c64(new_lambda, 0.0)).norm();
        let wn = w.norm();
        if wn == 0.0 {
            lambda = 0.0;
            residual = 0.0;
            break;
        }
        let converged = (new_lambda - lambda).abs() <= 1e-16 * new_lambda.abs() && residual <= 1e-14 * new_lambda.abs();
        lambda = new_lambda;
        v = w / c64(wn, 0.0);
        if converged {
            break;
        }
    }
    PowerNorm {
        norm: lambda.max(0.0).sqrt(),
        residual,
        iterations,
    }
}

/// Least-squares solution of `A x = b` by Householder QR (requires `rows >= cols`).
///
/// Returns the solution and the Euclidean norm of the misfit `A x - b`.
pub fn lstsq(a: &CMat, b: &CVec) -> Result<(CVec, f64)> {
    if a.nrows() != b.len() {
        return Err(ScatterError::DimensionMismatch {
            expected: a.nrows(),
            found: b.len(),
        });
    }
    if a.nrows() < a.ncols() {
        return Err(ScatterError::DimensionMismatch {
            expected: a.ncols(),
            found: a.nrows(),
        });
    }
    let qr = a.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let rhs = q.adjoint() * b;
    let x = r
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| ScatterError::IllConditioned {
            what: "least-squares triangular factor".into(),
            condition: f64::INFINITY,
            limit: 1e12,
        })?;
    let misfit = (a * &x - b).norm();
    Ok((x, misfit))
}

/// Upper-triangular factor `C = L^{-H}` of a Hermitian positive definite `H = L L^H`,
/// so that `C^H H C = I`. Fails if a pivot is not positive or `cond(H) > limit`.
pub fn orthonormalizing_factor(h: &CMat, limit: f64) -> Result<CMat> {
    let cond = condition_number(h);
    if !cond.is_finite() || cond > limit {
        return Err(ScatterError::IllConditioned {
            what: "Gram matrix".into(),
            condition: cond,
            limit,
        });
    }
    let chol = nalgebra::Cholesky::new(h.clone()).ok_or_else(|| ScatterError::IllConditioned {
        what: "Gram matrix (non-positive Cholesky pivot)".into(),
        condition: cond,
        limit,
    })?;
    let l = chol.l();
    let n = l.nrows();
    let lh = l.adjoint();
    let c = lh
        .solve_upper_triangular(&CMat::identity(n, n))
        .ok_or(ScatterError::IllConditioned {
            what: "Cholesky factor".into(),
            condition: cond,
            limit,
        })?;
    Ok(c)
}

/// Inverse of an upper-triangular matrix with nonzero diagonal.
pub fn upper_triangular_inverse(c: &CMat) -> Result<CMat> {
    let n = c.nrows();
    c.solve_upper_triangular(&CMat::identity(n, n))
        .ok_or(ScatterError::IllConditioned {
            what: "triangular inverse".into(),
            condition: f64::INFINITY,
            limit: 1e12,
        })
}

/// Discrete Fourier coefficients `c_k = (1/M) sum_j f_j e^{-2 pi i j k / M}`, `k = 0..M-1`.
///
/// Negative modes `-k` live at index `M - k`.
pub fn dft_coefficients(samples: &[C64]) -> Vec<C64> {
    let m = samples.len();
    if m == 0 {
        return Vec::new();
    }
    let mut buf = samples.to_vec();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    buf.iter().map(|z| z * scale).collect()
}

/// Coefficient of mode `k` (possibly negative) from the output of [`dft_coefficients`].
#[inline]
pub fn dft_mode(coeffs: &[C64], k: i64) -> C64 {
    let m = coeffs.len() as i64;
    coeffs[k.rem_euclid(m) as usize]
}

/// Spectral norm of `A - I` for square `A`.
pub fn distance_to_identity(a: &CMat) -> f64 {
    let n = a.nrows();
    spectral_norm(&(a - CMat::identity(n, a.ncols())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_norm_matches_svd_on_diagonal() {
        let a = CMat::from_diagonal(&CVec::from_vec(vec![c64(0.8, 0.0), c64(0.64, 0.0), c64(0.1, 0.2)]));
        let p = power_norm(&a);
        assert!((p.norm - 0.8).abs() < 1e-12, "{p:?}");
        assert!((spectral_norm(&a) - 0.8).abs() < 1e-14);
    }

    #[test]
    fn power_norm_is_deterministic() {
        let a = CMat::from_fn(5, 4, |i, j| c64((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.05));
        assert_eq!(power_norm(&a), power_norm(&a));
    }

    #[test]
    fn lstsq_recovers_consistent_system() {
        let a = CMat::from_fn(6, 3, |i, j| {
            c64(1.0 / (1.0 + i as f64 + j as f64), (i * j) as f64 * 0.01)
        });
        let x = CVec::from_vec(vec![c64(1.0, 2.0), c64(-0.5, 0.0), c64(0.0, 3.0)]);
        let b = &a * &x;
        let (y, r) = lstsq(&a, &b).unwrap();
        assert!(r < 1e-12);
        assert!((y - x).norm() < 1e-9);
    }

    #[test]
    fn orthonormalizing_factor_whitens() {
        let b = CMat::from_fn(4, 4, |i, j| {
            c64(
                (i + 2 * j) as f64 * 0.1 + if i == j { 1.0 } else { 0.0 },
                (i as f64) * 0.03,
            )
        });
        let h = b.adjoint() * &b;
        let c = orthonormalizing_factor(&h, 1e12).unwrap();
        let w = c.adjoint() * &h * &c;
        assert!(distance_to_identity(&w) < 1e-12);
        for i in 0..4 {
            assert!(c[(i, i)].re > 0.0 && c[(i, i)].im.abs() < 1e-14);
            for j in 0..i {
                assert_eq!(c[(i, j)], c64(0.0, 0.0));
            }
        }
    }

    #[test]
    fn dft_recovers_trig_polynomial() {
        let m = 16;
        let samples: Vec<C64> = (0..m)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                c64(0.0, t).exp() * 2.0 + c64(0.0, -3.0 * t).exp() * c64(0.0, 1.0)
            })
            .collect();
        let c = dft_coefficients(&samples);
        assert!((dft_mode(&c, 1) - c64(2.0, 0.0)).norm() < 1e-14);
        assert!((dft_mode(&c, -3) - c64(0.0, 1.0)).norm() < 1e-14);
        assert!(dft_mode(&c, 2).norm() < 1e-14);
    }
}
