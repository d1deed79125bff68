//! One-sided Jacobi SVD.
//!
//! The experiments live and die on the accuracy of tiny singular values:
//! every small-ball indicator is a comparison of sigma_min against a
//! threshold of order n^{-1/2}. One-sided Jacobi computes small singular
//! values to high *relative* accuracy, which bidiagonalization-based solvers
//! do not, so it is the baseline SVD for everything at desk scale. The sweep
//! order is a fixed cyclic order, making results deterministic given the
//! input bits.

use crate::mat::{norm2, Mat};
use crate::scalar::Real;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SvdError {
    #[error("matrix contains NaN or Inf")]
    NonFinite,
    #[error("Jacobi sweep limit reached without convergence")]
    NoConvergence,
}

/// Full one-sided Jacobi SVD of an m x n matrix (any aspect).
///
/// Returns `(u, sigma, v)` with `a = u * diag(sigma) * v^T`, `sigma` sorted
/// descending. `u` is m x n with orthonormal columns where `sigma > 0`
/// (columns for exact zeros are zero), `v` is n x n orthogonal.
///
/// The routine orthogonalizes the n columns by right rotations. For wide
/// inputs (m < n) the trailing n - m singular values come out exactly zero
/// and their `v` columns span the kernel, which is what the normal-vector
/// computation consumes.
pub fn jacobi_svd<F: Real>(a: &Mat<F>) -> Result<JacobiSvd<F>, SvdError> {
    if a.has_non_finite() {
        return Err(SvdError::NonFinite);
    }
    let m = a.rows();
    let n = a.cols();
    let mut w = a.clone(); // working copy, columns get rotated
    let mut v = Mat::<F>::identity(n);

    let eps = F::epsilon();
    let tol = eps * F::of_f64(8.0);
    // Columns whose norm collapses below eps * ||A||_F are numerically zero;
    // without this cutoff rank-deficient inputs rotate forever.
    let dead = {
        let t = eps * a.frobenius();
        t * t
    };
    let max_sweeps = 64;

    let mut converged = false;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                // Gram entries of columns p, q.
                let mut app = F::zero();
                let mut aqq = F::zero();
                let mut apq = F::zero();
                for i in 0..m {
                    let xp = w[(i, p)];
                    let xq = w[(i, q)];
                    app += xp * xp;
                    aqq += xq * xq;
                    apq += xp * xq;
                }
                if apq == F::zero() || app <= dead || aqq <= dead {
                    continue;
                }
                if apq.abs() <= tol * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                // Classic stable rotation solving the 2x2 symmetric problem.
                let tau = (aqq - app) / (apq + apq);
                let t = if tau >= F::zero() {
                    F::one() / (tau + (F::one() + tau * tau).sqrt())
                } else {
                    -F::one() / (-tau + (F::one() + tau * tau).sqrt())
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let xp = w[(i, p)];
                    let xq = w[(i, q)];
                    w[(i, p)] = c * xp - s * xq;
                    w[(i, q)] = s * xp + c * xq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SvdError::NoConvergence);
    }

    // Column norms are the singular values; sort descending.
    let mut entries: Vec<(F, usize)> = (0..n).map(|j| (norm2(&w.col(j)), j)).collect();
    entries.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));

    let mut sigma = Vec::with_capacity(n);
    let mut u = Mat::zeros(m, n);
    let mut vs = Mat::zeros(n, n);
    for (k, (s, j)) in entries.iter().enumerate() {
        sigma.push(*s);
        if *s > F::zero() {
            for i in 0..m {
                u[(i, k)] = w[(i, *j)] / *s;
            }
        }
        for i in 0..n {
            vs[(i, k)] = v[(i, *j)];
        }
    }
    Ok(JacobiSvd { u, sigma, v: vs })
}

#[derive(Debug, Clone)]
pub struct JacobiSvd<F> {
    pub u: Mat<F>,
    pub sigma: Vec<F>,
    pub v: Mat<F>,
}

impl<F: Real> JacobiSvd<F> {
    pub fn sigma_min(&self) -> F {
        *self.sigma.last().expect("empty spectrum")
    }

    /// Right-singular vector for the k-th singular value (descending order).
    pub fn right_vector(&self, k: usize) -> Vec<F> {
        self.v.col(k)
    }
}

/// Singular values only, descending.
pub fn singular_values<F: Real>(a: &Mat<F>) -> Result<Vec<F>, SvdError> {
    if a.has_non_finite() {
        return Err(SvdError::NonFinite);
    }
    // Same sweep, no V accumulation.
    let m = a.rows();
    let n = a.cols();
    let mut w = a.clone();
    let eps = F::epsilon();
    let tol = eps * F::of_f64(8.0);
    let dead = {
        let t = eps * a.frobenius();
        t * t
    };
    let mut converged = false;
    for _ in 0..64 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let colp = (0..m).map(|i| w[(i, p)]);
                let colq = (0..m).map(|i| w[(i, q)]);
                let mut app = F::zero();
                let mut aqq = F::zero();
                let mut apq = F::zero();
                for (xp, xq) in colp.zip(colq) {
                    app += xp * xp;
                    aqq += xq * xq;
                    apq += xp * xq;
                }
                if apq == F::zero()
                    || app <= dead
                    || aqq <= dead
                    || apq.abs() <= tol * (app * aqq).sqrt()
                {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (apq + apq);
                let t = if tau >= F::zero() {
                    F::one() / (tau + (F::one() + tau * tau).sqrt())
                } else {
                    -F::one() / (-tau + (F::one() + tau * tau).sqrt())
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let xp = w[(i, p)];
                    let xq = w[(i, q)];
                    w[(i, p)] = c * xp - s * xq;
                    w[(i, q)] = s * xp + c * xq;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SvdError::NoConvergence);
    }
    let mut sigma: Vec<F> = (0..n).map(|j| norm2(&w.col(j))).collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Mat;

    #[test]
    fn identity_and_diag() {
        let s = singular_values(&Mat::<f64>::identity(3)).unwrap();
        assert_eq!(s, vec![1.0, 1.0, 1.0]);
        let d = Mat::from_rows(vec![vec![3.0f64, 0.0], vec![0.0, -1.0]]);
        let s = singular_values(&d).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-15 && (s[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_and_orthogonality() {
        // deterministic pseudo-random fill
        let mut x = 1u64;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let a = Mat::from_fn(7, 5, |_, _| next());
        let svd = jacobi_svd(&a).unwrap();
        // a = U S V^T
        let mut us = svd.u.clone();
        for k in 0..5 {
            for i in 0..7 {
                us[(i, k)] *= svd.sigma[k];
            }
        }
        let rec = us.matmul(&svd.v.transpose());
        for i in 0..7 {
            for j in 0..5 {
                assert!((rec[(i, j)] - a[(i, j)]).abs() < 1e-12);
            }
        }
        let vtv = svd.v.transpose().matmul(&svd.v);
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((vtv[(i, j)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn wide_matrix_kernel() {
        // 2x3 of rank 2: one exact-zero singular value whose v-column spans the kernel
        let a = Mat::from_rows(vec![vec![1.0f64, 0.0, 1.0], vec![0.0, 1.0, 1.0]]);
        let svd = jacobi_svd(&a).unwrap();
        assert!(svd.sigma[2] < 1e-14);
        let k = svd.right_vector(2);
        let img = a.matvec(&k);
        assert!(img.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn rejects_non_finite() {
        let a = Mat::from_rows(vec![vec![f64::NAN]]);
        assert!(matches!(singular_values(&a), Err(SvdError::NonFinite)));
    }

    #[test]
    fn f32_instantiation_matches_f64() {
        let a64 = Mat::from_rows(vec![vec![2.0f64, 1.0], vec![1.0, 3.0]]);
        let a32 = Mat::from_rows(vec![vec![2.0f32, 1.0], vec![1.0, 3.0]]);
        let s64 = singular_values(&a64).unwrap();
        let s32 = singular_values(&a32).unwrap();
        for (x, y) in s64.iter().zip(&s32) {
            assert!((x - *y as f64).abs() < 1e-6);
        }
    }
}
