//! Cyclic Jacobi eigensolver for symmetric matrices.
//!
//! Used for the block matrices L_A and curly-L_A, whose eigenstructure the
//! deterministic identities (singular values vs. block eigenvalues, Cauchy
//! interlacing, component-norm equality) are stated against. Deterministic
//! sweep order, eigenvectors accumulated.

use crate::mat::Mat;
use crate::scalar::Real;

#[derive(Debug, Clone, thiserror::Error)]
pub enum EigenError {
    #[error("matrix is not symmetric (max asymmetry {0})")]
    NotSymmetric(f64),
    #[error("matrix contains NaN or Inf")]
    NonFinite,
    #[error("Jacobi sweep limit reached without convergence")]
    NoConvergence,
}

#[derive(Debug, Clone)]
pub struct SymEigen<F> {
    /// Eigenvalues sorted descending.
    pub values: Vec<F>,
    /// Column k is the eigenvector for `values[k]`.
    pub vectors: Mat<F>,
}

pub fn check_symmetric<F: Real>(a: &Mat<F>, tol: F) -> Result<(), EigenError> {
    if a.has_non_finite() {
        return Err(EigenError::NonFinite);
    }
    if !a.is_square() {
        return Err(EigenError::NotSymmetric(f64::INFINITY));
    }
    let mut worst = F::zero();
    for i in 0..a.rows() {
        for j in (i + 1)..a.cols() {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if worst > tol {
        return Err(EigenError::NotSymmetric(worst.to_f64_lossy()));
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix by two-sided cyclic Jacobi.
pub fn sym_eigen<F: Real>(a: &Mat<F>) -> Result<SymEigen<F>, EigenError> {
    let scale = a.frobenius().max(F::one());
    check_symmetric(a, F::epsilon() * scale * F::of_f64(64.0))?;
    let n = a.rows();
    let mut m = a.clone();
    // Symmetrize exactly so the iteration sees a bit-symmetric matrix.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)]) / F::of_f64(2.0);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let mut v = Mat::<F>::identity(n);
    let eps = F::epsilon();
    let mut converged = false;
    for _ in 0..64 {
        let mut off = F::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off.sqrt() <= eps * scale {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= eps * scale * F::of_f64(0.01) {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let tau = (aqq - app) / (apq + apq);
                let t = if tau >= F::zero() {
                    F::one() / (tau + (F::one() + tau * tau).sqrt())
                } else {
                    -F::one() / (-tau + (F::one() + tau * tau).sqrt())
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = c * t;
                // Apply J^T M J on rows/cols p, q.
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(EigenError::NoConvergence);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap().then(i.cmp(&j)));
    let values: Vec<F> = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(SymEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_fixed_point() {
        let d = Mat::from_rows(vec![vec![1.0f64, 0.0, 0.0], vec![0.0, 3.0, 0.0], vec![0.0, 0.0, 2.0]]);
        let e = sym_eigen(&d).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn two_by_two_known() {
        // [[0,1],[1,0]] has eigenvalues +-1
        let a = Mat::from_rows(vec![vec![0.0f64, 1.0], vec![1.0, 0.0]]);
        let e = sym_eigen(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        // residual check A v = lambda v
        for k in 0..2 {
            let vcol = e.vectors.col(k);
            let av = a.matvec(&vcol);
            for i in 0..2 {
                assert!((av[i] - e.values[k] * vcol[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let a = Mat::from_rows(vec![vec![0.0f64, 1.0], vec![2.0, 0.0]]);
        assert!(matches!(sym_eigen(&a), Err(EigenError::NotSymmetric(_))));
    }
}
