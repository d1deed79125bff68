//! Dense spectral computations: singular values and gaps, least singular
//! values under shifts, real-eigenvalue counts, normal vectors to column
//! spans, interlacing checks, and delocalization profiles.

use num_complex::Complex;
use serde::Serialize;

use crate::linalg::{
    eigenvalues, jacobi_svd, sigma_min_via_qr, singular_values, sym_eigen, NonSymEigenError,
    SvdError,
};
use crate::mat::{dot, norm2, Mat};
use crate::scalar::Real;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SpectralError {
    #[error(transparent)]
    Svd(#[from] SvdError),
    #[error(transparent)]
    Eigen(#[from] crate::linalg::EigenError),
    #[error(transparent)]
    NonSym(#[from] NonSymEigenError),
    #[error("need at least 2 values for a gap")]
    TooFewValues,
    #[error("operation needs a square matrix")]
    NotSquare,
    #[error("column span is rank deficient: second-smallest singular value {0} below tolerance")]
    RankDeficient(f64),
}

/// Flat per-sample summary of the spectral observables.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSummary {
    pub singular_values: Vec<f64>,
    pub sigma_min: f64,
    pub op_norm: f64,
    pub min_gap: f64,
    pub min_gap_index: usize,
    pub min_gap_scaled: f64,
    pub real_eig_count: Option<usize>,
}

pub fn summary(m: &Mat<f64>, count_real_eigs: bool) -> Result<SpectralSummary, SpectralError> {
    let sv = svd_values(m)?;
    let (k, gap, scaled) = min_gap(&sv, m.cols().min(m.rows()))?;
    let real_eig_count = if count_real_eigs && m.is_square() {
        Some(real_eigen_count(m, 1e-9)?)
    } else {
        None
    };
    Ok(SpectralSummary {
        sigma_min: *sv.last().unwrap(),
        op_norm: sv[0],
        min_gap: gap,
        min_gap_index: k,
        min_gap_scaled: scaled,
        singular_values: sv,
        real_eig_count,
    })
}

/// Singular values, descending. One-sided Jacobi under the hood.
pub fn svd_values<F: Real>(m: &Mat<F>) -> Result<Vec<F>, SvdError> {
    singular_values(m)
}

/// Smallest gap over consecutive singular values: returns (argmin index,
/// gap, sqrt(n) * gap) with the smallest index winning ties. The scaling
/// dimension is passed by the caller (number of singular values of the
/// underlying n, so rectangular samples scale by their column count).
pub fn min_gap<F: Real>(values: &[F], scale_n: usize) -> Result<(usize, F, F), SpectralError> {
    if values.len() < 2 {
        return Err(SpectralError::TooFewValues);
    }
    let mut best_k = 0usize;
    let mut best = values[0] - values[1];
    for k in 1..values.len() - 1 {
        let g = values[k] - values[k + 1];
        if g < best {
            best = g;
            best_k = k;
        }
    }
    let scaled = F::of_usize(scale_n).sqrt() * best;
    Ok((best_k, best, scaled))
}

/// sigma_min(A - lambda I) via the Jacobi baseline.
pub fn sigma_min_shifted<F: Real>(a: &Mat<F>, lambda: F) -> Result<F, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::NotSquare);
    }
    let sv = singular_values(&a.shift(lambda))?;
    Ok(*sv.last().unwrap())
}

/// Fast path for indicator experiments: QR + inverse iteration.
pub fn sigma_min_shifted_fast<F: Real>(a: &Mat<F>, lambda: F) -> Result<F, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::NotSquare);
    }
    Ok(sigma_min_via_qr(&a.shift(lambda)).0)
}

/// sigma_min(G - z I) for a complex matrix through the real 2n x 2n
/// embedding (exact: the embedding's spectrum doubles each singular value).
pub fn sigma_min_shifted_complex_fast<F: Real>(
    g: &Mat<Complex<F>>,
    z: Complex<F>,
) -> Result<F, SpectralError> {
    if !g.is_square() {
        return Err(SpectralError::NotSquare);
    }
    Ok(sigma_min_via_qr(&g.shift_c(z).real_embedding()).0)
}

/// Count of eigenvalues with |Im| <= rel_tol * sqrt(n).
pub fn real_eigen_count(a: &Mat<f64>, rel_tol: f64) -> Result<usize, SpectralError> {
    let n = a.rows();
    let ev = eigenvalues(a)?;
    let cap = rel_tol * (n as f64).sqrt();
    Ok(ev.iter().filter(|z| z.im.abs() <= cap).count())
}

/// All eigenvalues; re-exported here so experiments depend on one module.
pub fn eigenvalues_real_matrix(a: &Mat<f64>) -> Result<Vec<Complex<f64>>, SpectralError> {
    Ok(eigenvalues(a)?)
}

/// Unit normal to the span of all columns of (A - lambda I) except column j.
///
/// Computed from the SVD kernel of the transposed submatrix; the sign is
/// fixed by making the largest-magnitude coordinate positive.
pub fn normal_vector<F: Real>(a: &Mat<F>, lambda: F, j: usize) -> Result<Vec<F>, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::NotSquare);
    }
    let n = a.rows();
    let b = a.shift(lambda).without_col(j); // n x (n-1)
    let svd = jacobi_svd(&b.transpose())?; // (n-1) x n, kernel dim >= 1
    // sigma has n entries; the last is ~0. Rank check on the one above it.
    let sigma = &svd.sigma;
    let scale = sigma[0].max(F::one());
    if n >= 2 && sigma[n - 2] <= scale * F::of_f64(1e-12) {
        return Err(SpectralError::RankDeficient(sigma[n - 2].to_f64_lossy()));
    }
    let mut v = svd.right_vector(n - 1);
    let nrm = norm2(&v);
    for x in &mut v {
        *x /= nrm;
    }
    // Deterministic sign.
    let mut imax = 0;
    for i in 1..n {
        if v[i].abs() > v[imax].abs() {
            imax = i;
        }
    }
    if v[imax] < F::zero() {
        for x in &mut v {
            *x = -*x;
        }
    }
    Ok(v)
}

/// Distance from column j of (A - lambda I) to the span of the others.
/// Equals |<X_j, normal_vector>| because the span has codimension one.
pub fn dist_col_to_span<F: Real>(a: &Mat<F>, lambda: F, j: usize) -> Result<F, SpectralError> {
    let v = normal_vector(a, lambda, j)?;
    let xj = a.shift(lambda).col(j);
    Ok(dot(&xj, &v).abs())
}

/// Overlap decomposition of the two normal vectors at shifts lambda1 and
/// lambda2: alpha = <v2, v1>, beta = sqrt(1 - alpha^2) >= 0.
pub fn overlap_beta<F: Real>(
    a: &Mat<F>,
    lambda1: F,
    lambda2: F,
    j: usize,
) -> Result<(F, F), SpectralError> {
    let v1 = normal_vector(a, lambda1, j)?;
    let v2 = normal_vector(a, lambda2, j)?;
    let alpha = dot(&v2, &v1);
    let beta = (F::one() - alpha * alpha).max(F::zero()).sqrt();
    Ok((alpha, beta))
}

/// Cauchy interlacing of a symmetric matrix and its principal minor:
/// lambda_{k+1}(M) <= lambda_k(M^[j]) <= lambda_k(M). Returns the worst
/// signed violation (negative or tiny when interlacing holds).
pub fn interlacing_check<F: Real>(msym: &Mat<F>, j: usize) -> Result<F, SpectralError> {
    let full = sym_eigen(msym)?;
    let minor = sym_eigen(&msym.principal_minor(j))?;
    let n = msym.rows();
    let mut worst = F::neg_infinity();
    for k in 0..n - 1 {
        let upper_violation = minor.values[k] - full.values[k];
        let lower_violation = full.values[k + 1] - minor.values[k];
        worst = worst.max(upper_violation).max(lower_violation);
    }
    Ok(worst)
}

/// Least singular vector of (A - lambda I) plus its coordinate profile.
#[derive(Debug, Clone, Serialize)]
pub struct DelocalizationProfile {
    pub vector: Vec<f64>,
    /// For each theta in the grid, |{i : |w_i| >= theta n^{-1/2}}|.
    pub counts: Vec<(f64, usize)>,
    /// Largest theta whose count still reaches ceil(3n/4).
    pub theta_three_quarters: f64,
}

pub fn delocalization_profile(
    a: &Mat<f64>,
    lambda: f64,
    theta_grid: &[f64],
) -> Result<DelocalizationProfile, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::NotSquare);
    }
    let n = a.rows();
    let svd = jacobi_svd(&a.shift(lambda))?;
    let w = svd.right_vector(n - 1);
    Ok(profile_of_vector(&w, n, theta_grid))
}

/// Profile of an externally supplied unit vector (test hook).
pub fn profile_of_vector(w: &[f64], n: usize, theta_grid: &[f64]) -> DelocalizationProfile {
    let rn = (n as f64).sqrt();
    let counts: Vec<(f64, usize)> = theta_grid
        .iter()
        .map(|&th| (th, w.iter().filter(|x| x.abs() >= th / rn).count()))
        .collect();
    let mut abs: Vec<f64> = w.iter().map(|x| x.abs()).collect();
    abs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let k = (3 * n).div_ceil(4);
    let theta_three_quarters = rn * abs[k - 1];
    DelocalizationProfile { vector: w.to_vec(), counts, theta_three_quarters }
}

/// Joint delocalization count for a shift pair: coordinates where both least
/// singular vectors lie in the band [theta n^{-1/2}, cap_theta n^{-1/2}].
pub fn joint_band_count(
    a: &Mat<f64>,
    lambda1: f64,
    lambda2: f64,
    theta: f64,
    cap_theta: f64,
) -> Result<usize, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::NotSquare);
    }
    let n = a.rows();
    let rn = (n as f64).sqrt();
    let w1 = jacobi_svd(&a.shift(lambda1))?.right_vector(n - 1);
    let w2 = jacobi_svd(&a.shift(lambda2))?.right_vector(n - 1);
    let lo = theta / rn;
    let hi = cap_theta / rn;
    Ok((0..n)
        .filter(|&i| {
            let x = w1[i].abs();
            let y = w2[i].abs();
            x >= lo && x <= hi && y >= lo && y <= hi
        })
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::EntryLaw;
    use crate::distributions::Law;
    use crate::ensembles::{sample_trial, EnsembleSpec, Family};
    use crate::rng::stream;
    use rand::Rng;

    fn rademacher_mat(n: usize, m: usize, seed: u64, trial: u64) -> Mat<f64> {
        let mut rng = stream(seed, "spectral-test", trial);
        Mat::from_fn(n, m, |_, _| if rng.gen::<bool>() { 1.0 } else { -1.0 })
    }

    #[test]
    fn svd_values_examples() {
        assert_eq!(svd_values(&Mat::<f64>::identity(3)).unwrap(), vec![1.0, 1.0, 1.0]);
        let d = Mat::from_rows(vec![vec![3.0f64, 0.0], vec![0.0, -1.0]]);
        let sv = svd_values(&d).unwrap();
        assert!((sv[0] - 3.0).abs() < 1e-14 && (sv[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn svd_matches_gram_eigen_oracle() {
        // 6 x 4 rademacher; the Gram matrix eigenvalues are the squared
        // singular values, computed by the independent symmetric solver.
        let a = rademacher_mat(6, 4, 3, 0);
        let sv = svd_values(&a).unwrap();
        let gram = a.transpose().matmul(&a);
        let eig = sym_eigen(&gram).unwrap();
        for (s, l) in sv.iter().zip(&eig.values) {
            assert!((s * s - l).abs() < 1e-10 * eig.values[0].max(1.0));
        }
    }

    #[test]
    fn svd_transpose_invariance() {
        let a = rademacher_mat(7, 7, 4, 1);
        let s1 = svd_values(&a).unwrap();
        let s2 = svd_values(&a.transpose()).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            assert!((x - y).abs() <= 1e-12 * s1[0]);
        }
    }

    #[test]
    fn min_gap_examples() {
        let (k, g, _) = min_gap(&[3.0, 2.0, 2.0, 1.0], 4).unwrap();
        assert_eq!((k, g), (1, 0.0));
        let (k, g, _) = min_gap(&[5.0, 3.0, 2.5, 1.0], 4).unwrap();
        assert_eq!((k, g), (1, 0.5));
        assert!(min_gap::<f64>(&[1.0], 1).is_err());
    }

    #[test]
    fn min_gap_matches_exhaustive_scan() {
        let a = rademacher_mat(50, 50, 5, 2);
        let sv = svd_values(&a).unwrap();
        let (k, g, _) = min_gap(&sv, 50).unwrap();
        let mut best = f64::INFINITY;
        let mut bk = 0;
        for i in 0..sv.len() - 1 {
            if sv[i] - sv[i + 1] < best {
                best = sv[i] - sv[i + 1];
                bk = i;
            }
        }
        assert_eq!(k, bk);
        assert_eq!(g, best);
    }

    #[test]
    fn min_gap_argmin_scale_invariant() {
        let a = rademacher_mat(20, 20, 6, 3);
        let sv = svd_values(&a).unwrap();
        let (k1, _, _) = min_gap(&sv, 20).unwrap();
        let scaled: Vec<f64> = sv.iter().map(|x| 3.5 * x).collect();
        let (k2, _, _) = min_gap(&scaled, 20).unwrap();
        assert_eq!(k1, k2);
    }

    #[test]
    fn sigma_min_examples_and_inverse_norm_oracle() {
        assert!(sigma_min_shifted(&Mat::<f64>::identity(4), 1.0).unwrap() < 1e-14);
        let d = Mat::from_rows(vec![vec![2.0f64, 0.0], vec![0.0, 5.0]]);
        assert!((sigma_min_shifted(&d, 1.0).unwrap() - 1.0).abs() < 1e-14);
        // 1 / ||A^{-1}||_op oracle at n=4 via Gauss elimination on e_k images
        let a = Mat::from_rows(vec![
            vec![2.0, 1.0, 0.0, 0.5],
            vec![-1.0, 3.0, 1.0, 0.0],
            vec![0.0, 1.0, 4.0, 1.0],
            vec![0.5, 0.0, 1.0, 2.0],
        ]);
        let smin = sigma_min_shifted(&a, 0.0).unwrap();
        // ||A^{-1}||_op = 1/smin: check via svd of the explicit inverse
        let inv = invert4(&a);
        let sv_inv = svd_values(&inv).unwrap();
        assert!((sv_inv[0] - 1.0 / smin).abs() < 1e-9 * sv_inv[0]);
    }

    fn invert4(a: &Mat<f64>) -> Mat<f64> {
        let n = a.rows();
        let mut aug = Mat::<f64>::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = a[(i, j)];
            }
            aug[(i, n + i)] = 1.0;
        }
        for c in 0..n {
            let mut piv = c;
            for r in c + 1..n {
                if aug[(r, c)].abs() > aug[(piv, c)].abs() {
                    piv = r;
                }
            }
            for j in 0..2 * n {
                let t = aug[(c, j)];
                aug[(c, j)] = aug[(piv, j)];
                aug[(piv, j)] = t;
            }
            let d = aug[(c, c)];
            for j in 0..2 * n {
                aug[(c, j)] /= d;
            }
            for r in 0..n {
                if r != c {
                    let f = aug[(r, c)];
                    for j in 0..2 * n {
                        aug[(r, j)] -= f * aug[(c, j)];
                    }
                }
            }
        }
        Mat::from_fn(n, n, |i, j| aug[(i, n + j)])
    }

    #[test]
    fn real_eigen_count_examples() {
        let d = Mat::from_rows(vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]]);
        assert_eq!(real_eigen_count(&d, 1e-9).unwrap(), 3);
        let rot = Mat::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]);
        assert_eq!(real_eigen_count(&rot, 1e-9).unwrap(), 0);
        let comp = Mat::from_rows(vec![
            vec![2.0, -1.0, 2.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ]);
        assert_eq!(real_eigen_count(&comp, 1e-9).unwrap(), 1);
    }

    #[test]
    fn real_count_parity() {
        for t in 0..30 {
            let a = rademacher_mat(9, 9, 7, t);
            let c = real_eigen_count(&a, 1e-9).unwrap();
            assert_eq!(c % 2, 9 % 2, "trial {t}");
        }
    }

    #[test]
    fn normal_vector_diag_case() {
        // A = diag(2,3), lambda = 0, j = 0: remaining column spans e2, so
        // the normal is +-e1, normalized to e1.
        let a = Mat::from_rows(vec![vec![2.0f64, 0.0], vec![0.0, 3.0]]);
        let v = normal_vector(&a, 0.0, 0).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-14 && v[1].abs() < 1e-14);
    }

    #[test]
    fn normal_vector_residual_and_distance_oracle() {
        let a = rademacher_mat(12, 12, 8, 4);
        let lambda = 0.37;
        for j in [0usize, 5, 11] {
            let v = normal_vector(&a, lambda, j).unwrap();
            assert!((norm2(&v) - 1.0).abs() < 1e-12);
            let sh = a.shift(lambda);
            for k in 0..12 {
                if k != j {
                    assert!(dot(&sh.col(k), &v).abs() < 1e-10, "column {k} residual");
                }
            }
            // distance equals the least-squares residual of projecting X_j
            // onto the other columns (normal-equations oracle at small n)
            let d = dist_col_to_span(&a, lambda, j).unwrap();
            let oracle = lsq_residual(&sh, j);
            assert!((d - oracle).abs() < 1e-8, "d={d} oracle={oracle}");
        }
    }

    fn lsq_residual(sh: &Mat<f64>, j: usize) -> f64 {
        let n = sh.rows();
        let b = sh.without_col(j);
        let x = sh.col(j);
        // solve (B^T B) c = B^T x by Gauss elimination
        let bt = b.transpose();
        let g = bt.matmul(&b);
        let rhs = bt.matvec(&x);
        let mut aug = Mat::<f64>::zeros(n - 1, n);
        for i in 0..n - 1 {
            for k in 0..n - 1 {
                aug[(i, k)] = g[(i, k)];
            }
            aug[(i, n - 1)] = rhs[i];
        }
        for c in 0..n - 1 {
            let mut piv = c;
            for r in c + 1..n - 1 {
                if aug[(r, c)].abs() > aug[(piv, c)].abs() {
                    piv = r;
                }
            }
            for k in 0..n {
                let t = aug[(c, k)];
                aug[(c, k)] = aug[(piv, k)];
                aug[(piv, k)] = t;
            }
            let d = aug[(c, c)];
            for k in 0..n {
                aug[(c, k)] /= d;
            }
            for r in 0..n - 1 {
                if r != c {
                    let f = aug[(r, c)];
                    for k in 0..n {
                        aug[(r, k)] -= f * aug[(c, k)];
                    }
                }
            }
        }
        let coef: Vec<f64> = (0..n - 1).map(|i| aug[(i, n - 1)]).collect();
        let proj = b.matvec(&coef);
        let resid: Vec<f64> = x.iter().zip(&proj).map(|(a, b)| a - b).collect();
        norm2(&resid)
    }

    #[test]
    fn normal_vector_orthogonal_columns() {
        // orthogonal matrix: the normal at column j is that column itself
        let c = 0.6;
        let s = 0.8;
        let q: Mat<f64> = Mat::from_rows(vec![vec![c, -s, 0.0], vec![s, c, 0.0], vec![0.0, 0.0, 1.0]]);
        let v = normal_vector(&q, 0.0, 1).unwrap();
        let col = q.col(1);
        let align = dot(&v, &col).abs();
        assert!((align - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_beta_identical_and_orthogonal() {
        let a = rademacher_mat(10, 10, 9, 5);
        let (alpha, beta) = overlap_beta(&a, 0.5, 0.5, 2).unwrap();
        assert!((alpha.abs() - 1.0).abs() < 1e-12);
        assert!(beta < 1e-6);
        let (alpha2, beta2) = overlap_beta(&a, 0.0, 2.0, 2).unwrap();
        assert!((alpha2 * alpha2 + beta2 * beta2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interlacing_examples() {
        let d = Mat::from_rows(vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]]);
        let v = interlacing_check(&d, 1).unwrap();
        assert!(v <= 1e-12, "violation {v}");
        // L_A of a random 4x4
        let law = Law::Entry(EntryLaw::rademacher());
        let spec = EnsembleSpec::new(Family::BlockLa { n: 4 }, law).unwrap();
        let s = sample_trial::<f64>(&spec, 11, 0).unwrap();
        let la = s.real().unwrap();
        for j in 0..8 {
            let v = interlacing_check(la, j).unwrap();
            assert!(v <= 1e-10, "j={j} violation {v}");
        }
    }

    #[test]
    fn fact_eigen_inner_product_bound() {
        // |<v, X^{(j)}>| <= |lambda - lambda'| / |u_j| over all eigenpair
        // combinations of a symmetric matrix and its principal minor.
        for t in 0..10 {
            let b = rademacher_mat(8, 8, 13, t);
            let m = Mat::from_fn(8, 8, |i, j| b[(i, j)] + b[(j, i)]);
            let full = sym_eigen(&m).unwrap();
            for j in [0usize, 3, 7] {
                let minor = sym_eigen(&m.principal_minor(j)).unwrap();
                let xj: Vec<f64> =
                    (0..8).filter(|&i| i != j).map(|i| m[(i, j)]).collect();
                for a in 0..8 {
                    let uj = full.vectors[(j, a)];
                    if uj.abs() < 1e-10 {
                        continue;
                    }
                    for bidx in 0..7 {
                        let v = minor.vectors.col(bidx);
                        let lhs = dot(&v, &xj).abs();
                        let rhs = (full.values[a] - minor.values[bidx]).abs() / uj.abs();
                        assert!(lhs <= rhs + 1e-9, "lhs={lhs} rhs={rhs}");
                    }
                }
            }
        }
    }

    #[test]
    fn delocalization_forced_vectors() {
        let n = 16;
        let uniform: Vec<f64> = vec![1.0 / (n as f64).sqrt(); n];
        let p = profile_of_vector(&uniform, n, &[0.5, 1.0]);
        assert_eq!(p.counts[0].1, n);
        assert_eq!(p.counts[1].1, n);
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        let p = profile_of_vector(&e1, n, &[1.0, (n as f64).sqrt()]);
        assert_eq!(p.counts[0].1, 1);
        assert_eq!(p.counts[1].1, 1);
    }

    #[test]
    fn fast_sigma_min_agrees_with_jacobi_on_shifts() {
        for t in 0..20 {
            let a = rademacher_mat(15, 15, 17, t);
            for lambda in [0.0, 1.0, (15f64).sqrt()] {
                let slow = sigma_min_shifted(&a, lambda).unwrap();
                let fast = sigma_min_shifted_fast(&a, lambda).unwrap();
                let sv = svd_values(&a.shift(lambda)).unwrap();
                let cluster = sv[13] - sv[14];
                assert!(
                    (fast - slow).abs() <= 1e-8 * sv[0] + cluster,
                    "t={t} lambda={lambda} fast={fast} slow={slow}"
                );
            }
        }
    }

    #[test]
    fn complex_sigma_min_via_embedding() {
        // G = diag(i, 2): sigma_min(G - i I) = 0 exactly, sigma_min(G) = 1.
        let g = Mat::from_rows(vec![
            vec![Complex::new(0.0f64, 1.0), Complex::new(0.0, 0.0)],
            vec![Complex::new(0.0, 0.0), Complex::new(2.0, 0.0)],
        ]);
        let s0 = sigma_min_shifted_complex_fast(&g, Complex::new(0.0, 1.0)).unwrap();
        assert!(s0 < 1e-12);
        let s1 = sigma_min_shifted_complex_fast(&g, Complex::new(0.0, 0.0)).unwrap();
        assert!((s1 - 1.0).abs() < 1e-10);
    }
}
