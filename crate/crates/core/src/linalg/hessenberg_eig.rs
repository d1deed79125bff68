//! Eigenvalues of a real nonsymmetric matrix.
//!
//! Householder reduction to Hessenberg form followed by the Francis
//! double-shift QR iteration, eigenvalues only. This is the classical
//! EISPACK/Jama `orthes` + `hqr` pair; complex eigenvalues come out as exact
//! conjugate pairs from the 2x2 block resolution, so the real/complex split
//! is pairing-consistent by construction.

use num_complex::Complex;

use crate::mat::Mat;
use crate::scalar::Real;

#[derive(Debug, Clone, thiserror::Error)]
pub enum NonSymEigenError {
    #[error("matrix contains NaN or Inf")]
    NonFinite,
    #[error("QR iteration failed to converge")]
    NoConvergence,
}

/// All eigenvalues of a real square matrix, unordered.
pub fn eigenvalues<F: Real>(a: &Mat<F>) -> Result<Vec<Complex<F>>, NonSymEigenError> {
    if a.has_non_finite() {
        return Err(NonSymEigenError::NonFinite);
    }
    assert!(a.is_square(), "eigenvalues need a square matrix");
    let nn = a.rows();
    if nn == 0 {
        return Ok(vec![]);
    }
    let mut h = a.clone();
    hessenberg(&mut h);
    hqr(&mut h)
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg<F: Real>(h: &mut Mat<F>) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let (low, high) = (0usize, n - 1);
    let mut ort = vec![F::zero(); n];
    for m in (low + 1)..high {
        let mut scale = F::zero();
        for i in m..=high {
            scale += h[(i, m - 1)].abs();
        }
        if scale == F::zero() {
            continue;
        }
        let mut hh = F::zero();
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > F::zero() {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;
        // Apply the Householder similarity transform H <- P H P.
        for j in m..n {
            let mut f = F::zero();
            for i in (m..=high).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hh;
            for i in m..=high {
                h[(i, j)] = h[(i, j)] - f * ort[i];
            }
        }
        for i in 0..=high {
            let mut f = F::zero();
            for j in (m..=high).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hh;
            for j in m..=high {
                h[(i, j)] = h[(i, j)] - f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
        for i in (m + 1)..=high {
            h[(i, m - 1)] = F::zero();
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
#[allow(clippy::too_many_lines)]
fn hqr<F: Real>(h: &mut Mat<F>) -> Result<Vec<Complex<F>>, NonSymEigenError> {
    let nn = h.rows();
    let mut d = vec![F::zero(); nn];
    let mut e = vec![F::zero(); nn];
    let low = 0isize;
    let high = nn as isize - 1;
    let eps = F::epsilon();
    let two = F::of_f64(2.0);

    let mut exshift = F::zero();
    let (mut p, mut q, mut r) = (F::zero(), F::zero(), F::zero());
    #[allow(unused_assignments)]
    let (mut s, mut z) = (F::zero(), F::zero());
    let (mut x, mut y, mut w);

    let mut norm = F::zero();
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }
    if norm == F::zero() {
        return Ok(vec![Complex::new(F::zero(), F::zero()); nn]);
    }

    let mut n = high;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    let hm = |h: &Mat<F>, i: isize, j: isize| h[(i as usize, j as usize)];

    while n >= low {
        // Look for a single small subdiagonal element.
        let mut l = n;
        while l > low {
            s = hm(h, l - 1, l - 1).abs() + hm(h, l, l).abs();
            if s == F::zero() {
                s = norm;
            }
            if hm(h, l, l - 1).abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // One root found.
            let v = hm(h, n, n) + exshift;
            h[(n as usize, n as usize)] = v;
            d[n as usize] = v;
            e[n as usize] = F::zero();
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            // Two roots found.
            w = hm(h, n, n - 1) * hm(h, n - 1, n);
            p = (hm(h, n - 1, n - 1) - hm(h, n, n)) / two;
            q = p * p + w;
            z = q.abs().sqrt();
            let v = hm(h, n, n) + exshift;
            h[(n as usize, n as usize)] = v;
            let v1 = hm(h, n - 1, n - 1) + exshift;
            h[((n - 1) as usize, (n - 1) as usize)] = v1;
            x = v;
            if q >= F::zero() {
                // Real pair.
                z = if p >= F::zero() { p + z } else { p - z };
                d[(n - 1) as usize] = x + z;
                d[n as usize] = d[(n - 1) as usize];
                if z != F::zero() {
                    d[n as usize] = x - w / z;
                }
                e[(n - 1) as usize] = F::zero();
                e[n as usize] = F::zero();
            } else {
                // Complex pair.
                d[(n - 1) as usize] = x + p;
                d[n as usize] = x + p;
                e[(n - 1) as usize] = z;
                e[n as usize] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet; do a QR step.
            x = hm(h, n, n);
            y = F::zero();
            w = F::zero();
            if l < n {
                y = hm(h, n - 1, n - 1);
                w = hm(h, n, n - 1) * hm(h, n - 1, n);
            }
            if iter == 10 || iter == 20 {
                // Exceptional shift.
                exshift += x;
                for i in low..=n {
                    let v = hm(h, i, i) - x;
                    h[(i as usize, i as usize)] = v;
                }
                s = hm(h, n, n - 1).abs() + hm(h, n - 1, n - 2).abs();
                x = F::of_f64(0.75) * s;
                y = x;
                w = F::of_f64(-0.4375) * s * s;
            }
            iter += 1;
            total_iter += 1;
            if iter > 60 || total_iter > 60 * nn {
                return Err(NonSymEigenError::NoConvergence);
            }

            // Look for two consecutive small subdiagonal elements.
            let mut m = n - 2;
            while m >= l {
                z = hm(h, m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / hm(h, m + 1, m) + hm(h, m, m + 1);
                q = hm(h, m + 1, m + 1) - z - r - s;
                r = hm(h, m + 2, m + 1);
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if hm(h, m, m - 1).abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (hm(h, m - 1, m - 1).abs() + z.abs() + hm(h, m + 1, m + 1).abs()))
                {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=n {
                h[(i as usize, (i - 2) as usize)] = F::zero();
                if i > m + 2 {
                    h[(i as usize, (i - 3) as usize)] = F::zero();
                }
            }

            // Double QR step on rows l..n, columns m..n.
            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = hm(h, k, k - 1);
                    q = hm(h, k + 1, k - 1);
                    r = if notlast { hm(h, k + 2, k - 1) } else { F::zero() };
                    x = p.abs() + q.abs() + r.abs();
                    if x == F::zero() {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < F::zero() {
                    s = -s;
                }
                if s != F::zero() {
                    if k != m {
                        h[(k as usize, (k - 1) as usize)] = -s * x;
                    } else if l != m {
                        let v = -hm(h, k, k - 1);
                        h[(k as usize, (k - 1) as usize)] = v;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in (k as usize)..nn {
                        let mut pp = hm(h, k, j as isize) + q * hm(h, k + 1, j as isize);
                        if notlast {
                            pp += r * hm(h, k + 2, j as isize);
                            let v = hm(h, k + 2, j as isize) - pp * z;
                            h[((k + 2) as usize, j)] = v;
                        }
                        let v0 = hm(h, k, j as isize) - pp * x;
                        h[(k as usize, j)] = v0;
                        let v1 = hm(h, k + 1, j as isize) - pp * y;
                        h[((k + 1) as usize, j)] = v1;
                    }
                    let imax = if n < k + 3 { n } else { k + 3 };
                    for i in 0..=(imax as usize) {
                        let mut pp = x * hm(h, i as isize, k) + y * hm(h, i as isize, k + 1);
                        if notlast {
                            pp += z * hm(h, i as isize, k + 2);
                            let v = hm(h, i as isize, k + 2) - pp * r;
                            h[(i, (k + 2) as usize)] = v;
                        }
                        let v0 = hm(h, i as isize, k) - pp;
                        h[(i, k as usize)] = v0;
                        let v1 = hm(h, i as isize, k + 1) - pp * q;
                        h[(i, (k + 1) as usize)] = v1;
                    }
                }
            }
        }
    }

    Ok(d.into_iter().zip(e).map(|(re, im)| Complex::new(re, im)).collect())
}
