//! Minimal dense row-major matrix used by every module.
//!
//! Nothing fancy: the experiments stay at desk scale (n <= 500), so a flat
//! `Vec` with explicit indexing beats pulling in a full linear algebra stack
//! and keeps the kernels generic over the scalar type.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::Real;

/// Dense row-major matrix over any scalar-ish element (real or complex).
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy + Zero> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Principal submatrix with row and column `j` removed.
    pub fn principal_minor(&self, j: usize) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        Mat::from_fn(n - 1, n - 1, |r, c| {
            let rr = if r < j { r } else { r + 1 };
            let cc = if c < j { c } else { c + 1 };
            self[(rr, cc)]
        })
    }

    /// Copy with column `j` removed.
    pub fn without_col(&self, j: usize) -> Self {
        Mat::from_fn(self.rows, self.cols - 1, |r, c| {
            let cc = if c < j { c } else { c + 1 };
            self[(r, cc)]
        })
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Real> Mat<F> {
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn matvec(&self, x: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc = F::zero();
                for (a, b) in row.iter().zip(x) {
                    acc += *a * *b;
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == F::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// A - lambda I on a square matrix.
    pub fn shift(&self, lambda: F) -> Mat<F> {
        assert!(self.is_square(), "shift needs a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] -= lambda;
        }
        out
    }

    pub fn frobenius(&self) -> F {
        self.data.iter().map(|x| *x * *x).sum::<F>().sqrt()
    }

    pub fn has_non_finite(&self) -> bool {
        self.data.iter().any(|x| !x.is_finite())
    }
}

impl<F: Real> Mat<Complex<F>> {
    pub fn identity_c(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(F::one(), F::zero());
        }
        m
    }

    pub fn shift_c(&self, z: Complex<F>) -> Mat<Complex<F>> {
        assert!(self.is_square(), "shift needs a square matrix");
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] = out[(i, i)] - z;
        }
        out
    }

    /// Real 2n x 2n embedding [[Re, -Im], [Im, Re]].
    ///
    /// Multiplication by the complex matrix in the coordinates
    /// `(Re x, Im x)`; every singular value of the complex matrix appears
    /// twice in the embedding, so sigma_min carries over exactly.
    pub fn real_embedding(&self) -> Mat<F> {
        let (m, n) = (self.rows, self.cols);
        Mat::from_fn(2 * m, 2 * n, |i, j| {
            let z = self[(i % m, j % n)];
            match (i >= m, j >= n) {
                (false, false) => z.re,
                (false, true) => -z.im,
                (true, false) => z.im,
                (true, true) => z.re,
            }
        })
    }

    pub fn has_non_finite_c(&self) -> bool {
        self.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
    }
}

pub fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        acc += *x * *y;
    }
    acc
}

pub fn norm2<F: Real>(a: &[F]) -> F {
    dot(a, a).sqrt()
}

pub fn scale_in_place<F: Real>(a: &mut [F], c: F) {
    for x in a {
        *x *= c;
    }
}

/// Hat embedding of a complex vector: (Re v_1..Re v_n, Im v_1..Im v_n).
pub fn hat<F: Real>(v: &[Complex<F>]) -> Vec<F> {
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}
