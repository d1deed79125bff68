//! Samplers for the matrix families under study: square/rectangular/complex
//! i.i.d. matrices, the symmetric block embeddings, the zeroed-out matrix,
//! the shifted linearization P_A and its truncated companion, and the
//! complex analogues.
//!
//! Structural zeros are written exactly and never consume randomness, so
//! ensemble variants sharing `(master seed, trial)` see aligned entry
//! streams. Paired experiments (one sample, two shifts) rely on this.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::distributions::Law;
use crate::mat::Mat;
use crate::rng::{stream, Stream};
use crate::scalar::Real;

#[derive(Debug, Clone, thiserror::Error)]
pub enum EnsembleError {
    #[error("iid_rect needs N_rows >= n, got {n_rows} x {n}")]
    RectTooWide { n_rows: usize, n: usize },
    #[error("this family needs a lazy law")]
    NeedsLazyLaw,
    #[error("operation needs a square matrix")]
    NotSquare,
    #[error("operation needs a real matrix")]
    NotReal,
    #[error("anchor set indices out of range")]
    BadAnchor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    IidSquare { n: usize },
    IidRect { n_rows: usize, n: usize },
    IidComplex { n: usize },
    BlockLa { n: usize },
    BlockCurlyLa { n: usize },
    /// n x n matrix keeping a_ij only when exactly one of i, j lies in the
    /// anchor set D (0-based). Callers pass D already normalized; see
    /// [`normalize_anchor_sets`].
    ZeroedM { n: usize, anchor: Vec<usize> },
    LinearizedP { n: usize, lambda1: f64, lambda2: f64, lambda_hat: f64 },
    TruncatedMUnderline { n: usize },
    ComplexPg { n: usize, z1: [f64; 2], z2: [f64; 2], lambda_hat: [f64; 2] },
    ComplexMg { n: usize },
}

impl Family {
    /// The base dimension n of the family (not the output matrix size).
    pub fn base_n(&self) -> usize {
        match self {
            Family::IidSquare { n }
            | Family::IidRect { n, .. }
            | Family::IidComplex { n }
            | Family::BlockLa { n }
            | Family::BlockCurlyLa { n }
            | Family::ZeroedM { n, .. }
            | Family::LinearizedP { n, .. }
            | Family::TruncatedMUnderline { n }
            | Family::ComplexPg { n, .. }
            | Family::ComplexMg { n } => *n,
        }
    }

    pub fn output_dims(&self) -> (usize, usize) {
        match self {
            Family::IidSquare { n } | Family::IidComplex { n } => (*n, *n),
            Family::IidRect { n_rows, n } => (*n_rows, *n),
            Family::BlockLa { n } => (2 * n, 2 * n),
            Family::BlockCurlyLa { n } => (2 * n - 1, 2 * n - 1),
            Family::ZeroedM { n, .. } => (*n, *n),
            Family::LinearizedP { n, .. }
            | Family::TruncatedMUnderline { n }
            | Family::ComplexPg { n, .. }
            | Family::ComplexMg { n } => (2 * n + 1, 2 * n + 1),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, Family::IidComplex { .. } | Family::ComplexPg { .. } | Family::ComplexMg { .. })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSpec {
    #[serde(flatten)]
    pub family: Family,
    pub law: Law,
    /// Aspect-ratio cap for rectangular samples; wider samples warn.
    #[serde(default = "default_aspect")]
    pub aspect_bound: f64,
}

fn default_aspect() -> f64 {
    2.0
}

impl EnsembleSpec {
    pub fn new(family: Family, law: Law) -> Result<Self, EnsembleError> {
        let spec = EnsembleSpec { family, law, aspect_bound: default_aspect() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<Vec<String>, EnsembleError> {
        let mut warnings = vec![];
        match &self.family {
            Family::IidRect { n_rows, n } => {
                if n_rows < n {
                    return Err(EnsembleError::RectTooWide { n_rows: *n_rows, n: *n });
                }
                if (*n_rows as f64) > self.aspect_bound * (*n as f64) {
                    warnings.push(format!(
                        "aspect {} exceeds configured bound {}",
                        *n_rows as f64 / *n as f64,
                        self.aspect_bound
                    ));
                }
            }
            Family::ZeroedM { n, anchor } => {
                if anchor.iter().any(|i| i >= n) {
                    return Err(EnsembleError::BadAnchor);
                }
            }
            Family::TruncatedMUnderline { .. } | Family::ComplexMg { .. } => {
                if !matches!(self.law, Law::Lazy(_)) {
                    return Err(EnsembleError::NeedsLazyLaw);
                }
            }
            Family::LinearizedP { n, lambda1, lambda2, .. } => {
                let cap = 4.0 * (*n as f64).sqrt();
                for l in [lambda1, lambda2] {
                    if l.abs() > cap {
                        warnings.push(format!("shift {l} outside [-4 sqrt(n), 4 sqrt(n)]"));
                    }
                }
            }
            _ => {}
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone)]
pub enum MatrixData<F> {
    Real(Mat<F>),
    Complex(Mat<Complex<F>>),
}

#[derive(Debug, Clone)]
pub struct MatrixSample<F> {
    pub data: MatrixData<F>,
    pub spec: EnsembleSpec,
    /// (master seed, trial index) provenance when sampled via [`sample_trial`].
    pub seed_path: Option<(u64, u64)>,
    pub warnings: Vec<String>,
}

impl<F: Real> MatrixSample<F> {
    pub fn real(&self) -> Result<&Mat<F>, EnsembleError> {
        match &self.data {
            MatrixData::Real(m) => Ok(m),
            MatrixData::Complex(_) => Err(EnsembleError::NotReal),
        }
    }

    pub fn complex(&self) -> Result<&Mat<Complex<F>>, EnsembleError> {
        match &self.data {
            MatrixData::Complex(m) => Ok(m),
            MatrixData::Real(_) => Err(EnsembleError::NotReal),
        }
    }
}

/// Draw one sample from the family, consuming randomness only for free
/// entries, in row-major order of the free positions.
pub fn sample<F: Real>(spec: &EnsembleSpec, rng: &mut Stream) -> Result<MatrixSample<F>, EnsembleError> {
    let warnings = spec.validate()?;
    let law = &spec.law;
    let data = match &spec.family {
        Family::IidSquare { n } => MatrixData::Real(sample_dense::<F>(*n, *n, law, rng)),
        Family::IidRect { n_rows, n } => MatrixData::Real(sample_dense::<F>(*n_rows, *n, law, rng)),
        Family::IidComplex { n } => {
            let m = Mat::from_fn(*n, *n, |_, _| Complex::<F>::new(F::zero(), F::zero()));
            let mut m = m;
            for i in 0..*n {
                for j in 0..*n {
                    m[(i, j)] = law.sample_complex(rng);
                }
            }
            MatrixData::Complex(m)
        }
        Family::BlockLa { n } => {
            let a = sample_dense::<F>(*n, *n, law, rng);
            let mut out = Mat::zeros(2 * n, 2 * n);
            for i in 0..*n {
                for j in 0..*n {
                    out[(i, n + j)] = a[(i, j)];
                    out[(n + j, i)] = a[(i, j)];
                }
            }
            MatrixData::Real(out)
        }
        Family::BlockCurlyLa { n } => {
            // off-diagonal blocks are the (n-1) x n matrix with the first
            // row of A removed, and its transpose
            let b = sample_dense::<F>(*n - 1, *n, law, rng);
            let m = 2 * n - 1;
            let mut out = Mat::zeros(m, m);
            for i in 0..(*n - 1) {
                for j in 0..*n {
                    out[(i, (n - 1) + j)] = b[(i, j)];
                    out[((n - 1) + j, i)] = b[(i, j)];
                }
            }
            MatrixData::Real(out)
        }
        Family::ZeroedM { n, anchor } => {
            let in_d = |k: usize| anchor.contains(&k);
            let mut out = Mat::zeros(*n, *n);
            for i in 0..*n {
                for j in 0..*n {
                    if in_d(i) != in_d(j) {
                        out[(i, j)] = law.sample(rng);
                    }
                }
            }
            MatrixData::Real(out)
        }
        Family::LinearizedP { n, lambda1, lambda2, lambda_hat } => {
            let a = sample_first_row_zeroed::<F>(*n, law, rng);
            MatrixData::Real(assemble_linearized(
                &a,
                F::of_f64(*lambda1),
                F::of_f64(*lambda2),
                F::of_f64(*lambda_hat),
            ))
        }
        Family::TruncatedMUnderline { n } => {
            let a = sample_first_row_zeroed::<F>(*n, law, rng);
            MatrixData::Real(assemble_truncated(&a))
        }
        Family::ComplexPg { n, z1, z2, lambda_hat } => {
            let g = sample_first_row_zeroed_complex::<F>(*n, law, rng);
            MatrixData::Complex(assemble_linearized_c(
                &g,
                Complex::new(F::of_f64(z1[0]), F::of_f64(z1[1])),
                Complex::new(F::of_f64(z2[0]), F::of_f64(z2[1])),
                Complex::new(F::of_f64(lambda_hat[0]), F::of_f64(lambda_hat[1])),
            ))
        }
        Family::ComplexMg { n } => {
            let g = sample_first_row_zeroed_complex::<F>(*n, law, rng);
            MatrixData::Complex(assemble_truncated_c(&g))
        }
    };
    Ok(MatrixSample { data, spec: spec.clone(), seed_path: None, warnings })
}

/// Sample with (master seed, trial) provenance, tag "ensembles".
pub fn sample_trial<F: Real>(
    spec: &EnsembleSpec,
    master: u64,
    trial: u64,
) -> Result<MatrixSample<F>, EnsembleError> {
    let mut rng = stream(master, "ensembles", trial);
    let mut s = sample::<F>(spec, &mut rng)?;
    s.seed_path = Some((master, trial));
    Ok(s)
}

fn sample_dense<F: Real>(rows: usize, cols: usize, law: &Law, rng: &mut Stream) -> Mat<F> {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = law.sample(rng);
        }
    }
    m
}

/// n x n matrix with i.i.d. entries in rows 2..n and first row exactly zero.
fn sample_first_row_zeroed<F: Real>(n: usize, law: &Law, rng: &mut Stream) -> Mat<F> {
    let mut m = Mat::zeros(n, n);
    for i in 1..n {
        for j in 0..n {
            m[(i, j)] = law.sample(rng);
        }
    }
    m
}

fn sample_first_row_zeroed_complex<F: Real>(n: usize, law: &Law, rng: &mut Stream) -> Mat<Complex<F>> {
    let mut m = Mat::from_fn(n, n, |_, _| Complex::new(F::zero(), F::zero()));
    for i in 1..n {
        for j in 0..n {
            m[(i, j)] = law.sample_complex(rng);
        }
    }
    m
}

/// The (2n+1) x (2n+1) shifted linearization. Block layout (sizes 1, n, n):
/// zero first row; middle block row `[-lhat I, A1 - l2 I1]`; bottom block
/// row `[A_col1 - l1 e1, A1 - l1 I1, 0]`, where A1 is A with the first row
/// zeroed, I1 the identity with the first row zeroed, and `A_col1` the first
/// column of A1. The same A1 appears in both off-diagonal blocks.
fn assemble_linearized<F: Real>(a1: &Mat<F>, l1: F, l2: F, lhat: F) -> Mat<F> {
    let n = a1.rows();
    let m = 2 * n + 1;
    let mut p = Mat::zeros(m, m);
    for i in 0..n {
        for j in 0..n {
            let i1 = if i == 0 { F::zero() } else if i == j { F::one() } else { F::zero() };
            p[(1 + i, 1 + n + j)] = a1[(i, j)] - l2 * i1;
            p[(1 + n + i, 1 + j)] = a1[(i, j)] - l1 * i1;
        }
        p[(1 + i, 1 + i)] = -lhat;
        p[(1 + n + i, 0)] = a1[(i, 0)] - if i == 0 { l1 } else { F::zero() };
    }
    p
}

fn assemble_truncated<F: Real>(a1: &Mat<F>) -> Mat<F> {
    let n = a1.rows();
    let m = 2 * n + 1;
    let mut p = Mat::zeros(m, m);
    for i in 0..n {
        for j in 0..n {
            p[(1 + i, 1 + n + j)] = a1[(i, j)];
            p[(1 + n + i, 1 + j)] = a1[(i, j)];
        }
        p[(1 + n + i, 0)] = a1[(i, 0)];
    }
    p
}

fn assemble_linearized_c<F: Real>(
    g1: &Mat<Complex<F>>,
    z1: Complex<F>,
    z2: Complex<F>,
    lhat: Complex<F>,
) -> Mat<Complex<F>> {
    let n = g1.rows();
    let m = 2 * n + 1;
    let zero = Complex::new(F::zero(), F::zero());
    let one = Complex::new(F::one(), F::zero());
    let mut p = Mat::from_fn(m, m, |_, _| zero);
    for i in 0..n {
        for j in 0..n {
            let i1 = if i == 0 || i != j { zero } else { one };
            p[(1 + i, 1 + n + j)] = g1[(i, j)] - z2 * i1;
            p[(1 + n + i, 1 + j)] = g1[(i, j)] - z1 * i1;
        }
        p[(1 + i, 1 + i)] = -lhat;
        p[(1 + n + i, 0)] = g1[(i, 0)] - if i == 0 { z1 } else { zero };
    }
    p
}

fn assemble_truncated_c<F: Real>(g1: &Mat<Complex<F>>) -> Mat<Complex<F>> {
    let n = g1.rows();
    let m = 2 * n + 1;
    let zero = Complex::new(F::zero(), F::zero());
    let mut p = Mat::from_fn(m, m, |_, _| zero);
    for i in 0..n {
        for j in 0..n {
            p[(1 + i, 1 + n + j)] = g1[(i, j)];
            p[(1 + n + i, 1 + j)] = g1[(i, j)];
        }
        p[(1 + n + i, 0)] = g1[(i, 0)];
    }
    p
}

/// A - lambda I for a real square sample; the sample is untouched.
pub fn shifted<F: Real>(sample: &MatrixSample<F>, lambda: F) -> Result<Mat<F>, EnsembleError> {
    let m = sample.real()?;
    if !m.is_square() {
        return Err(EnsembleError::NotSquare);
    }
    Ok(m.shift(lambda))
}

/// D(D1, D2) = D1 union (D2 - (n-1)), 0-based, sorted and deduplicated.
/// D1 lives in rows [0, n-2] of the (2n-1)-vector, D2 in [n-1, 2n-2]; the
/// index 2n-2 is dropped if present, matching the convention that the last
/// coordinate never anchors.
pub fn normalize_anchor_sets(d1: &[usize], d2: &[usize], n: usize) -> Vec<usize> {
    let mut d: Vec<usize> = d1.to_vec();
    for &i in d2 {
        if i == 2 * n - 2 {
            continue;
        }
        d.push(i - (n - 1));
    }
    d.sort_unstable();
    d.dedup();
    d
}

/// Permutation of 0..n that relabels the anchor set onto an initial segment
/// {0, .., |D|-1}; `perm[new_index] = old_index`.
pub fn anchor_relabeling(d: &[usize], n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = d.to_vec();
    perm.sort_unstable();
    let in_d: std::collections::HashSet<usize> = perm.iter().copied().collect();
    for i in 0..n {
        if !in_d.contains(&i) {
            perm.push(i);
        }
    }
    perm
}

// ---------------------------------------------------------------------------
// matrix container I/O: magic, dtype, rows, cols, row-major payload
// ---------------------------------------------------------------------------

const MAGIC: &[u8; 4] = b"RMLM";

#[derive(Debug, thiserror::Error)]
pub enum ContainerError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic or dtype")]
    Format,
}

pub fn write_matrix_binary<W: std::io::Write>(w: &mut W, data: &MatrixData<f64>) -> Result<(), ContainerError> {
    match data {
        MatrixData::Real(m) => {
            w.write_all(MAGIC)?;
            w.write_all(&[1u8])?;
            w.write_all(&(m.rows() as u64).to_le_bytes())?;
            w.write_all(&(m.cols() as u64).to_le_bytes())?;
            for x in m.data() {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        MatrixData::Complex(m) => {
            w.write_all(MAGIC)?;
            w.write_all(&[2u8])?;
            w.write_all(&(m.rows() as u64).to_le_bytes())?;
            w.write_all(&(m.cols() as u64).to_le_bytes())?;
            for z in m.data() {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

pub fn read_matrix_binary<R: std::io::Read>(r: &mut R) -> Result<MatrixData<f64>, ContainerError> {
    let mut head = [0u8; 5];
    r.read_exact(&mut head)?;
    if &head[0..4] != MAGIC {
        return Err(ContainerError::Format);
    }
    let mut dims = [0u8; 16];
    r.read_exact(&mut dims)?;
    let rows = u64::from_le_bytes(dims[0..8].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(dims[8..16].try_into().unwrap()) as usize;
    let f64_from = |r: &mut R| -> Result<f64, ContainerError> {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        Ok(f64::from_le_bytes(b))
    };
    match head[4] {
        1 => {
            let mut m = Mat::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m[(i, j)] = f64_from(r)?;
                }
            }
            Ok(MatrixData::Real(m))
        }
        2 => {
            let mut m = Mat::from_fn(rows, cols, |_, _| Complex::new(0.0, 0.0));
            for i in 0..rows {
                for j in 0..cols {
                    let re = f64_from(r)?;
                    let im = f64_from(r)?;
                    m[(i, j)] = Complex::new(re, im);
                }
            }
            Ok(MatrixData::Complex(m))
        }
        _ => Err(ContainerError::Format),
    }
}

pub fn write_matrix_csv<W: std::io::Write>(w: &mut W, data: &MatrixData<f64>) -> Result<(), ContainerError> {
    match data {
        MatrixData::Real(m) => {
            for i in 0..m.rows() {
                let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:.17e}")).collect();
                writeln!(w, "{}", row.join(","))?;
            }
        }
        MatrixData::Complex(m) => {
            for i in 0..m.rows() {
                let row: Vec<String> =
                    m.row(i).iter().map(|z| format!("{:.17e}{:+.17e}i", z.re, z.im)).collect();
                writeln!(w, "{}", row.join(","))?;
            }
        }
    }
    Ok(())
}
