//! Scalar entry laws and their symmetrized/truncated/lazy transforms.
//!
//! An [`EntryLaw`] is a mean-0 variance-1 law for matrix entries. A
//! [`LazyLaw`] wraps a base law xi with the transform
//! `xi_nu = 1{|xi - xi'| in I_B} (xi - xi') Z_nu`, where `xi'` is an
//! independent copy, `I_B = (1, 16 B^2)` and `Z_nu` is Bernoulli(nu). The
//! retained-mass probability `p = P(|xi - xi'| in I_B)` is computed exactly
//! for discrete bases by enumerating the difference atoms.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::rng::Stream;
use crate::scalar::Real;

#[derive(Debug, Clone, thiserror::Error)]
pub enum LawError {
    #[error("custom_discrete probabilities sum to {0}, expected 1 within 1e-12")]
    ProbSum(f64),
    #[error("law has mean {0}, expected 0 within 1e-12")]
    Mean(f64),
    #[error("law has variance {0}, expected 1 within 1e-12")]
    Variance(f64),
    #[error("uniform_pm_k needs k >= 1")]
    BadK,
    #[error("laziness nu must lie in (0,1), got {0}")]
    BadNu(f64),
    #[error("subgaussian bound B must be positive, got {0}")]
    BadBound(f64),
    #[error("retention probability p={p} violates the guarantee p >= 2^-7 B^-4 = {floor}")]
    RetentionTooSmall { p: f64, floor: f64 },
    #[error("operation needs a discrete base law")]
    NeedsDiscrete,
    #[error("sandwich check requires nu <= 1/4, got {0}")]
    NuTooLarge(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LawKind {
    Rademacher,
    Gaussian,
    UniformPmK(u32),
    CustomDiscrete(Vec<(f64, f64)>),
}

/// A validated mean-0 variance-1 scalar law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryLaw {
    kind: LawKind,
    /// If set, samples are xi + i xi' with independent copies.
    pub complexified: bool,
}

impl EntryLaw {
    pub fn rademacher() -> Self {
        EntryLaw { kind: LawKind::Rademacher, complexified: false }
    }

    pub fn gaussian() -> Self {
        EntryLaw { kind: LawKind::Gaussian, complexified: false }
    }

    /// Uniform on the 2k atoms {+-j/s : j=1..k}, scaled to unit variance.
    pub fn uniform_pm_k(k: u32) -> Result<Self, LawError> {
        if k == 0 {
            return Err(LawError::BadK);
        }
        Ok(EntryLaw { kind: LawKind::UniformPmK(k), complexified: false })
    }

    /// Finite atom law; moments and probability mass are validated.
    pub fn custom_discrete(atoms: Vec<(f64, f64)>) -> Result<Self, LawError> {
        let psum: f64 = atoms.iter().map(|(_, p)| p).sum();
        if (psum - 1.0).abs() > 1e-12 {
            return Err(LawError::ProbSum(psum));
        }
        let mean: f64 = atoms.iter().map(|(v, p)| v * p).sum();
        if mean.abs() > 1e-12 {
            return Err(LawError::Mean(mean));
        }
        let var: f64 = atoms.iter().map(|(v, p)| v * v * p).sum::<f64>() - mean * mean;
        if (var - 1.0).abs() > 1e-12 {
            return Err(LawError::Variance(var));
        }
        Ok(EntryLaw { kind: LawKind::CustomDiscrete(atoms), complexified: false })
    }

    /// Test hook: a discrete law with arbitrary moments (probabilities still
    /// must sum to 1). Lets experiments force deterministic matrices, e.g. an
    /// all-ones sample, without weakening the validated constructor.
    pub fn custom_discrete_unnormalized(atoms: Vec<(f64, f64)>) -> Result<Self, LawError> {
        let psum: f64 = atoms.iter().map(|(_, p)| p).sum();
        if (psum - 1.0).abs() > 1e-12 {
            return Err(LawError::ProbSum(psum));
        }
        Ok(EntryLaw { kind: LawKind::CustomDiscrete(atoms), complexified: false })
    }

    pub fn complexified(mut self) -> Self {
        self.complexified = true;
        self
    }

    pub fn kind(&self) -> &LawKind {
        &self.kind
    }

    /// Default subgaussian bound used when a `LazyLaw` does not override it.
    pub fn default_subgaussian_bound(&self) -> f64 {
        match self.kind {
            LawKind::Rademacher | LawKind::Gaussian => 1.0,
            // Bounded laws: |xi| <= max atom; psi_2 is at most that.
            LawKind::UniformPmK(_) | LawKind::CustomDiscrete(_) => self
                .atoms()
                .map(|a| a.iter().map(|(v, _)| v.abs()).fold(1.0f64, f64::max))
                .unwrap_or(1.0),
        }
    }

    /// Atom list for discrete kinds, None for gaussian.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match &self.kind {
            LawKind::Rademacher => Some(vec![(-1.0, 0.5), (1.0, 0.5)]),
            LawKind::UniformPmK(k) => {
                let k = *k as i64;
                let var_raw = (k as f64 + 1.0) * (2.0 * k as f64 + 1.0) / 6.0;
                let s = var_raw.sqrt();
                let p = 1.0 / (2.0 * k as f64);
                let mut v = Vec::with_capacity(2 * k as usize);
                for j in 1..=k {
                    v.push((-(j as f64) / s, p));
                    v.push((j as f64 / s, p));
                }
                Some(v)
            }
            LawKind::CustomDiscrete(a) => Some(a.clone()),
            LawKind::Gaussian => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self.kind, LawKind::Gaussian)
    }

    pub fn sample_f64(&self, rng: &mut Stream) -> f64 {
        match &self.kind {
            LawKind::Rademacher => {
                if rng.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            LawKind::Gaussian => rng.sample(rand_distr::StandardNormal),
            LawKind::UniformPmK(k) => {
                let k = *k;
                let j = rng.gen_range(1..=k) as f64;
                let s = ((k as f64 + 1.0) * (2.0 * k as f64 + 1.0) / 6.0).sqrt();
                if rng.gen::<bool>() {
                    j / s
                } else {
                    -j / s
                }
            }
            LawKind::CustomDiscrete(atoms) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for (v, p) in atoms {
                    acc += p;
                    if u < acc {
                        return *v;
                    }
                }
                atoms.last().map(|(v, _)| *v).unwrap_or(0.0)
            }
        }
    }

    pub fn sample<F: Real>(&self, rng: &mut Stream) -> F {
        F::of_f64(self.sample_f64(rng))
    }

    /// xi + i xi' with an independent copy; used by the complex ensembles.
    pub fn sample_complex<F: Real>(&self, rng: &mut Stream) -> Complex<F> {
        let re = self.sample_f64(rng);
        let im = self.sample_f64(rng);
        Complex::new(F::of_f64(re), F::of_f64(im))
    }

    /// |phi_xi(t)| with phi the characteristic function E e^{i 2 pi t xi}.
    pub fn char_fn_abs(&self, t: f64) -> f64 {
        match &self.kind {
            LawKind::Gaussian => (-2.0 * std::f64::consts::PI.powi(2) * t * t).exp(),
            _ => {
                let atoms = self.atoms().expect("discrete");
                let (mut re, mut im) = (0.0, 0.0);
                for (v, p) in atoms {
                    let arg = 2.0 * std::f64::consts::PI * t * v;
                    re += p * arg.cos();
                    im += p * arg.sin();
                }
                re.hypot(im)
            }
        }
    }
}

/// Distance from x to the nearest integer.
#[inline]
pub fn torus_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// The symmetrize / truncate / lazify transform of a base law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LazyLaw {
    pub base: EntryLaw,
    pub subgaussian_bound: f64,
    pub nu: f64,
    /// Difference atoms of xi - xi' conditioned on |.| in I_B, with their
    /// conditional probabilities. Empty for continuous bases.
    #[serde(skip)]
    cond_atoms: Vec<(f64, f64)>,
    /// All difference atoms of xi - xi' (discrete bases only).
    #[serde(skip)]
    diff_atoms: Vec<(f64, f64)>,
    retention: f64,
}

impl LazyLaw {
    /// Build with the base law's default subgaussian bound.
    pub fn new(base: EntryLaw, nu: f64) -> Result<Self, LawError> {
        let b = base.default_subgaussian_bound();
        Self::with_bound(base, b, nu)
    }

    pub fn with_bound(base: EntryLaw, subgaussian_bound: f64, nu: f64) -> Result<Self, LawError> {
        if !(0.0..1.0).contains(&nu) || nu == 0.0 {
            // nu = 0 is permitted only through the explicit degenerate hook below.
            if nu != 0.0 {
                return Err(LawError::BadNu(nu));
            }
        }
        if subgaussian_bound <= 0.0 {
            return Err(LawError::BadBound(subgaussian_bound));
        }
        let mut law = LazyLaw {
            base,
            subgaussian_bound,
            nu,
            cond_atoms: vec![],
            diff_atoms: vec![],
            retention: f64::NAN,
        };
        law.derive()?;
        Ok(law)
    }

    /// nu = 0 degenerate law (always zero); used for threshold closed forms.
    pub fn degenerate_zero(base: EntryLaw) -> Self {
        let b = base.default_subgaussian_bound();
        let mut law = LazyLaw {
            base,
            subgaussian_bound: b,
            nu: 0.0,
            cond_atoms: vec![],
            diff_atoms: vec![],
            retention: f64::NAN,
        };
        law.derive().expect("degenerate derive");
        law
    }

    fn derive(&mut self) -> Result<(), LawError> {
        let (lo, hi) = self.truncation_interval();
        if let Some(atoms) = self.base.atoms() {
            // Exact enumeration of xi - xi'.
            let mut diffs: std::collections::BTreeMap<i64, f64> = Default::default();
            let quant = |x: f64| (x * 1e12).round() as i64;
            for (x, px) in &atoms {
                for (y, py) in &atoms {
                    *diffs.entry(quant(x - y)).or_insert(0.0) += px * py;
                }
            }
            self.diff_atoms = diffs.iter().map(|(q, p)| (*q as f64 / 1e12, *p)).collect();
            let mut p = 0.0;
            let mut cond = vec![];
            for (v, pr) in &self.diff_atoms {
                let a = v.abs();
                if a > lo && a < hi {
                    p += pr;
                    cond.push((*v, *pr));
                }
            }
            for c in &mut cond {
                c.1 /= p;
            }
            self.cond_atoms = cond;
            self.retention = p;
            let floor = 1.0 / (128.0 * self.subgaussian_bound.powi(4));
            if p < floor {
                return Err(LawError::RetentionTooSmall { p, floor });
            }
        } else {
            // Gaussian base: xi - xi' ~ N(0, 2), p in closed form.
            let n = Normal::new(0.0, std::f64::consts::SQRT_2).unwrap();
            self.retention = 2.0 * (n.cdf(hi) - n.cdf(lo));
        }
        Ok(())
    }

    /// The open interval I_B = (1, 16 B^2).
    pub fn truncation_interval(&self) -> (f64, f64) {
        (1.0, 16.0 * self.subgaussian_bound * self.subgaussian_bound)
    }

    /// Exact (discrete) or closed-form (gaussian) retention probability
    /// p = P(|xi - xi'| in I_B).
    pub fn retention_probability(&self) -> f64 {
        self.retention
    }

    /// Support atoms of xi_nu with probabilities (discrete bases only).
    pub fn atoms(&self) -> Result<Vec<(f64, f64)>, LawError> {
        if !self.base.is_discrete() {
            return Err(LawError::NeedsDiscrete);
        }
        let np = self.nu * self.retention;
        let mut out = vec![(0.0, 1.0 - np)];
        for (v, cp) in &self.cond_atoms {
            out.push((*v, np * cp));
        }
        Ok(out)
    }

    pub fn sample_f64(&self, rng: &mut Stream) -> f64 {
        // Definition path: draw xi, xi', Z_nu; never sample the enumerated
        // atoms so the continuous case works identically.
        let x = self.base.sample_f64(rng);
        let y = self.base.sample_f64(rng);
        let z: f64 = rng.gen();
        let d = x - y;
        let (lo, hi) = self.truncation_interval();
        if z < self.nu && d.abs() > lo && d.abs() < hi {
            d
        } else {
            0.0
        }
    }

    pub fn sample<F: Real>(&self, rng: &mut Stream) -> F {
        F::of_f64(self.sample_f64(rng))
    }

    pub fn sample_complex<F: Real>(&self, rng: &mut Stream) -> Complex<F> {
        let re = self.sample_f64(rng);
        let im = self.sample_f64(rng);
        Complex::new(F::of_f64(re), F::of_f64(im))
    }

    /// E[cos(2 pi t xi_bar) | |xi_bar| in I_B].
    fn cond_expect_cos(&self, t: f64) -> f64 {
        if self.base.is_discrete() {
            self.cond_atoms
                .iter()
                .map(|(v, p)| p * (2.0 * std::f64::consts::PI * t * v).cos())
                .sum()
        } else {
            self.cond_expect(|x| (2.0 * std::f64::consts::PI * t * x).cos())
        }
    }

    /// E[||t xi_bar||_T^2 | |xi_bar| in I_B].
    fn cond_expect_torus_sq(&self, t: f64) -> f64 {
        if self.base.is_discrete() {
            self.cond_atoms.iter().map(|(v, p)| p * torus_dist(t * v).powi(2)).sum()
        } else {
            self.cond_expect(|x| torus_dist(t * x).powi(2))
        }
    }

    /// 64-point Gauss-Legendre over the truncation interval against the
    /// N(0,2) density of xi - xi', symmetrized. Good to ~1e-10 for smooth
    /// integrands spanning O(10) oscillations; degrades for large |t|, which
    /// is why the acceptance-facing sandwich check runs on discrete bases.
    fn cond_expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        let (lo, hi) = self.truncation_interval();
        let (nodes, weights) = gauss_legendre_64();
        let dens = |x: f64| {
            let s2 = 2.0;
            (-(x * x) / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2).sqrt()
        };
        let half = (hi - lo) / 2.0;
        let mid = (hi + lo) / 2.0;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let u = mid + half * x;
            // contributions from +u and -u
            acc += w * half * dens(u) * (f(u) + f(-u));
        }
        acc / self.retention
    }

    /// phi_{xi_nu}(t) = 1 - nu p + nu p E[cos(2 pi t xi_bar) | I_B].
    pub fn char_fn_exact(&self, t: f64) -> f64 {
        let np = self.nu * self.retention;
        1.0 - np + np * self.cond_expect_cos(t)
    }

    /// phi of the un-truncated lazy symmetrization xi_bar Z_nu.
    pub fn char_fn_untruncated(&self, t: f64) -> f64 {
        if self.base.is_discrete() {
            let e_cos: f64 = self
                .diff_atoms
                .iter()
                .map(|(v, p)| p * (2.0 * std::f64::consts::PI * t * v).cos())
                .sum();
            1.0 - self.nu + self.nu * e_cos
        } else {
            // xi - xi' ~ N(0,2): E cos(2 pi t xibar) = exp(-4 pi^2 t^2).
            let e_cos = (-4.0 * std::f64::consts::PI.powi(2) * t * t).exp();
            1.0 - self.nu + self.nu * e_cos
        }
    }
}

/// Result of the characteristic-function sandwich and dominance check.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub max_violation: f64,
    pub worst_t: f64,
    pub violations: usize,
    pub points: usize,
}

/// Verify, on every grid point, the sandwich
/// `exp(-32 nu p E||t xi_bar||^2) <= phi_{xi_nu}(t) <= exp(-nu p E||t xi_bar||^2)`
/// and the dominance `|phi_xi(t)| <= phi_{xi_bar Z_nu}(t)` (the latter needs
/// nu <= 1/4).
pub fn char_fn_sandwich_check(law: &LazyLaw, t_grid: &[f64], slack: f64) -> Result<SandwichReport, LawError> {
    if law.nu > 0.25 {
        return Err(LawError::NuTooLarge(law.nu));
    }
    let np = law.nu * law.retention;
    let mut max_violation = 0.0f64;
    let mut worst_t = 0.0;
    let mut violations = 0;
    for &t in t_grid {
        let phi = law.char_fn_exact(t);
        let e2 = law.cond_expect_torus_sq(t);
        let upper = (-np * e2).exp();
        let lower = (-32.0 * np * e2).exp();
        let dom = law.base.char_fn_abs(t) - law.char_fn_untruncated(t);
        let v = (phi - upper).max(lower - phi).max(dom);
        if v > max_violation {
            max_violation = v;
            worst_t = t;
        }
        if v > slack {
            violations += 1;
        }
    }
    Ok(SandwichReport { max_violation, worst_t, violations, points: t_grid.len() })
}

/// Either a plain or a lazy law; what ensemble specs carry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Law {
    Entry(EntryLaw),
    Lazy(LazyLaw),
}

impl Law {
    pub fn sample_f64(&self, rng: &mut Stream) -> f64 {
        match self {
            Law::Entry(l) => l.sample_f64(rng),
            Law::Lazy(l) => l.sample_f64(rng),
        }
    }

    pub fn sample<F: Real>(&self, rng: &mut Stream) -> F {
        F::of_f64(self.sample_f64(rng))
    }

    pub fn sample_complex<F: Real>(&self, rng: &mut Stream) -> Complex<F> {
        let re = self.sample_f64(rng);
        let im = self.sample_f64(rng);
        Complex::new(F::of_f64(re), F::of_f64(im))
    }

    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            Law::Entry(l) => l.atoms(),
            Law::Lazy(l) => l.atoms().ok(),
        }
    }
}

/// 64-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
fn gauss_legendre_64() -> (&'static [f64; 64], &'static [f64; 64]) {
    use std::sync::OnceLock;
    static CACHE: OnceLock<([f64; 64], [f64; 64])> = OnceLock::new();
    let (n, w) = CACHE.get_or_init(|| {
        const N: usize = 64;
        let mut nodes = [0.0; N];
        let mut weights = [0.0; N];
        for i in 0..N {
            // Initial guess: Chebyshev-like.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            for _ in 0..100 {
                // Legendre P_N(x) and derivative via recurrence.
                let (mut p0, mut p1) = (1.0f64, x);
                for k in 2..=N {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=N {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
            nodes[N - 1 - i] = x;
            weights[N - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    });
    (n, w)
}
