//! Small-ball and Levy-concentration estimators, the threshold function
//! tau_L, and the empirical 1/2/4-dimensional Littlewood-Offord suites.
//!
//! Estimation conventions: one sample pool is shared across an epsilon grid
//! (monotonicity in epsilon is then exact), confidence intervals are exact
//! Clopper-Pearson at 99%, and slope fits drop rows whose CI is wider than
//! 30% of the point estimate.

use serde::Serialize;

use crate::arithmetic::{cosine, LcdCertificate};
use crate::distributions::Law;
use crate::ensembles::{self, EnsembleSpec};
use crate::mat::norm2;
use crate::rng::Stream;
use crate::stats::{fit_scaling, BinomEstimate, ScalingFit};

pub const CONFIDENCE: f64 = 0.99;
pub const MAX_REL_CI_WIDTH: f64 = 0.30;

#[derive(Debug, Clone, thiserror::Error)]
pub enum AnticoncError {
    #[error("trial budget must be at least {0}")]
    TooFewTrials(usize),
    #[error("exact enumeration limited to {max} free entries, spec has {got}")]
    ExactTooLarge { max: usize, got: usize },
    #[error("exact enumeration needs a discrete law")]
    NeedsDiscrete,
    #[error("LCD certificate missing or too weak: need certified bound >= {need}, got {got}")]
    LcdGateFailed { need: f64, got: f64 },
    #[error("overlap precondition failed: |cos| = {0} > 0.01")]
    OverlapGateFailed(f64),
    #[error("vector norm precondition failed: {0}")]
    NormGate(String),
    #[error(transparent)]
    Ensemble(#[from] crate::ensembles::EnsembleError),
    #[error(transparent)]
    Arithmetic(#[from] crate::arithmetic::ArithmeticError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterPolicy {
    FixedZero,
    EmpiricalModeSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MonteCarlo,
    ExactEnumeration,
}

/// A small-ball probability estimate at one radius.
#[derive(Debug, Clone, Serialize)]
pub struct ConcentrationEstimate {
    pub radius: f64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub method: Method,
    pub center_policy: CenterPolicy,
}

impl ConcentrationEstimate {
    fn exact(radius: f64, p: f64, policy: CenterPolicy) -> Self {
        ConcentrationEstimate {
            radius,
            p_hat: p,
            ci_low: p,
            ci_high: p,
            trials: 0,
            method: Method::ExactEnumeration,
            center_policy: policy,
        }
    }

    fn from_counts(radius: f64, k: u64, n: u64, policy: CenterPolicy) -> Self {
        let est = BinomEstimate::new(k, n, CONFIDENCE);
        ConcentrationEstimate {
            radius,
            p_hat: est.p_hat,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            trials: n,
            method: Method::MonteCarlo,
            center_policy: policy,
        }
    }

    pub fn binom(&self) -> BinomEstimate {
        BinomEstimate {
            k: (self.p_hat * self.trials as f64).round() as u64,
            n: self.trials,
            p_hat: self.p_hat,
            ci_low: self.ci_low,
            ci_high: self.ci_high,
        }
    }
}

/// Levy concentration of a sampled d-dimensional variable at radius eps.
///
/// `fixed_zero` estimates P(||S|| <= eps). `empirical_mode_search` maximizes
/// the ball count over candidate centers: every sample point in one
/// dimension (a sliding window over the sorted values, the exact mode of the
/// empirical measure), or a capped subsample of points plus the origin in
/// higher dimension. The mode-search estimator is upward biased for the true
/// sup; this is documented behaviour, not a bug.
pub fn levy_estimate(
    mut sampler: impl FnMut(&mut Stream) -> Vec<f64>,
    eps: f64,
    trials: u64,
    policy: CenterPolicy,
    stream: &mut Stream,
) -> Result<ConcentrationEstimate, AnticoncError> {
    if trials < 100 {
        return Err(AnticoncError::TooFewTrials(100));
    }
    let samples: Vec<Vec<f64>> = (0..trials).map(|_| sampler(stream)).collect();
    Ok(levy_from_samples(&samples, eps, policy))
}

/// Shared-pool variant: evaluate several radii on one sample set.
pub fn levy_from_samples(samples: &[Vec<f64>], eps: f64, policy: CenterPolicy) -> ConcentrationEstimate {
    let n = samples.len() as u64;
    let d = samples[0].len();
    let k = match policy {
        CenterPolicy::FixedZero => samples.iter().filter(|s| norm2(s) <= eps).count() as u64,
        CenterPolicy::EmpiricalModeSearch => {
            if d == 1 {
                // exact mode of the empirical measure by sliding window
                let mut xs: Vec<f64> = samples.iter().map(|s| s[0]).collect();
                xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mut best = 0usize;
                let mut lo = 0usize;
                for hi in 0..xs.len() {
                    while xs[hi] - xs[lo] > 2.0 * eps {
                        lo += 1;
                    }
                    best = best.max(hi - lo + 1);
                }
                best as u64
            } else {
                // candidate centers: deterministic subsample plus the origin
                let cap = 256usize;
                let step = (samples.len() / cap).max(1);
                let mut best = 0u64;
                let mut centers: Vec<&[f64]> = samples.iter().step_by(step).map(|s| s.as_slice()).collect();
                let origin = vec![0.0; d];
                centers.push(&origin);
                for c in centers {
                    let cnt = samples
                        .iter()
                        .filter(|s| {
                            let mut acc = 0.0;
                            for (a, b) in s.iter().zip(c) {
                                let dd = a - b;
                                acc += dd * dd;
                            }
                            acc.sqrt() <= eps
                        })
                        .count() as u64;
                    best = best.max(cnt);
                }
                best
            }
        }
    };
    ConcentrationEstimate::from_counts(eps, k, n, policy)
}

/// Exact Levy concentration of a finitely supported scalar variable: the
/// best ball of radius eps over atom centers.
pub fn levy_exact_discrete(atoms: &[(f64, f64)], eps: f64) -> ConcentrationEstimate {
    let mut best = 0.0f64;
    for (c, _) in atoms {
        let mass: f64 =
            atoms.iter().filter(|(v, _)| (v - c).abs() <= eps).map(|(_, p)| p).sum();
        best = best.max(mass);
    }
    ConcentrationEstimate::exact(eps, best, CenterPolicy::EmpiricalModeSearch)
}

/// Enumerate the exact distribution of sum_k coeff_k xi_k for a discrete
/// law; returns atoms of the sum merged to 1e-9 resolution.
pub fn enumerate_weighted_sum(coeffs: &[f64], law_atoms: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut acc: std::collections::BTreeMap<i64, f64> = Default::default();
    acc.insert(0, 1.0);
    let quant = |x: f64| (x * 1e9).round() as i64;
    for &c in coeffs {
        let mut next: std::collections::BTreeMap<i64, f64> = Default::default();
        for (s, ps) in &acc {
            for (v, pv) in law_atoms {
                *next.entry(s + quant(c * v)).or_insert(0.0) += ps * pv;
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(q, p)| (q as f64 / 1e9, p)).collect()
}

// ---------------------------------------------------------------------------
// matrix small ball
// ---------------------------------------------------------------------------

/// Positions of entries that consume randomness for a family, in sampling
/// order, together with the row each entry lands in (real families only) and
/// its multiplicity pattern: list of (row, coeff) pairs the entry contributes
/// to in M v.
fn free_entry_contributions(spec: &EnsembleSpec, v: &[f64]) -> Result<Vec<Vec<(usize, f64)>>, AnticoncError> {
    use crate::ensembles::Family::*;
    let mut out = vec![];
    match &spec.family {
        IidSquare { n } => {
            for i in 0..*n {
                for j in 0..*n {
                    out.push(vec![(i, v[j])]);
                }
            }
        }
        IidRect { n_rows, n } => {
            for i in 0..*n_rows {
                for j in 0..*n {
                    out.push(vec![(i, v[j])]);
                }
            }
        }
        ZeroedM { n, anchor } => {
            let in_d = |k: usize| anchor.contains(&k);
            for i in 0..*n {
                for j in 0..*n {
                    if in_d(i) != in_d(j) {
                        out.push(vec![(i, v[j])]);
                    }
                }
            }
        }
        BlockLa { n } => {
            // entry a_ij appears at (i, n+j) and (n+j, i)
            for i in 0..*n {
                for j in 0..*n {
                    out.push(vec![(i, v[n + j]), (n + j, v[i])]);
                }
            }
        }
        BlockCurlyLa { n } => {
            for i in 0..(*n - 1) {
                for j in 0..*n {
                    out.push(vec![(i, v[(n - 1) + j]), ((n - 1) + j, v[i])]);
                }
            }
        }
        TruncatedMUnderline { n } => {
            // a1[i][j] (i >= 1) appears at (1+i, 1+n+j) and (1+n+i, 1+j);
            // additionally column 0 of a1 lands at (1+n+i, 0).
            for i in 1..*n {
                for j in 0..*n {
                    let mut c = vec![(1 + i, v[1 + n + j]), (1 + n + i, v[1 + j])];
                    if j == 0 {
                        c.push((1 + n + i, v[0]));
                    }
                    out.push(c);
                }
            }
        }
        LinearizedP { .. } | IidComplex { .. } | ComplexPg { .. } | ComplexMg { .. } => {
            return Err(AnticoncError::NeedsDiscrete);
        }
    }
    Ok(out)
}

/// P(||M v||_2 <= t sqrt(n)) for fresh samples of the family, n being the
/// family's base dimension.
pub fn small_ball_matrix(
    spec: &EnsembleSpec,
    v: &[f64],
    t: f64,
    trials: Option<u64>,
    stream: &mut Stream,
) -> Result<ConcentrationEstimate, AnticoncError> {
    let threshold = t * (spec.family.base_n() as f64).sqrt();
    match trials {
        Some(tr) => {
            let mut k = 0u64;
            for _ in 0..tr {
                let s = ensembles::sample::<f64>(spec, stream)?;
                let m = s.real()?;
                if norm2(&m.matvec(v)) <= threshold {
                    k += 1;
                }
            }
            Ok(ConcentrationEstimate::from_counts(t, k, tr, CenterPolicy::FixedZero))
        }
        None => {
            let p = small_ball_matrix_exact(spec, v, threshold)?;
            Ok(ConcentrationEstimate::exact(t, p, CenterPolicy::FixedZero))
        }
    }
}

/// Exact enumeration over the free entries (discrete laws, <= 24 entries).
fn small_ball_matrix_exact(spec: &EnsembleSpec, v: &[f64], threshold: f64) -> Result<f64, AnticoncError> {
    let atoms = spec.law.atoms().ok_or(AnticoncError::NeedsDiscrete)?;
    let contribs = free_entry_contributions(spec, v)?;
    let max = 24;
    if contribs.len() > max {
        return Err(AnticoncError::ExactTooLarge { max, got: contribs.len() });
    }
    let (rows, _) = spec.family.output_dims();
    let mut acc = vec![0.0f64; rows];
    let mut prob = 0.0f64;
    enum_rec(&contribs, &atoms, 0, 1.0, &mut acc, threshold, &mut prob);
    Ok(prob)
}

fn enum_rec(
    contribs: &[Vec<(usize, f64)>],
    atoms: &[(f64, f64)],
    idx: usize,
    p: f64,
    acc: &mut [f64],
    threshold: f64,
    prob: &mut f64,
) {
    if idx == contribs.len() {
        let nrm = acc.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm <= threshold {
            *prob += p;
        }
        return;
    }
    for (val, pa) in atoms {
        for (row, coef) in &contribs[idx] {
            acc[*row] += val * coef;
        }
        enum_rec(contribs, atoms, idx + 1, p * pa, acc, threshold, prob);
        for (row, coef) in &contribs[idx] {
            acc[*row] -= val * coef;
        }
    }
}

// ---------------------------------------------------------------------------
// threshold function
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdEstimate {
    pub l: f64,
    pub t_hat: f64,
    pub bracket: (f64, f64),
    pub exponent: u32,
    pub inconclusive: bool,
}

/// tau_L = sup { t in [0,1] : P(||M v|| <= t sqrt(n)) >= (4 L t)^exponent },
/// found by bisection. With a fixed v the probability in t is the CDF of
/// ||M v|| / sqrt(n); sharing one sample pool across the bisection makes the
/// crossing deterministic. Exact enumeration is used when available.
pub fn threshold_tau(
    spec: &EnsembleSpec,
    v: &[f64],
    l: f64,
    exponent: u32,
    trials: Option<u64>,
    stream: &mut Stream,
) -> Result<ThresholdEstimate, AnticoncError> {
    assert!(l > 2.0, "the threshold function needs L > 2");
    let rn = (spec.family.base_n() as f64).sqrt();
    let p_of_t: Box<dyn Fn(f64) -> f64> = match trials {
        None => {
            let spec = spec.clone();
            let v = v.to_vec();
            Box::new(move |t: f64| small_ball_matrix_exact(&spec, &v, t * rn).unwrap())
        }
        Some(tr) => {
            let mut norms: Vec<f64> = (0..tr)
                .map(|_| {
                    let s = ensembles::sample::<f64>(spec, stream).unwrap();
                    norm2(&s.real().unwrap().matvec(v)) / rn
                })
                .collect();
            norms.sort_by(|a, b| a.partial_cmp(b).unwrap());
            Box::new(move |t: f64| {
                let k = norms.partition_point(|x| *x <= t);
                k as f64 / norms.len() as f64
            })
        }
    };
    // g(t) = P(t) - (4 L t)^e is positive at t ~ 0 (P >= 0 = benchmark only
    // when P > 0... at t=0 the benchmark is 0 and P >= 0, so the sup set is
    // nonempty); bisect on the crossing of the benchmark above P.
    let admissible = |t: f64| p_of_t(t) >= (4.0 * l * t).powi(exponent as i32);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if admissible(1.0) {
        return Ok(ThresholdEstimate { l, t_hat: 1.0, bracket: (1.0, 1.0), exponent, inconclusive: false });
    }
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if admissible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // With Monte Carlo the crossing is only resolved up to CI noise at the
    // bracket; flag when the CI at the bracket straddles the benchmark.
    let inconclusive = match trials {
        None => false,
        Some(tr) => {
            let t = 0.5 * (lo + hi);
            let p = p_of_t(t);
            let k = (p * tr as f64).round() as u64;
            let (cl, ch) = crate::stats::clopper_pearson(k, tr, CONFIDENCE);
            let bench = (4.0 * l * t).powi(exponent as i32);
            cl <= bench && bench <= ch
        }
    };
    Ok(ThresholdEstimate { l, t_hat: 0.5 * (lo + hi), bracket: (lo, hi), exponent, inconclusive })
}

// ---------------------------------------------------------------------------
// Littlewood-Offord suites
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct LoTable {
    pub eps: Vec<f64>,
    pub estimates: Vec<ConcentrationEstimate>,
    pub fit: ScalingFit,
    /// max over rows of p_hat / eps^dim_exponent scaled per suite.
    pub max_ratio: f64,
}

fn lo_gate_lcd(cert: &LcdCertificate, need: f64) -> Result<(), AnticoncError> {
    if !cert.certified || cert.lower_bound < need {
        return Err(AnticoncError::LcdGateFailed {
            need,
            got: if cert.certified { cert.lower_bound } else { 0.0 },
        });
    }
    Ok(())
}

/// P(|<X, v>| <= eps) over an epsilon grid, gated on a certified LCD for v.
pub fn lo_bound_check_1d(
    v: &[f64],
    cert: &LcdCertificate,
    law: &Law,
    eps_grid: &[f64],
    trials: u64,
    c_margin: f64,
    stream: &mut Stream,
) -> Result<LoTable, AnticoncError> {
    let eps_min = eps_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    lo_gate_lcd(cert, c_margin / eps_min)?;
    let samples: Vec<f64> = (0..trials)
        .map(|_| {
            let mut s = 0.0;
            for vi in v {
                s += vi * law.sample_f64(stream);
            }
            s
        })
        .collect();
    let estimates: Vec<ConcentrationEstimate> = eps_grid
        .iter()
        .map(|&e| {
            let k = samples.iter().filter(|s| s.abs() <= e).count() as u64;
            ConcentrationEstimate::from_counts(e, k, trials, CenterPolicy::FixedZero)
        })
        .collect();
    let fit = fit_scaling(
        eps_grid,
        &estimates.iter().map(|e| e.binom()).collect::<Vec<_>>(),
        MAX_REL_CI_WIDTH,
    );
    let max_ratio = estimates
        .iter()
        .map(|e| e.p_hat / e.radius)
        .fold(0.0f64, f64::max);
    Ok(LoTable { eps: eps_grid.to_vec(), estimates, fit, max_ratio })
}

/// Two-dimensional suite: S = sum_k (c_k, d_k) xi_k, Levy radius eps sqrt(2).
/// Needs |cos(c, d)| <= 0.01 and a certified joint LCD >= sqrt(2)/min eps.
pub fn lo_bound_check_2d(
    c: &[f64],
    d: &[f64],
    cert: &LcdCertificate,
    law: &Law,
    eps_grid: &[f64],
    trials: u64,
    stream: &mut Stream,
) -> Result<LoTable, AnticoncError> {
    let omega = norm2(d);
    if !(omega > 0.0 && omega <= 1.0) || (norm2(c) - 1.0).abs() > 1e-9 {
        return Err(AnticoncError::NormGate(format!("||c||={} ||d||={omega}", norm2(c))));
    }
    let overlap = cosine(c, d)?.abs();
    if overlap > 0.01 {
        return Err(AnticoncError::OverlapGateFailed(overlap));
    }
    let eps_min = eps_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    lo_gate_lcd(cert, 2f64.sqrt() / eps_min)?;
    let samples: Vec<Vec<f64>> = (0..trials)
        .map(|_| {
            let mut s = [0.0f64; 2];
            for k in 0..c.len() {
                let x = law.sample_f64(stream);
                s[0] += c[k] * x;
                s[1] += d[k] * x;
            }
            s.to_vec()
        })
        .collect();
    let estimates: Vec<ConcentrationEstimate> = eps_grid
        .iter()
        .map(|&e| levy_from_samples(&samples, e * 2f64.sqrt(), CenterPolicy::EmpiricalModeSearch))
        .collect();
    // the table keys rows by eps, not by the ball radius
    let estimates: Vec<ConcentrationEstimate> = estimates
        .into_iter()
        .zip(eps_grid)
        .map(|(mut est, &e)| {
            est.radius = e;
            est
        })
        .collect();
    let fit = fit_scaling(
        eps_grid,
        &estimates.iter().map(|e| e.binom()).collect::<Vec<_>>(),
        MAX_REL_CI_WIDTH,
    );
    let max_ratio = estimates
        .iter()
        .map(|e| e.p_hat * omega / (e.radius * e.radius))
        .fold(0.0f64, f64::max);
    Ok(LoTable { eps: eps_grid.to_vec(), estimates, fit, max_ratio })
}

/// Four-dimensional suite with rows (c, c', d, d'); Levy radius 2 eps.
#[allow(clippy::too_many_arguments)]
pub fn lo_bound_check_4d(
    c: &[f64],
    c2: &[f64],
    d: &[f64],
    d2: &[f64],
    cert: &LcdCertificate,
    law: &Law,
    eps_grid: &[f64],
    trials: u64,
    stream: &mut Stream,
) -> Result<LoTable, AnticoncError> {
    let omega = norm2(d);
    if !(omega > 0.0) || !(norm2(d2) > 0.0) {
        return Err(AnticoncError::NormGate("d, d' must be nonzero".into()));
    }
    for (a, b) in [(c, c2), (d, d2)] {
        let ortho = crate::mat::dot(a, b).abs();
        if ortho > 1e-9 {
            return Err(AnticoncError::NormGate(format!("<c,c'> or <d,d'> = {ortho} != 0")));
        }
    }
    for (a, b) in [(c, d), (c2, d), (c, d2), (c2, d2)] {
        let ov = cosine(a, b)?.abs();
        if ov > 0.01 {
            return Err(AnticoncError::OverlapGateFailed(ov));
        }
    }
    let eps_min = eps_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    lo_gate_lcd(cert, 2.0 / eps_min)?;
    let samples: Vec<Vec<f64>> = (0..trials)
        .map(|_| {
            let mut s = [0.0f64; 4];
            for k in 0..c.len() {
                let x = law.sample_f64(stream);
                s[0] += c[k] * x;
                s[1] += c2[k] * x;
                s[2] += d[k] * x;
                s[3] += d2[k] * x;
            }
            s.to_vec()
        })
        .collect();
    let estimates: Vec<ConcentrationEstimate> = eps_grid
        .iter()
        .map(|&e| {
            let mut est = levy_from_samples(&samples, 2.0 * e, CenterPolicy::EmpiricalModeSearch);
            est.radius = e;
            est
        })
        .collect();
    let fit = fit_scaling(
        eps_grid,
        &estimates.iter().map(|e| e.binom()).collect::<Vec<_>>(),
        MAX_REL_CI_WIDTH,
    );
    let max_ratio = estimates
        .iter()
        .map(|e| e.p_hat * omega * omega / e.radius.powi(4))
        .fold(0.0f64, f64::max);
    Ok(LoTable { eps: eps_grid.to_vec(), estimates, fit, max_ratio })
}

// ---------------------------------------------------------------------------
// tensorization
// ---------------------------------------------------------------------------

/// Nonnegative scalar laws with an exactly verified marginal small-ball
/// bound P(xi <= eps) <= K eps.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum NonnegLaw {
    /// Uniform on [0,1]: K = 1 exactly.
    Uniform01,
}

impl NonnegLaw {
    pub fn marginal_k(&self) -> f64 {
        match self {
            NonnegLaw::Uniform01 => 1.0,
        }
    }

    fn sample(&self, rng: &mut Stream) -> f64 {
        use rand::Rng;
        match self {
            NonnegLaw::Uniform01 => rng.gen::<f64>(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorizationRow {
    pub eps: f64,
    pub p_hat: f64,
    pub ci_high: f64,
    pub bound_at_c: f64,
    /// Smallest C making (C K eps)^n >= the CI-upper estimate at this row.
    pub c_required: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorizationReport {
    pub n: usize,
    pub k_marginal: f64,
    pub rows: Vec<TensorizationRow>,
    /// Smallest C making the bound hold across the grid.
    pub c_min: f64,
}

/// P(sum xi_k^2 <= eps^2 n) versus (C K eps)^n.
pub fn tensorization_check(
    law: NonnegLaw,
    c_cal: f64,
    eps_grid: &[f64],
    n: usize,
    trials: u64,
    stream: &mut Stream,
) -> TensorizationReport {
    let k_marginal = law.marginal_k();
    let sums: Vec<f64> = (0..trials)
        .map(|_| (0..n).map(|_| law.sample(stream).powi(2)).sum())
        .collect();
    let mut c_min = 0.0f64;
    let rows: Vec<TensorizationRow> = eps_grid
        .iter()
        .map(|&e| {
            let hits = sums.iter().filter(|s| **s <= e * e * n as f64).count() as u64;
            let est = BinomEstimate::new(hits, trials, CONFIDENCE);
            let c_required = est.ci_high.powf(1.0 / n as f64) / (k_marginal * e);
            c_min = c_min.max(c_required);
            TensorizationRow {
                eps: e,
                p_hat: est.p_hat,
                ci_high: est.ci_high,
                bound_at_c: (c_cal * k_marginal * e).powi(n as i32),
                c_required,
            }
        })
        .collect();
    TensorizationReport { n, k_marginal, rows, c_min }
}
