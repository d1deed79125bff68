//! Integer boxes and box pairs, uniform sampling from them, the random
//! box LCD experiment, and toy-scale covering-family enumeration.
//!
//! The box-size parameter is spelled `box_n` and the rectangular row count
//! `n_rows`; the two never share a name.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{certify_lcd, ArithmeticError};
use crate::rng::Stream;
use crate::stats::clopper_pearson;

#[derive(Debug, Clone, thiserror::Error)]
pub enum NetsError {
    #[error("coordinate set {0} is empty")]
    EmptyCoordinate(usize),
    #[error("box_n must be >= 2, got {0}")]
    BadBoxN(i64),
    #[error("kappa must be >= 2, got {0}")]
    BadKappa(f64),
    #[error("lemma hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("combinatorial cap exceeded: {0}")]
    Cap(String),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
}

/// One coordinate's integer support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordSet {
    /// [-kappa N, -N] union [N, kappa N].
    Anchor,
    /// [-N, N], the default for non-anchored coordinates.
    Symmetric,
    /// Dyadic shell I_l = [-2^l N, 2^l N] minus [-2^{l-1} N, 2^{l-1} N]
    /// for l >= 1; Shell(0) coincides with Symmetric.
    Shell(u32),
    /// Test hook: one fixed value, for degenerate diagnostics.
    Singleton(i64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxSpec {
    pub dim: usize,
    pub box_n: i64,
    pub kappa: f64,
    pub coords: Vec<CoordSet>,
}

impl BoxSpec {
    /// Anchored coordinates on d1/d2, symmetric default elsewhere.
    pub fn new(dim: usize, box_n: i64, kappa: f64, anchors: &[usize]) -> Result<Self, NetsError> {
        if box_n < 2 {
            return Err(NetsError::BadBoxN(box_n));
        }
        if kappa < 2.0 {
            return Err(NetsError::BadKappa(kappa));
        }
        let coords = (0..dim)
            .map(|i| if anchors.contains(&i) { CoordSet::Anchor } else { CoordSet::Symmetric })
            .collect();
        Ok(BoxSpec { dim, box_n, kappa, coords })
    }

    /// All coordinates anchored, as in the box LCD lemma.
    pub fn all_anchored(dim: usize, box_n: i64, kappa: f64) -> Result<Self, NetsError> {
        let anchors: Vec<usize> = (0..dim).collect();
        Self::new(dim, box_n, kappa, &anchors)
    }

    fn coord_values(&self, i: usize) -> Vec<i64> {
        let n = self.box_n;
        let top = (self.kappa * n as f64).floor() as i64;
        match self.coords[i] {
            CoordSet::Anchor => {
                let mut v: Vec<i64> = (-top..=-n).collect();
                v.extend(n..=top);
                v
            }
            CoordSet::Symmetric => (-n..=n).collect(),
            CoordSet::Shell(0) => (-n..=n).collect(),
            CoordSet::Shell(l) => {
                let hi = n << l;
                let lo = n << (l - 1);
                let mut v: Vec<i64> = (-hi..=-(lo + 1)).collect();
                v.extend((lo + 1)..=hi);
                v
            }
            CoordSet::Singleton(x) => vec![x],
        }
    }

    pub fn coord_cardinality(&self, i: usize) -> u64 {
        self.coord_values(i).len() as u64
    }

    /// log2 of the total cardinality (products overflow fast).
    pub fn log2_cardinality(&self) -> f64 {
        (0..self.dim).map(|i| (self.coord_cardinality(i) as f64).log2()).sum()
    }

    /// |B_i| >= box_n for all i; the Definition's total-cardinality cap
    /// |B| <= (kappa box_n)^dim is reported as a warning because the default
    /// symmetric coordinates already exceed it at small kappa.
    pub fn validate(&self) -> Result<Vec<String>, NetsError> {
        let mut warnings = vec![];
        for i in 0..self.dim {
            let c = self.coord_cardinality(i);
            if c == 0 {
                return Err(NetsError::EmptyCoordinate(i));
            }
            if !matches!(self.coords[i], CoordSet::Singleton(_)) && (c as i64) < self.box_n {
                return Err(NetsError::Hypothesis(format!("|B_{i}| = {c} < box_n")));
            }
        }
        let cap = (self.dim as f64) * (self.kappa * self.box_n as f64).log2();
        if self.log2_cardinality() > cap {
            warnings.push(format!(
                "cardinality 2^{:.2} exceeds (kappa box_n)^dim = 2^{:.2}",
                self.log2_cardinality(),
                cap
            ));
        }
        Ok(warnings)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxSample {
    pub point: Vec<i64>,
}

/// Coordinates independent and uniform on their supports.
pub fn sample_box(spec: &BoxSpec, rng: &mut Stream) -> Result<BoxSample, NetsError> {
    spec.validate()?;
    let mut point = Vec::with_capacity(spec.dim);
    for i in 0..spec.dim {
        let vals = spec.coord_values(i);
        point.push(vals[rng.gen_range(0..vals.len())]);
    }
    Ok(BoxSample { point })
}

// ---------------------------------------------------------------------------
// box LCD experiment
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct BoxLcdReport {
    pub d: usize,
    pub box_n: i64,
    pub kappa: f64,
    pub alpha: f64,
    pub k: f64,
    pub r: f64,
    pub trials: u64,
    pub failures: u64,
    pub failure_rate: f64,
    pub ci_high: f64,
    /// The lemma's bound (2^20 alpha)^{d/4}.
    pub bound: f64,
    pub bound_vacuous: bool,
}

/// Sample X uniformly from the all-anchored box and certify the lower bound
/// K for the essential LCD of r X at gamma = 1/2; count certification
/// failures against the lemma's (2^20 alpha)^{d/4}.
#[allow(clippy::too_many_arguments)]
pub fn box_lcd_experiment(
    d: usize,
    box_n: i64,
    kappa: f64,
    alpha: f64,
    k: f64,
    r: f64,
    trials: u64,
    stream: &mut Stream,
) -> Result<BoxLcdReport, NetsError> {
    if k * box_n as f64 >= (2.0f64).powi(d as i32) {
        return Err(NetsError::Hypothesis(format!("K box_n = {} >= 2^d", k * box_n as f64)));
    }
    if (d as f64) < k * k * alpha {
        return Err(NetsError::Hypothesis(format!("d = {d} < K^2 alpha = {}", k * k * alpha)));
    }
    let spec = BoxSpec::all_anchored(d, box_n, kappa)?;
    let mut failures = 0u64;
    for _ in 0..trials {
        let x = sample_box(&spec, stream)?;
        let v: Vec<f64> = x.point.iter().map(|&xi| r * xi as f64).collect();
        let cert = certify_lcd(vec![v], alpha, 0.5, None, k)?;
        if !cert.certified {
            failures += 1;
        }
    }
    let bound = (2f64.powi(20) * alpha).powf(d as f64 / 4.0);
    let (_, ci_high) = clopper_pearson(failures, trials, 0.99);
    Ok(BoxLcdReport {
        d,
        box_n,
        kappa,
        alpha,
        k,
        r,
        trials,
        failures,
        failure_rate: failures as f64 / trials as f64,
        ci_high,
        bound,
        bound_vacuous: bound >= 1.0,
    })
}

// ---------------------------------------------------------------------------
// box pairs and overlap
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxPairSpec {
    pub first: BoxSpec,
    pub second: BoxSpec,
}

impl BoxPairSpec {
    /// A pair with d1-anchors at scale N and d2-anchors at scale N1 <= N,
    /// over a common index range of length dim.
    pub fn new(
        dim: usize,
        box_n: i64,
        box_n1: i64,
        kappa: f64,
        d1: &[usize],
        d2: &[usize],
    ) -> Result<Self, NetsError> {
        if box_n1 > box_n {
            return Err(NetsError::Hypothesis("box_n1 must be <= box_n".into()));
        }
        Ok(BoxPairSpec {
            first: BoxSpec::new(dim, box_n, kappa, d1)?,
            second: BoxSpec::new(dim, box_n1, kappa, d2)?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapReport {
    pub trials: u64,
    /// Exact norm-cap constant T: max over the pair of
    /// max ||X_rest|| / (sqrt(D_rest) N).
    pub norm_cap: f64,
    pub threshold: f64,
    pub fraction_below: f64,
    pub mean_abs_cos: f64,
    pub mean_inner: f64,
    pub mean_inner_ci: (f64, f64),
    pub abs_cos_quantiles: [f64; 3],
}

/// Empirical distribution of |cos(X_rest, Y_rest)| for independent box-pair
/// samples, restricted to the common range with the first coordinate
/// dropped. Reports the fraction below the second-moment threshold
/// 32 kappa^2 T^2 / D_rest.
pub fn overlap_of_box_pair(
    pair: &BoxPairSpec,
    trials: u64,
    stream: &mut Stream,
) -> Result<OverlapReport, NetsError> {
    let dim = pair.first.dim;
    assert_eq!(dim, pair.second.dim, "pair must share the index range");
    let rest: Vec<usize> = (1..dim).collect();
    let d_rest = rest.len() as f64;
    let cap = |spec: &BoxSpec, scale: i64| -> f64 {
        let sum: f64 = rest
            .iter()
            .map(|&i| {
                let m = spec.coord_values(i).iter().map(|v| v.abs()).max().unwrap_or(0) as f64;
                m * m
            })
            .sum();
        sum.sqrt() / (d_rest.sqrt() * scale as f64)
    };
    let t1 = cap(&pair.first, pair.first.box_n);
    let t2 = cap(&pair.second, pair.second.box_n);
    let norm_cap = t1.max(t2);
    let threshold = 32.0 * pair.first.kappa * pair.first.kappa * norm_cap * norm_cap / d_rest;
    let mut below = 0u64;
    let mut coss = Vec::with_capacity(trials as usize);
    let mut inner_sum = 0.0f64;
    let mut inner_sq = 0.0f64;
    for _ in 0..trials {
        let x = sample_box(&pair.first, stream)?;
        let y = sample_box(&pair.second, stream)?;
        let xr: Vec<f64> = rest.iter().map(|&i| x.point[i] as f64).collect();
        let yr: Vec<f64> = rest.iter().map(|&i| y.point[i] as f64).collect();
        let inner: f64 = xr.iter().zip(&yr).map(|(a, b)| a * b).sum();
        let c = inner / (crate::mat::norm2(&xr) * crate::mat::norm2(&yr));
        if c.abs() < threshold {
            below += 1;
        }
        inner_sum += inner;
        inner_sq += inner * inner;
        coss.push(c.abs());
    }
    coss.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| coss[((coss.len() - 1) as f64 * p) as usize];
    let mean_inner = inner_sum / trials as f64;
    let sd = ((inner_sq / trials as f64 - mean_inner * mean_inner) / trials as f64).sqrt();
    Ok(OverlapReport {
        trials,
        norm_cap,
        threshold,
        fraction_below: below as f64 / trials as f64,
        mean_abs_cos: coss.iter().sum::<f64>() / trials as f64,
        mean_inner,
        mean_inner_ci: (mean_inner - 2.58 * sd, mean_inner + 2.58 * sd),
        abs_cos_quantiles: [q(0.25), q(0.5), q(0.75)],
    })
}

// ---------------------------------------------------------------------------
// covering family enumeration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct CoveringFamilyReport {
    pub n_tiny: usize,
    pub free_coords: usize,
    pub budget: f64,
    pub family_size: u128,
    /// The lemma's cardinality bound kappa^{2 n}.
    pub bound: f64,
    pub within_bound: bool,
    /// The box scale N = kappa0 / (4 eps) the family would materialize at.
    pub box_scale: f64,
}

/// Count the shell-profile sequences (l_j >= 0 on free coordinates) with
/// sum over positive l_j of 4^{l_j} <= 16 n / kappa0^2, the membership rule
/// of the covering family; verify the kappa^{2n} bound.
pub fn enumerate_covering_family(
    n_tiny: usize,
    eps: f64,
    kappa: f64,
    kappa0: f64,
    d1: &[usize],
    d2: &[usize],
) -> Result<CoveringFamilyReport, NetsError> {
    if n_tiny > 6 {
        return Err(NetsError::Cap(format!("n_tiny = {n_tiny} > 6")));
    }
    let dim = 2 * n_tiny - 1;
    let anchored: std::collections::HashSet<usize> =
        d1.iter().chain(d2.iter()).copied().collect();
    let free: Vec<usize> = (0..dim).filter(|i| !anchored.contains(i)).collect();
    let budget = 16.0 * n_tiny as f64 / (kappa0 * kappa0);
    // l_j contributes 4^{l_j} when positive; count sequences by DFS.
    fn count(free_left: usize, budget_left: f64) -> u128 {
        if free_left == 0 {
            return 1;
        }
        // l = 0 costs nothing
        let mut total = count(free_left - 1, budget_left);
        let mut l = 1u32;
        loop {
            let cost = 4f64.powi(l as i32);
            if cost > budget_left {
                break;
            }
            total += count(free_left - 1, budget_left - cost);
            l += 1;
        }
        total
    }
    let family_size = count(free.len(), budget);
    let bound = kappa.powi(2 * n_tiny as i32);
    Ok(CoveringFamilyReport {
        n_tiny,
        free_coords: free.len(),
        budget,
        family_size,
        bound,
        within_bound: (family_size as f64) <= bound,
        box_scale: kappa0 / (4.0 * eps),
    })
}
