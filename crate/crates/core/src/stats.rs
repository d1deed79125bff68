//! Exact binomial confidence intervals and log-log scaling fits.

use serde::Serialize;
use statrs::distribution::{Beta, ContinuousCDF};

/// Beta quantile by bisection on the (accurate) regularized incomplete beta
/// CDF; the library's own `inverse_cdf` stops near 1e-6 which is too coarse
/// for interval endpoints.
fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    let dist = Beta::new(a, b).expect("beta parameters");
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if dist.cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided Clopper-Pearson interval for k successes out of n at the given
/// confidence level (e.g. 0.99). Exact, no normal approximation.
pub fn clopper_pearson(k: u64, n: u64, confidence: f64) -> (f64, f64) {
    assert!(k <= n && n > 0);
    assert!((0.0..1.0).contains(&confidence) && confidence > 0.0);
    let alpha = 1.0 - confidence;
    let lo = if k == 0 { 0.0 } else { beta_quantile(k as f64, (n - k + 1) as f64, alpha / 2.0) };
    let hi =
        if k == n { 1.0 } else { beta_quantile((k + 1) as f64, (n - k) as f64, 1.0 - alpha / 2.0) };
    (lo, hi)
}

/// One Monte Carlo estimate row: hits, trials, point estimate and exact CI.
#[derive(Debug, Clone, Serialize)]
pub struct BinomEstimate {
    pub k: u64,
    pub n: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BinomEstimate {
    pub fn new(k: u64, n: u64, confidence: f64) -> Self {
        let (ci_low, ci_high) = clopper_pearson(k, n, confidence);
        BinomEstimate { k, n, p_hat: k as f64 / n as f64, ci_low, ci_high }
    }

    /// Slope fits only use rows whose CI is narrow relative to the estimate.
    pub fn ci_qualified(&self, max_rel_width: f64) -> bool {
        self.k > 0 && (self.ci_high - self.ci_low) < max_rel_width * self.p_hat
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub stderr: f64,
    /// exp(intercept): the fitted leading constant of p ~ C eps^slope.
    pub constant: f64,
    pub rows_used: usize,
    pub inconclusive: bool,
}

/// Ordinary least squares of log p on log eps over CI-qualified rows.
pub fn fit_scaling(eps: &[f64], estimates: &[BinomEstimate], max_rel_ci_width: f64) -> ScalingFit {
    assert_eq!(eps.len(), estimates.len());
    let pts: Vec<(f64, f64)> = eps
        .iter()
        .zip(estimates)
        .filter(|(_, e)| e.ci_qualified(max_rel_ci_width))
        .map(|(x, e)| (x.ln(), e.p_hat.ln()))
        .collect();
    fit_scaling_points(&pts)
}

/// OLS on pre-logged points; exposed for synthetic checks.
pub fn fit_scaling_points(pts: &[(f64, f64)]) -> ScalingFit {
    if pts.len() < 3 {
        return ScalingFit { slope: f64::NAN, stderr: f64::NAN, constant: f64::NAN, rows_used: pts.len(), inconclusive: true };
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - (intercept + slope * p.0)).powi(2)).sum();
    let stderr = if pts.len() > 2 { (ss_res / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    ScalingFit { slope, stderr, constant: intercept.exp(), rows_used: pts.len(), inconclusive: false }
}
