//! Binomial intervals and goodness-of-fit helpers.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// z for a two-sided 95% interval.
pub const Z95: f64 = 1.959963984540054;

/// Wilson score interval for `hits / trials`.
pub fn wilson(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if hits == 0 { 0.0 } else { (center - half).max(0.0).min(p) };
    let hi = if hits == trials { 1.0 } else { (center + half).min(1.0).max(p) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub critical: f64,
    pub level: f64,
    pub pass: bool,
}

/// Pearson test of observed counts against equal cell probabilities.
pub fn chi_square_uniform(observed: &[u64], level: f64) -> ChiSquareResult {
    let total: u64 = observed.iter().sum();
    let k = observed.len();
    let expected = total as f64 / k.max(1) as f64;
    let statistic = if expected > 0.0 {
        observed.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum()
    } else {
        0.0
    };
    let df = k.saturating_sub(1);
    let critical = if df == 0 {
        0.0
    } else {
        ChiSquared::new(df as f64).expect("df >= 1").inverse_cdf(level)
    };
    ChiSquareResult { statistic, df, critical, level, pass: df == 0 || statistic < critical }
}

/// Total-variation distance between two probability vectors.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}
