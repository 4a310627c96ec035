//! Distances between binned profiles.

use crate::config::Metric;

/// `(1/M) Σ |a_j − b_j|`.
pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64
}

/// `((1/M) Σ (a_j − b_j)²)^{1/2}`.
pub fn l2(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    (a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64).sqrt()
}

pub fn sup(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn distance(metric: Metric, a: &[f64], b: &[f64]) -> f64 {
    match metric {
        Metric::L1 => l1(a, b),
        Metric::L2 => l2(a, b),
        Metric::Sup => sup(a, b),
    }
}

/// Monte Carlo standard error of the L¹ distance between an ensemble mean
/// with per-bin standard errors `se` and a deterministic profile:
/// `(1/M) Σ se_j`, which bounds it.
pub fn l1_std_err(se: &[f64]) -> f64 {
    se.iter().sum::<f64>() / se.len() as f64
}
