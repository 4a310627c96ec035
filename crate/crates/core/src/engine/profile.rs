use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::Configuration;

/// Bin of site `x` among `bins` equal bins `(j/M, (j+1)/M]` of `(0, 1]`,
/// for `u = x/N`.
#[inline]
pub fn bin_of_site(x: usize, n: usize, bins: usize) -> usize {
    // ⌈xM/N⌉ − 1
    (x * bins).div_ceil(n) - 1
}

/// Binned empirical density at one macroscopic time.
///
/// Bin `j` covers `(j/M, (j+1)/M]` and holds the mean occupation of the
/// sites `x` with `x/N` in it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EmpiricalProfile {
    pub macro_time: f64,
    pub centers: Vec<f64>,
    pub values: Vec<f64>,
    /// Number of sites per bin.
    pub counts: Vec<usize>,
}

impl EmpiricalProfile {
    pub fn from_config(config: &Configuration, bins: usize, macro_time: f64) -> Result<Self> {
        let sites = config.sites();
        if bins == 0 || bins > sites {
            return Err(Error::InvalidArgument(alloc::format!(
                "bin count {bins} must lie in 1..={sites}"
            )));
        }
        let n = sites + 1;
        let mut sums = vec![0u64; bins];
        let mut counts = vec![0usize; bins];
        for x in 1..=sites {
            let j = bin_of_site(x, n, bins);
            sums[j] += config.get(x) as u64;
            counts[j] += 1;
        }
        let values = sums.iter().zip(&counts).map(|(&s, &c)| s as f64 / c as f64).collect();
        let centers = (0..bins).map(|j| (j as f64 + 0.5) / bins as f64).collect();
        Ok(Self { macro_time, centers, values, counts })
    }

    pub fn bins(&self) -> usize {
        self.values.len()
    }

    /// Site-count weighted mean, equal to the mean occupation per site.
    pub fn weighted_mean(&self) -> f64 {
        let total: usize = self.counts.iter().sum();
        self.values.iter().zip(&self.counts).map(|(v, &c)| v * c as f64).sum::<f64>() / total as f64
    }
}
