use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Occupation numbers `η(x)`, `x ∈ {1, …, N−1}`, each in `{0, …, α}`.
///
/// Public accessors take lattice coordinates; storage is zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Configuration {
    alpha: u32,
    occupancy: Vec<u32>,
}

impl Configuration {
    pub fn new(alpha: u32, occupancy: Vec<u32>) -> Result<Self> {
        if occupancy.is_empty() {
            return Err(Error::invalid("configuration needs at least one site"));
        }
        if let Some((i, &v)) = occupancy.iter().enumerate().find(|(_, &v)| v > alpha) {
            return Err(Error::InvalidArgument(alloc::format!(
                "occupancy {v} at site {} exceeds alpha = {alpha}",
                i + 1
            )));
        }
        Ok(Self { alpha, occupancy })
    }

    /// Every site holds `value` particles (clamped to α).
    pub fn filled(alpha: u32, sites: usize, value: u32) -> Self {
        Self { alpha, occupancy: alloc::vec![value.min(alpha); sites] }
    }

    pub fn empty(alpha: u32, sites: usize) -> Self {
        Self::filled(alpha, sites, 0)
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// Number of sites, `N − 1`.
    pub fn sites(&self) -> usize {
        self.occupancy.len()
    }

    /// `η(x)` for `x ∈ {1, …, N−1}`. Panics outside that range.
    #[inline]
    pub fn get(&self, x: usize) -> u32 {
        self.occupancy[x - 1]
    }

    #[inline]
    pub(crate) fn set(&mut self, x: usize, v: u32) {
        debug_assert!(v <= self.alpha);
        self.occupancy[x - 1] = v;
    }

    /// Zero-based view (index `i` holds site `i + 1`).
    pub fn as_slice(&self) -> &[u32] {
        &self.occupancy
    }

    /// Total number of particles.
    pub fn mass(&self) -> u64 {
        self.occupancy.iter().map(|&v| v as u64).sum()
    }

    pub fn is_valid(&self) -> bool {
        self.occupancy.iter().all(|&v| v <= self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_access() {
        let c = Configuration::new(2, alloc::vec![0, 1, 2]).unwrap();
        assert_eq!(c.get(1), 0);
        assert_eq!(c.get(3), 2);
        assert_eq!(c.mass(), 3);
        assert_eq!(c.sites(), 3);
    }

    #[test]
    fn rejects_overfull_site() {
        assert!(Configuration::new(1, alloc::vec![0, 2]).is_err());
        assert!(Configuration::new(1, alloc::vec![]).is_err());
    }
}
