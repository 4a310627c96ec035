use crate::error::{Error, Result};
use crate::model::Configuration;

/// Base-(α+1) bijection between configurations and `0..(α+1)^{N−1}`.
/// Site 1 is the least significant digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateIndex {
    alpha: u32,
    sites: usize,
    len: usize,
}

impl StateIndex {
    pub fn new(alpha: u32, sites: usize, cap: usize) -> Result<Self> {
        if alpha == 0 || sites == 0 {
            return Err(Error::invalid("state index needs alpha ≥ 1 and at least one site"));
        }
        let base = alpha as u128 + 1;
        let mut states: u128 = 1;
        for _ in 0..sites {
            states = match states.checked_mul(base) {
                Some(s) => s,
                None => return Err(Error::Capacity { states: u128::MAX, cap }),
            };
        }
        if states > cap as u128 {
            return Err(Error::Capacity { states, cap });
        }
        Ok(Self { alpha, sites, len: states as usize })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn encode(&self, config: &Configuration) -> Result<usize> {
        if config.sites() != self.sites || config.alpha() != self.alpha {
            return Err(Error::invalid("configuration does not match the state index"));
        }
        let base = self.alpha as usize + 1;
        Ok(config.as_slice().iter().rev().fold(0, |acc, &v| acc * base + v as usize))
    }

    /// Panics if `index ≥ len()`.
    pub fn decode(&self, index: usize) -> Configuration {
        assert!(index < self.len, "state index {index} out of range");
        let base = self.alpha as usize + 1;
        let mut rest = index;
        let mut occ = alloc::vec::Vec::with_capacity(self.sites);
        for _ in 0..self.sites {
            occ.push((rest % base) as u32);
            rest /= base;
        }
        Configuration::new(self.alpha, occ).expect("decoded digits are within range")
    }
}
