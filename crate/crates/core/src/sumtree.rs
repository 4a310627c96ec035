//! Binary sum tree over non-negative weights: `O(log n)` point updates and
//! `O(log n)` sampling proportional to weight.
//!
//! Internal nodes are recomputed from their children on every update (never
//! adjusted by deltas), so the stored partial sums never drift from what a
//! full rebuild would produce.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct SumTree {
    len: usize,
    cap: usize,
    nodes: Vec<f64>,
}

impl SumTree {
    pub fn new(len: usize) -> Self {
        let cap = len.max(1).next_power_of_two();
        Self { len, cap, nodes: vec![0.0; 2 * cap] }
    }

    pub fn from_weights(weights: &[f64]) -> Self {
        let mut tree = Self::new(weights.len());
        tree.nodes[tree.cap..tree.cap + weights.len()].copy_from_slice(weights);
        tree.rebuild();
        tree
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Recomputes every internal node bottom-up.
    pub fn rebuild(&mut self) {
        for j in (1..self.cap).rev() {
            self.nodes[j] = self.nodes[2 * j] + self.nodes[2 * j + 1];
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.nodes[self.cap + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, w: f64) {
        debug_assert!(i < self.len && w >= 0.0);
        let mut j = self.cap + i;
        self.nodes[j] = w;
        j /= 2;
        while j >= 1 {
            self.nodes[j] = self.nodes[2 * j] + self.nodes[2 * j + 1];
            j /= 2;
        }
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.nodes[1]
    }

    pub fn leaves(&self) -> &[f64] {
        &self.nodes[self.cap..self.cap + self.len]
    }

    /// Index `i` such that the prefix sums bracket `target`, for
    /// `0 ≤ target < total`. Never returns a zero-weight leaf while
    /// `total > 0`.
    #[inline]
    pub fn find(&self, mut target: f64) -> usize {
        let mut j = 1;
        while j < self.cap {
            let left = self.nodes[2 * j];
            let right = self.nodes[2 * j + 1];
            if target < left || right <= 0.0 {
                j *= 2;
            } else {
                target -= left;
                j = 2 * j + 1;
            }
        }
        j - self.cap
    }
}
