use alloc::vec::Vec;

use super::StateIndex;
use crate::error::Result;
use crate::model::{apply_event, event_rate, Event, ModelParams};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// The generator `𝓛_N` as a sparse matrix: `L(η, ξ)` is the total rate of
/// jumps from `η` to `ξ ≠ η`, and `L(η, η)` is minus the exit rate.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    index: StateIndex,
    /// Off-diagonal entries per row, sorted by column, duplicates merged.
    rows: Vec<Vec<(usize, f64)>>,
    diagonal: Vec<f64>,
}

pub fn generator_matrix(params: &ModelParams) -> Result<GeneratorMatrix> {
    generator_matrix_with_cap(params, DEFAULT_STATE_CAP)
}

pub fn generator_matrix_with_cap(params: &ModelParams, cap: usize) -> Result<GeneratorMatrix> {
    generator_from_events(params, cap, |_| true)
}

pub(crate) fn generator_from_events(
    params: &ModelParams,
    cap: usize,
    keep: impl Fn(Event) -> bool,
) -> Result<GeneratorMatrix> {
    let index = StateIndex::new(params.alpha(), params.sites(), cap)?;
    let events: Vec<Event> = Event::all(params.n()).filter(|&e| keep(e)).collect();
    let mut rows = Vec::with_capacity(index.len());
    let mut diagonal = Vec::with_capacity(index.len());
    for i in 0..index.len() {
        let c = index.decode(i);
        let mut row: Vec<(usize, f64)> = Vec::new();
        for &e in &events {
            let r = event_rate(params, &c, e);
            if r <= 0.0 {
                continue;
            }
            let j = index.encode(&apply_event(&c, e))?;
            if j != i {
                row.push((j, r));
            }
        }
        row.sort_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
        for (j, r) in row {
            match merged.last_mut() {
                Some(last) if last.0 == j => last.1 += r,
                _ => merged.push((j, r)),
            }
        }
        diagonal.push(-merged.iter().map(|&(_, r)| r).sum::<f64>());
        rows.push(merged);
    }
    Ok(GeneratorMatrix { index, rows, diagonal })
}

impl GeneratorMatrix {
    pub fn index(&self) -> &StateIndex {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diagonal[i];
        }
        self.rows[i].binary_search_by_key(&j, |&(c, _)| c).map_or(0.0, |k| self.rows[i][k].1)
    }

    pub fn off_diagonal(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn diagonal(&self, i: usize) -> f64 {
        self.diagonal[i]
    }

    /// `(𝓛f)(η) = Σ_ξ L(η,ξ) f(ξ)`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.dim());
        (0..self.dim())
            .map(|i| {
                self.diagonal[i] * f[i] + self.rows[i].iter().map(|&(j, r)| r * f[j]).sum::<f64>()
            })
            .collect()
    }

    /// `(μ𝓛)(ξ) = Σ_η μ(η) L(η,ξ)`.
    pub fn left_apply(&self, mu: &[f64]) -> Vec<f64> {
        assert_eq!(mu.len(), self.dim());
        let mut out: Vec<f64> = mu.iter().zip(&self.diagonal).map(|(m, d)| m * d).collect();
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, r) in row {
                out[j] += mu[i] * r;
            }
        }
        out
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut d = alloc::vec![0.0; n * n];
        for i in 0..n {
            d[i * n + i] = self.diagonal[i];
            for &(j, r) in &self.rows[i] {
                d[i * n + j] = r;
            }
        }
        d
    }

    pub fn max_exit_rate(&self) -> f64 {
        self.diagonal.iter().fold(0.0, |m, &d| m.max(-d))
    }

    /// `max_η |Σ_ξ L(η,ξ)|`.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.dim())
            .map(|i| (self.diagonal[i] + self.rows[i].iter().map(|&(_, r)| r).sum::<f64>()).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn two_site_chain() {
        let (e, g, b, d) = (0.7, 0.4, 1.3, 0.2);
        let p = ModelParams::new(1, 2, 0.0, e, g, b, d).unwrap();
        let m = generator_matrix(&p).unwrap();
        let expected = [-(e + d), e + d, g + b, -(g + b)];
        for (a, x) in m.to_dense().iter().zip(expected) {
            assert!((a - x).abs() < 1e-15);
        }
    }

    #[test]
    fn rows_sum_to_zero_and_constants_are_annihilated() {
        for (alpha, n, theta) in [(1u32, 5usize, 0.0), (2, 4, 1.0), (3, 3, -1.0), (2, 6, 2.5)] {
            let p = ModelParams::new(alpha, n, theta, 0.5, 1.5, 0.9, 0.3).unwrap();
            let m = generator_matrix(&p).unwrap();
            assert!(m.max_row_sum() < 1e-12);
            for i in 0..m.dim() {
                assert!(m.off_diagonal(i).iter().all(|&(j, r)| j != i && r > 0.0));
            }
            assert!(m.apply(&alloc::vec![1.0; m.dim()]).iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn matches_generator_action() {
        // (𝓛f)(η) = Σ_e rate_e [f(η^e) − f(η)] for an arbitrary f.
        let p = ModelParams::new(2, 4, 0.5, 0.5, 1.5, 0.9, 0.3).unwrap();
        let m = generator_matrix(&p).unwrap();
        let idx = *m.index();
        let f: Vec<f64> = (0..m.dim()).map(|i| libm::sin(i as f64 * 1.7)).collect();
        let lf = m.apply(&f);
        for i in 0..m.dim() {
            let c = idx.decode(i);
            let direct: f64 = Event::all(p.n())
                .map(|e| event_rate(&p, &c, e) * (f[idx.encode(&apply_event(&c, e)).unwrap()] - f[i]))
                .sum();
            assert!((lf[i] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn capacity_error() {
        let p = ModelParams::new(1, 25, 0.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(generator_matrix(&p), Err(Error::Capacity { .. })));
        assert!(matches!(generator_matrix_with_cap(&p.with_n(5).unwrap(), 8), Err(Error::Capacity { .. })));
    }
}
