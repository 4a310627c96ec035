//! Independent replicas of the chain, run in parallel and reduced serially in
//! member order so results do not depend on scheduling.

use rayon::prelude::*;

use sep_core::{rng, sample_initial, ModelParams, Profile, SimulationState};

use crate::error::Result;

const INIT_PURPOSE: u64 = 1;
const DYNAMICS_PURPOSE: u64 = 2;

/// Stream tag for one purpose at one system size, so ensembles at different
/// `N` never share randomness.
fn tag(purpose: u64, n: usize) -> u64 {
    (purpose << 32) | n as u64
}

/// Member `k` of the ensemble seeded by `seed`: initial configuration drawn
/// from the product measure of `initial`, dynamics on its own stream.
pub fn member_state(params: &ModelParams, initial: &Profile, seed: u64, k: usize) -> Result<SimulationState> {
    let n = params.n();
    let config = sample_initial(params, initial, &mut rng::stream(seed, tag(INIT_PURPOSE, n), k as u64))?;
    let dynamics = rng::stream(seed, tag(DYNAMICS_PURPOSE, n), k as u64);
    Ok(SimulationState::with_rng(params.clone(), config, dynamics, seed)?)
}

/// Runs `job` on members `0..runs` and returns the results in member order.
pub fn run_members<T, F>(runs: usize, parallel: bool, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    if parallel {
        (0..runs).into_par_iter().map(&job).collect()
    } else {
        (0..runs).map(job).collect()
    }
}

/// Per-coordinate sample mean and standard error of the mean, accumulated in
/// the order the samples are given.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MeanSe {
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    pub samples: usize,
}

impl MeanSe {
    pub fn from_samples<'a, I>(samples: I) -> Self
    where
        I: IntoIterator<Item = &'a [f64]>,
        I::IntoIter: Clone,
    {
        let iter = samples.into_iter();
        let mut count = 0usize;
        let mut sum: Vec<f64> = Vec::new();
        for s in iter.clone() {
            if sum.is_empty() {
                sum = vec![0.0; s.len()];
            }
            assert_eq!(s.len(), sum.len(), "samples of different length");
            for (a, b) in sum.iter_mut().zip(s) {
                *a += b;
            }
            count += 1;
        }
        if count == 0 {
            return Self { mean: Vec::new(), std_err: Vec::new(), samples: 0 };
        }
        let mean: Vec<f64> = sum.iter().map(|s| s / count as f64).collect();
        let mut sq = vec![0.0; mean.len()];
        for s in iter {
            for ((a, b), m) in sq.iter_mut().zip(s).zip(&mean) {
                *a += (b - m) * (b - m);
            }
        }
        let std_err = if count > 1 {
            sq.iter().map(|q| (q / (count - 1) as f64 / count as f64).sqrt()).collect()
        } else {
            vec![f64::INFINITY; mean.len()]
        };
        Self { mean, std_err, samples: count }
    }

    pub fn scalar<I: IntoIterator<Item = f64>>(values: I) -> (f64, f64) {
        let v: Vec<[f64; 1]> = values.into_iter().map(|x| [x]).collect();
        let s = Self::from_samples(v.iter().map(|x| &x[..]));
        match s.samples {
            0 => (f64::NAN, f64::INFINITY),
            _ => (s.mean[0], s.std_err[0]),
        }
    }
}

/// Ensemble-averaged binned profiles of one parameter set.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EnsembleProfiles {
    pub n: usize,
    pub times: Vec<f64>,
    pub centers: Vec<f64>,
    /// One entry per sample time.
    pub stats: Vec<MeanSe>,
    pub events: u64,
}

/// Runs `runs` members to each time in `times` and averages their binned
/// profiles.
pub fn ensemble_profiles(
    params: &ModelParams,
    initial: &Profile,
    times: &[f64],
    bins: usize,
    runs: usize,
    seed: u64,
    parallel: bool,
) -> Result<EnsembleProfiles> {
    let records = run_members(runs, parallel, |k| {
        let mut state = member_state(params, initial, seed, k)?;
        Ok(state.record_trajectory(times, bins, Default::default())?)
    })?;
    let stats = (0..times.len())
        .map(|i| MeanSe::from_samples(records.iter().map(|r| &r.profiles[i].values[..])))
        .collect();
    let centers = (0..bins).map(|j| (j as f64 + 0.5) / bins as f64).collect();
    Ok(EnsembleProfiles {
        n: params.n(),
        times: times.to_vec(),
        centers,
        stats,
        events: records.iter().map(|r| r.event_count).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(1, 30, 0.0, 0.8, 0.2, 0.8, 0.2).unwrap()
    }

    #[test]
    fn parallel_and_serial_agree_exactly() {
        let p = params();
        let g = Profile::linear(0.2, 0.9);
        let a = ensemble_profiles(&p, &g, &[0.01, 0.02], 5, 12, 7, true).unwrap();
        let b = ensemble_profiles(&p, &g, &[0.01, 0.02], 5, 12, 7, false).unwrap();
        assert_eq!(a, b);
        let c = ensemble_profiles(&p, &g, &[0.01, 0.02], 5, 12, 8, true).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn members_differ_and_sizes_do_not_share_streams() {
        let p = params();
        let g = Profile::constant(0.5);
        let a = member_state(&p, &g, 1, 0).unwrap();
        let b = member_state(&p, &g, 1, 1).unwrap();
        assert_ne!(a.config(), b.config());
        assert_ne!(tag(INIT_PURPOSE, 100), tag(DYNAMICS_PURPOSE, 100));
        assert_ne!(tag(INIT_PURPOSE, 100), tag(INIT_PURPOSE, 200));
    }

    #[test]
    fn mean_and_standard_error() {
        let rows = [[1.0, 0.0], [3.0, 0.0], [5.0, 0.0]];
        let s = MeanSe::from_samples(rows.iter().map(|r| &r[..]));
        assert_eq!(s.mean, vec![3.0, 0.0]);
        assert!((s.std_err[0] - (4.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.std_err[1], 0.0);
        let (m, se) = MeanSe::scalar([2.0]);
        assert_eq!(m, 2.0);
        assert!(se.is_infinite());
    }
}
