//! Monte Carlo checks of the Dynkin martingale: zero mean and
//! `E[M_t²] = E[∫₀ᵗ quadratic-variation rate]`.

use serde::Serialize;

use sep_core::{dynkin_martingale, ModelParams, Profile, TrajectoryOptions};

use crate::config::RunConfig;
use crate::ensemble::{member_state, run_members, MeanSe};
use crate::error::Result;
use crate::report::Check;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleRow {
    pub test_function: usize,
    pub t: f64,
    pub mean: f64,
    pub mean_std_err: f64,
    pub second_moment: f64,
    pub quadratic_variation: f64,
    /// Mean and standard error of `M_t² − ∫₀ᵗ QV`.
    pub excess: f64,
    pub excess_std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleReport {
    pub n: usize,
    pub runs: usize,
    pub test_functions: Vec<Profile>,
    pub rows: Vec<MartingaleRow>,
    pub checks: Vec<Check>,
}

/// Per member, per test function, per time: `(M_t, ∫₀ᵗ QV)`.
fn samples(
    params: &ModelParams,
    config: &RunConfig,
    test_functions: &[Profile],
    times: &[f64],
) -> Result<Vec<Vec<Vec<(f64, f64)>>>> {
    let end = *times.last().expect("non-empty times");
    run_members(config.ensemble.runs, true, |k| {
        let mut state = member_state(params, &config.initial, config.ensemble.seed, k)?;
        let opts = TrajectoryOptions { keep_configs: false, keep_event_log: true };
        let rec = state.record_trajectory(&[end], 1, opts)?;
        test_functions
            .iter()
            .map(|g| {
                let m = dynkin_martingale(&rec, params, |u| g.eval(u), times)?;
                Ok(m.values.into_iter().zip(m.quadratic_variation).collect())
            })
            .collect()
    })
}

/// Runs the suite at the largest `N` of the plan, at every checkpoint.
pub fn martingale_suite(config: &RunConfig) -> Result<MartingaleReport> {
    let n = *config.plan.n_list.last().expect("validated non-empty");
    let params = config.params()?.with_n(n)?;
    let times = &config.time.checkpoints;
    let gs = &config.plan.test_functions;
    let data = samples(&params, config, gs, times)?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for gi in 0..gs.len() {
        for (ti, &t) in times.iter().enumerate() {
            let pairs = || data.iter().map(move |m| m[gi][ti]);
            let (mean, mean_std_err) = MeanSe::scalar(pairs().map(|p| p.0));
            let (second_moment, _) = MeanSe::scalar(pairs().map(|p| p.0 * p.0));
            let (quadratic_variation, _) = MeanSe::scalar(pairs().map(|p| p.1));
            let (excess, excess_std_err) = MeanSe::scalar(pairs().map(|p| p.0 * p.0 - p.1));
            checks.push(Check::at_most(format!("G{gi} t={t} |mean|"), mean.abs(), 3.0 * mean_std_err));
            checks.push(Check::at_most(format!("G{gi} t={t} |E[M^2] - E[QV]|"), excess.abs(), 3.0 * excess_std_err));
            rows.push(MartingaleRow {
                test_function: gi,
                t,
                mean,
                mean_std_err,
                second_moment,
                quadratic_variation,
                excess,
                excess_std_err,
            });
        }
    }
    Ok(MartingaleReport { n, runs: config.ensemble.runs, test_functions: gs.clone(), rows, checks })
}

/// Sample variance of `M_t(G)` at system size `n`.
pub fn martingale_variance(config: &RunConfig, n: usize, g: &Profile, t: f64) -> Result<f64> {
    let params = config.params()?.with_n(n)?;
    let data = samples(&params, config, std::slice::from_ref(g), &[t])?;
    let values: Vec<f64> = data.iter().map(|m| m[0][0].0).collect();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() as f64 - 1.0))
}
