//! Ensemble-mean empirical profiles against the hydrodynamic PDE, over a
//! list of system sizes.

use serde::Serialize;

use sep_core::{bc_from_theta, solve, BoundaryConditionSpec};

use crate::config::{Metric, RunConfig};
use crate::ensemble::ensemble_profiles;
use crate::error::Result;
use crate::metrics::{distance, l1, l1_std_err};
use crate::report::Check;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricValue {
    pub metric: Metric,
    pub value: f64,
}

/// One system size at one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub t: f64,
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    pub reference: Vec<f64>,
    pub errors: Vec<MetricValue>,
    pub l1: f64,
    pub l1_std_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub bc: BoundaryConditionSpec,
    pub bin_centers: Vec<f64>,
    pub tolerance: f64,
    pub rows: Vec<ConvergenceRow>,
    pub checks: Vec<Check>,
}

/// Tolerance on the L¹ error at the largest system size.
pub fn l1_tolerance(config: &RunConfig) -> f64 {
    config.plan.l1_tolerance.unwrap_or(0.03 * config.model.alpha as f64)
}

/// Rows in `N`-major order; returns the rows for checkpoint `k`.
fn rows_at(rows: &[ConvergenceRow], times: usize, k: usize) -> impl Iterator<Item = &ConvergenceRow> {
    rows.iter().skip(k).step_by(times)
}

/// For every checkpoint: the L¹ error is non-increasing along the `N` list up
/// to one standard error of the difference, and the error at the largest `N`
/// is below `tolerance`.
pub fn convergence_checks(rows: &[ConvergenceRow], times: &[f64], tolerance: f64) -> Vec<Check> {
    let mut checks = Vec::new();
    for (k, &t) in times.iter().enumerate() {
        let series: Vec<&ConvergenceRow> = rows_at(rows, times.len(), k).collect();
        for w in series.windows(2) {
            let slack = (w[0].l1_std_err.powi(2) + w[1].l1_std_err.powi(2)).sqrt();
            checks.push(Check::at_most(
                format!("l1 non-increasing t={t} N={}->{}", w[0].n, w[1].n),
                w[1].l1 - w[0].l1,
                slack,
            ));
        }
        if let Some(last) = series.last() {
            checks.push(Check::at_most(format!("l1 at N={} t={t}", last.n), last.l1, tolerance));
        }
    }
    checks
}

pub fn hydrodynamic_convergence(config: &RunConfig) -> Result<ConvergenceReport> {
    hydrodynamic_convergence_with(config, true)
}

pub fn hydrodynamic_convergence_with(config: &RunConfig, parallel: bool) -> Result<ConvergenceReport> {
    let base = config.params()?;
    let alpha = base.alpha() as f64;
    let times = &config.time.checkpoints;
    let bins = config.numeric.bins;
    let bc = bc_from_theta(&base);
    let pde = solve(&bc, &config.initial, alpha, times, config.numeric.grid, config.numeric.time_step())?;
    let references: Vec<Vec<f64>> = (0..times.len()).map(|k| pde.bin_average(k, bins)).collect();
    let mut rows = Vec::new();
    for &n in &config.plan.n_list {
        let params = base.with_n(n)?;
        let ens = ensemble_profiles(&params, &config.initial, times, bins, config.ensemble.runs, config.ensemble.seed, parallel)?;
        for (k, stats) in ens.stats.into_iter().enumerate() {
            let reference = references[k].clone();
            let errors = config
                .plan
                .metrics
                .iter()
                .map(|&m| MetricValue { metric: m, value: distance(m, &stats.mean, &reference) })
                .collect();
            rows.push(ConvergenceRow {
                n,
                t: times[k],
                l1: l1(&stats.mean, &reference),
                l1_std_err: l1_std_err(&stats.std_err),
                mean: stats.mean,
                std_err: stats.std_err,
                reference,
                errors,
            });
        }
    }
    let tolerance = l1_tolerance(config);
    let checks = convergence_checks(&rows, times, tolerance);
    Ok(ConvergenceReport { bc, bin_centers: bin_centers(bins), tolerance, rows, checks })
}

fn bin_centers(bins: usize) -> Vec<f64> {
    (0..bins).map(|j| (j as f64 + 0.5) / bins as f64).collect()
}
