//! Time-integrated replacement discrepancies along trajectories: the left
//! boundary site against the reservoir density, and a site against the mean
//! of the `⌊εN⌋` sites next to it.

use serde::Serialize;

use sep_core::{windowed_average, Configuration, Direction, Event, ModelParams, Observer};

use crate::config::RunConfig;
use crate::ensemble::{member_state, run_members, MeanSe};
use crate::error::Result;
use crate::report::Check;

/// `η(z) − windowed_average(z, len)` for a single configuration.
pub fn averaging_discrepancy(config: &Configuration, z: usize, len: usize, direction: Direction) -> Result<f64> {
    Ok(config.get(z) as f64 - windowed_average(config, z, len, direction)?)
}

/// Window length `⌊εN⌋`, checked to fit on the side it averages over.
pub fn window_len(params: &ModelParams, epsilon: f64) -> Result<usize> {
    let len = (epsilon * params.n() as f64).floor() as usize;
    if len == 0 || len + 1 > params.sites() {
        return Err(sep_core::Error::InvalidArgument(format!(
            "window ⌊εN⌋ = {len} for ε = {epsilon} does not fit in {} sites",
            params.sites()
        ))
        .into());
    }
    Ok(len)
}

/// Running window sums next to each boundary site, updated per jump.
struct Integrator {
    sites: usize,
    rho_minus: f64,
    lens: Vec<usize>,
    right_sums: Vec<i64>,
    left_sums: Vec<i64>,
    micro_to_macro: f64,
    boundary: f64,
    right: Vec<f64>,
    left: Vec<f64>,
}

impl Integrator {
    fn new(params: &ModelParams, lens: Vec<usize>, config: &Configuration) -> Self {
        let sites = params.sites();
        let sum = |range: std::ops::RangeInclusive<usize>| range.map(|y| config.get(y) as i64).sum::<i64>();
        let right_sums = lens.iter().map(|&l| sum(2..=1 + l)).collect();
        let left_sums = lens.iter().map(|&l| sum(sites - l..=sites - 1)).collect();
        let n = params.n() as f64;
        Self {
            sites,
            rho_minus: params.rho_minus(),
            right: vec![0.0; lens.len()],
            left: vec![0.0; lens.len()],
            lens,
            right_sums,
            left_sums,
            micro_to_macro: 1.0 / (n * n),
            boundary: 0.0,
        }
    }

    fn change(&mut self, y: usize, delta: i64) {
        for (i, &l) in self.lens.iter().enumerate() {
            if (2..=1 + l).contains(&y) {
                self.right_sums[i] += delta;
            }
            if (self.sites - l..self.sites).contains(&y) {
                self.left_sums[i] += delta;
            }
        }
    }
}

impl Observer for Integrator {
    fn hold(&mut self, config: &Configuration, micro_dt: f64) {
        let ds = micro_dt * self.micro_to_macro;
        let first = config.get(1) as f64;
        let last = config.get(self.sites) as f64;
        self.boundary += (self.rho_minus - first) * ds;
        for (i, &l) in self.lens.iter().enumerate() {
            self.right[i] += (first - self.right_sums[i] as f64 / l as f64) * ds;
            self.left[i] += (last - self.left_sums[i] as f64 / l as f64) * ds;
        }
    }

    fn jump(&mut self, event: Event, _config: &Configuration) {
        match event {
            Event::BulkRight(x) => {
                self.change(x, -1);
                self.change(x + 1, 1);
            }
            Event::BulkLeft(x) => {
                self.change(x + 1, -1);
                self.change(x, 1);
            }
            Event::InjectRight => self.change(self.sites, 1),
            Event::RemoveRight => self.change(self.sites, -1),
            Event::InjectLeft | Event::RemoveLeft => {}
        }
    }
}

/// Ensemble mean and standard error of an absolute time integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let (mean, std_err) = MeanSe::scalar(values.into_iter().map(f64::abs));
        Self { mean, std_err }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowEstimate {
    pub epsilon: f64,
    pub len: usize,
    /// Site 1 against the sites to its right.
    pub right: Estimate,
    /// Site `N−1` against the sites to its left.
    pub left: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub n: usize,
    /// `E|∫₀ᵗ (ρ₋ − η(1)) ds|`; absent when θ ≥ 1.
    pub boundary: Option<Estimate>,
    pub windows: Vec<WindowEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub t: f64,
    pub theta: f64,
    pub rows: Vec<DiagnosticsRow>,
    pub checks: Vec<Check>,
}

fn non_increasing(name: String, before: Estimate, after: Estimate) -> Check {
    let slack = (before.std_err.powi(2) + after.std_err.powi(2)).sqrt();
    Check::at_most(name, after.mean - before.mean, slack)
}

/// Runs the ensemble to the last checkpoint at every `N` of the plan.
pub fn replacement_diagnostics(config: &RunConfig) -> Result<DiagnosticsReport> {
    let base = config.params()?;
    let t = *config.time.checkpoints.last().expect("validated non-empty");
    let with_boundary = base.theta() < 1.0;
    let mut rows = Vec::new();
    for &n in &config.plan.n_list {
        let params = base.with_n(n)?;
        let lens = config.plan.epsilons.iter().map(|&e| window_len(&params, e)).collect::<Result<Vec<_>>>()?;
        let members = run_members(config.ensemble.runs, true, |k| {
            let mut state = member_state(&params, &config.initial, config.ensemble.seed, k)?;
            let mut obs = Integrator::new(&params, lens.clone(), state.config());
            state.advance_to(t, &mut obs)?;
            Ok(obs)
        })?;
        let windows = config
            .plan
            .epsilons
            .iter()
            .zip(&lens)
            .enumerate()
            .map(|(i, (&epsilon, &len))| WindowEstimate {
                epsilon,
                len,
                right: Estimate::of(members.iter().map(|m| m.right[i])),
                left: Estimate::of(members.iter().map(|m| m.left[i])),
            })
            .collect();
        let boundary = with_boundary.then(|| Estimate::of(members.iter().map(|m| m.boundary)));
        rows.push(DiagnosticsRow { n, boundary, windows });
    }
    let checks = diagnostics_checks(&rows, &config.plan.epsilons);
    Ok(DiagnosticsReport { t, theta: base.theta(), rows, checks })
}

/// Non-increasing up to one standard error of the difference: the boundary
/// estimate and each window estimate along `N`, and the window estimate as ε
/// decreases at the largest `N`.
pub fn diagnostics_checks(rows: &[DiagnosticsRow], epsilons: &[f64]) -> Vec<Check> {
    let mut checks = Vec::new();
    for w in rows.windows(2) {
        if let (Some(a), Some(b)) = (w[0].boundary, w[1].boundary) {
            checks.push(non_increasing(format!("boundary N={}->{}", w[0].n, w[1].n), a, b));
        }
        for (i, &e) in epsilons.iter().enumerate() {
            checks.push(non_increasing(
                format!("averaging eps={e} N={}->{}", w[0].n, w[1].n),
                w[0].windows[i].right,
                w[1].windows[i].right,
            ));
        }
    }
    if let Some(last) = rows.last() {
        let mut order: Vec<&WindowEstimate> = last.windows.iter().collect();
        order.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
        for w in order.windows(2) {
            checks.push(non_increasing(
                format!("averaging N={} eps={}->{}", last.n, w[0].epsilon, w[1].epsilon),
                w[0].right,
                w[1].right,
            ));
        }
    }
    checks
}
