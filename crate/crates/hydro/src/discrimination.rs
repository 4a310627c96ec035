//! Which boundary condition does the particle system pick: θ-sweeps at the
//! largest system size compared against all three PDE families.

use serde::Serialize;

use sep_core::{bc_from_theta, solve, BoundaryConditionSpec, Configuration, Event, Observer};

use crate::config::RunConfig;
use crate::ensemble::{member_state, run_members, MeanSe};
use crate::error::{HydroError, Result};
use crate::metrics::l1;
use crate::report::Check;

/// Counts reservoir jumps.
#[derive(Debug, Default)]
struct BoundaryCounter(u64);

impl Observer for BoundaryCounter {
    fn jump(&mut self, event: Event, _config: &Configuration) {
        if event.is_boundary() {
            self.0 += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distances {
    pub dirichlet: f64,
    pub robin: f64,
    pub neumann: f64,
}

impl Distances {
    fn get(&self, family: &str) -> f64 {
        match family {
            "dirichlet" => self.dirichlet,
            "robin" => self.robin,
            _ => self.neumann,
        }
    }

    /// Whether `family` is strictly closer than both others.
    pub fn strictly_closest(&self, family: &str) -> bool {
        let own = self.get(family);
        ["dirichlet", "robin", "neumann"].iter().filter(|&&f| f != family).all(|&f| own < self.get(f))
    }
}

/// Particle-number bookkeeping summed over the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassBalance {
    /// `Σ_r (mass at t − mass at 0)`.
    pub total_change: i64,
    /// `Σ_r` number of reservoir events in `[0, t]`.
    pub boundary_events: u64,
}

impl MassBalance {
    /// Standard deviation of the net change if every reservoir event were an
    /// independent ±1 step.
    pub fn sigma(&self) -> f64 {
        (self.boundary_events as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaRow {
    pub theta: f64,
    pub own: &'static str,
    pub mean: Vec<f64>,
    pub std_err: Vec<f64>,
    pub distances: Distances,
    pub mass: MassBalance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminationReport {
    pub n: usize,
    pub t: f64,
    pub references: Vec<(BoundaryConditionSpec, Vec<f64>)>,
    /// L¹ distance between the Dirichlet and Neumann references.
    pub dirichlet_neumann: f64,
    /// Mass drift of the Neumann solution from a non-constant start.
    pub neumann_mass_drift: f64,
    pub rows: Vec<ThetaRow>,
    pub checks: Vec<Check>,
}

/// Runs the ensemble at the largest `N` of the plan for each θ of the plan and
/// evaluates at the last checkpoint.
pub fn boundary_condition_discrimination(config: &RunConfig) -> Result<DiscriminationReport> {
    let base = config.params()?;
    if base.rho_minus() == base.rho_plus() {
        return Err(HydroError::config("model", "discrimination needs distinct reservoir densities"));
    }
    let n = *config.plan.n_list.last().expect("validated non-empty");
    let base = base.with_n(n)?;
    let alpha = base.alpha() as f64;
    let t = *config.time.checkpoints.last().expect("validated non-empty");
    let bins = config.numeric.bins;
    let (grid, dt) = (config.numeric.grid, config.numeric.time_step());

    let families = [base.with_theta(0.0)?, base.with_theta(1.0)?, base.with_theta(2.0)?].map(|p| bc_from_theta(&p));
    let mut references = Vec::new();
    for bc in families {
        let sol = solve(&bc, &config.initial, alpha, &[t], grid, dt)?;
        references.push((bc, sol.bin_average(0, bins)));
    }
    let dirichlet_neumann = l1(&references[0].1, &references[2].1);

    // Mass conservation of the Neumann flow from a non-constant profile.
    let bumpy = sep_core::Profile::Harmonic { offset: 0.5 * alpha, slope: 0.0, cos_amp: 0.3 * alpha, sin_amp: 0.1 * alpha, freq: 3.0 };
    let neumann = solve(&BoundaryConditionSpec::Neumann, &bumpy, alpha, &[0.0, t], grid, dt)?;
    let neumann_mass_drift = (neumann.mass(1) - neumann.mass(0)).abs();

    let mut rows = Vec::new();
    for &theta in &config.plan.thetas {
        let params = base.with_theta(theta)?;
        let own = bc_from_theta(&params).name();
        let members = run_members(config.ensemble.runs, true, |k| {
            let mut state = member_state(&params, &config.initial, config.ensemble.seed, k)?;
            let start = state.config().mass() as i64;
            let mut counter = BoundaryCounter::default();
            state.advance_to(t, &mut counter)?;
            let profile = state.snapshot_profile(bins)?;
            Ok((profile.values, state.config().mass() as i64 - start, counter.0))
        })?;
        let stats = MeanSe::from_samples(members.iter().map(|m| &m.0[..]));
        let distances = Distances {
            dirichlet: l1(&stats.mean, &references[0].1),
            robin: l1(&stats.mean, &references[1].1),
            neumann: l1(&stats.mean, &references[2].1),
        };
        let mass = MassBalance {
            total_change: members.iter().map(|m| m.1).sum(),
            boundary_events: members.iter().map(|m| m.2).sum(),
        };
        rows.push(ThetaRow { theta, own, mean: stats.mean, std_err: stats.std_err, distances, mass });
    }

    let mut checks = Vec::new();
    for r in &rows {
        let d = &r.distances;
        checks.push(Check::holds(format!("theta={} closest to {}", r.theta, r.own), d.get(r.own), d.strictly_closest(r.own)));
        if r.own == "robin" {
            checks.push(Check::holds(
                format!("theta={} between dirichlet and neumann", r.theta),
                d.dirichlet.max(d.neumann),
                d.dirichlet < dirichlet_neumann && d.neumann < dirichlet_neumann,
            ));
        }
        if r.own == "neumann" {
            checks.push(Check::at_most(
                format!("theta={} particle number drift", r.theta),
                (r.mass.total_change as f64).abs(),
                3.0 * r.mass.sigma(),
            ));
        }
    }
    checks.push(Check::at_most("neumann pde mass drift", neumann_mass_drift, 1e-10));
    Ok(DiscriminationReport { n, t, references, dirichlet_neumann, neumann_mass_drift, rows, checks })
}
