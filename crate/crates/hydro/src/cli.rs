//! The `sep` command line. Exit codes: 0 when every contract passes, 1 when
//! one fails, 2 for usage, configuration and I/O errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use sep_core::{bc_from_theta, rng, solve, steady_state, BoundaryConditionSpec, TrajectoryOptions};

use crate::config::RunConfig;
use crate::convergence::hydrodynamic_convergence;
use crate::diagnostics::replacement_diagnostics;
use crate::discrimination::boundary_condition_discrimination;
use crate::ensemble::member_state;
use crate::error::{HydroError, Result};
use crate::exact_checks::exact_report;
use crate::formats::{write_csv, write_event_log, write_profiles, write_solution};
use crate::martingale::martingale_suite;
use crate::report::{all_pass, emit_report, Check, Report, SPEC_VERSION};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "sep", version, about = "Boundary-driven SEP(α): simulation, PDE and hydrodynamic-limit checks")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Override `model.theta`.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Override `ensemble.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Override `ensemble.runs`.
    #[arg(long)]
    runs: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_path(path)?,
            None => RunConfig::default(),
        };
        if let Some(theta) = self.theta {
            config.model.theta = theta;
        }
        if let Some(seed) = self.seed {
            config.ensemble.seed = seed;
        }
        if let Some(runs) = self.runs {
            config.ensemble.runs = runs;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// One trajectory; writes its binned profiles as CSV.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Also write the binary event log.
        #[arg(long)]
        event_log: bool,
    },
    /// The PDE selected by θ; writes the solution as CSV.
    Pde {
        #[command(flatten)]
        common: Common,
    },
    /// The closed-form steady state selected by θ.
    Steady {
        #[command(flatten)]
        common: Common,
    },
    /// Generator-level identities on the (small) configured system.
    Exact {
        #[command(flatten)]
        common: Common,
        /// Number of random densities for the Dirichlet-form identities.
        #[arg(long, default_value_t = 20)]
        densities: usize,
    },
    /// Ensemble profiles against the PDE along the plan's `N` list.
    Converge {
        #[command(flatten)]
        common: Common,
    },
    /// θ sweep at the largest `N` against all three boundary conditions.
    Discriminate {
        #[command(flatten)]
        common: Common,
    },
    /// Replacement-lemma discrepancies along trajectories.
    Diagnose {
        #[command(flatten)]
        common: Common,
    },
    /// Zero mean and quadratic variation of the Dynkin martingale.
    Martingale {
        #[command(flatten)]
        common: Common,
    },
    /// Artifact version, schema version and random number generator.
    Version {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VersionInfo {
    pub name: &'static str,
    pub version: &'static str,
    pub spec_version: &'static str,
    pub rng: &'static str,
}

pub fn version_info() -> VersionInfo {
    VersionInfo { name: "sep", version: env!("CARGO_PKG_VERSION"), spec_version: SPEC_VERSION, rng: rng::RNG_ID }
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        let verdict = if c.pass { "PASS" } else { "FAIL" };
        match c.tolerance {
            Some(tol) => println!("{verdict} {}: {:.6e} <= {:.6e}", c.name, c.value, tol),
            None => println!("{verdict} {}: {:.6e}", c.name, c.value),
        }
    }
}

fn finish<T: Serialize>(dir: &Path, kind: &'static str, seed: u64, checks: Vec<Check>, body: T) -> Result<i32> {
    print_checks(&checks);
    let pass = all_pass(&checks);
    let path = dir.join(format!("{kind}.json"));
    emit_report(&Report::new(kind, seed, checks, body), &path)?;
    println!("report: {}", path.display());
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct EnsembleCsvRow {
    n: usize,
    t: f64,
    bin_index: usize,
    bin_center: f64,
    mean: f64,
    std_err: f64,
    reference: f64,
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Version { json } => {
            let v = version_info();
            if json {
                println!("{}", serde_json::to_string(&v).expect("serializable"));
            } else {
                println!("{} {}\nspec_version {}\nrng {}", v.name, v.version, v.spec_version, v.rng);
            }
            Ok(EXIT_PASS)
        }
        Command::Simulate { common, event_log } => {
            let config = common.load()?;
            let dir = config.resolved_output_dir();
            let params = config.params()?;
            let mut state = member_state(&params, &config.initial, config.ensemble.seed, 0)?;
            let mut times = vec![0.0];
            times.extend(config.time.checkpoints.iter().copied().filter(|&t| t > 0.0));
            let opts = TrajectoryOptions { keep_configs: false, keep_event_log: event_log };
            let rec = state.record_trajectory(&times, config.numeric.bins, opts)?;
            let path = dir.join("trajectory.csv");
            write_profiles(&path, &rec.profiles)?;
            println!("trajectory: {} ({} events)", path.display(), rec.event_count);
            if let Some(log) = &rec.event_log {
                let path = dir.join("events.bin");
                write_event_log(&path, log)?;
                println!("event log: {}", path.display());
            }
            Ok(EXIT_PASS)
        }
        Command::Pde { common } => {
            let config = common.load()?;
            let dir = config.resolved_output_dir();
            let params = config.params()?;
            let alpha = params.alpha() as f64;
            let bc = bc_from_theta(&params);
            let mut times = vec![0.0];
            times.extend(config.time.checkpoints.iter().copied().filter(|&t| t > 0.0));
            let sol = solve(&bc, &config.initial, alpha, &times, config.numeric.grid, config.numeric.time_step())?;
            let path = dir.join("solution.csv");
            write_solution(&path, &sol)?;
            println!("solution: {} ({})", path.display(), bc.name());
            let (lo, hi) = sol.min_max();
            let (init_lo, init_hi) = sol.fields[0].iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            let (bound_lo, bound_hi) = match bc {
                BoundaryConditionSpec::Dirichlet { rho_minus, rho_plus }
                | BoundaryConditionSpec::Robin { rho_minus, rho_plus, .. } => {
                    (init_lo.min(rho_minus).min(rho_plus), init_hi.max(rho_minus).max(rho_plus))
                }
                BoundaryConditionSpec::Neumann => (init_lo, init_hi),
            };
            let mut checks = vec![Check::at_most("maximum principle", (bound_lo - lo).max(hi - bound_hi).max(0.0), 1e-8)];
            if bc == BoundaryConditionSpec::Neumann {
                let last = sol.times.len() - 1;
                checks.push(Check::at_most("mass conservation", (sol.mass(last) - sol.mass(0)).abs(), 1e-10));
            }
            let masses: Vec<(f64, f64)> = (0..sol.times.len()).map(|k| (sol.times[k], sol.mass(k))).collect();
            finish(&dir, "pde", config.ensemble.seed, checks, serde_json::json!({ "bc": bc, "masses": masses }))
        }
        Command::Steady { common } => {
            let config = common.load()?;
            let dir = config.resolved_output_dir();
            let params = config.params()?;
            let alpha = params.alpha() as f64;
            let bc = bc_from_theta(&params);
            let m = config.numeric.grid;
            let grid: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
            // Mass of the initial profile, which selects the Neumann steady state.
            let g: Vec<f64> = grid.iter().map(|&u| config.initial.eval(u)).collect();
            let mass = (g.iter().sum::<f64>() - 0.5 * (g[0] + g[m])) / m as f64;
            let profile = steady_state(&bc, alpha, Some(mass))?;
            println!("{}", serde_json::to_string(&profile).expect("serializable"));
            let rows: Vec<(f64, f64)> = grid.iter().map(|&u| (u, profile.eval(u))).collect();
            let path = dir.join("steady.csv");
            write_csv(&path, &rows, &["u", "rho"])?;
            finish(&dir, "steady", config.ensemble.seed, Vec::new(), serde_json::json!({ "bc": bc, "profile": profile }))
        }
        Command::Exact { common, densities } => {
            let config = common.load()?;
            let report = exact_report(&config.params()?, densities, config.ensemble.seed)?;
            let checks = report.checks.clone();
            finish(&config.resolved_output_dir(), "exact", config.ensemble.seed, checks, report)
        }
        Command::Converge { common } => {
            let config = common.load()?;
            let dir = config.resolved_output_dir();
            let report = hydrodynamic_convergence(&config)?;
            let centers = &report.bin_centers;
            let rows: Vec<EnsembleCsvRow> = report
                .rows
                .iter()
                .flat_map(|r| {
                    (0..r.mean.len()).map(move |j| EnsembleCsvRow {
                        n: r.n,
                        t: r.t,
                        bin_index: j,
                        bin_center: centers[j],
                        mean: r.mean[j],
                        std_err: r.std_err[j],
                        reference: r.reference[j],
                    })
                })
                .collect();
            write_csv(&dir.join("converge_profiles.csv"), &rows, &["n", "t", "bin_index", "bin_center", "mean", "std_err", "reference"])?;
            let checks = report.checks.clone();
            finish(&dir, "converge", config.ensemble.seed, checks, report)
        }
        Command::Discriminate { common } => {
            let config = common.load()?;
            let report = boundary_condition_discrimination(&config)?;
            let checks = report.checks.clone();
            finish(&config.resolved_output_dir(), "discriminate", config.ensemble.seed, checks, report)
        }
        Command::Diagnose { common } => {
            let config = common.load()?;
            let report = replacement_diagnostics(&config)?;
            let checks = report.checks.clone();
            finish(&config.resolved_output_dir(), "diagnose", config.ensemble.seed, checks, report)
        }
        Command::Martingale { common } => {
            let config = common.load()?;
            let report = martingale_suite(&config)?;
            let checks = report.checks.clone();
            finish(&config.resolved_output_dir(), "martingale", config.ensemble.seed, checks, report)
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let HydroError::Config { .. } = e {
                eprintln!("see `sep --help` for usage");
            }
            EXIT_USAGE
        }
    }
}
