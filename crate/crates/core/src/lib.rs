//! Generalized symmetric exclusion process SEP(α) on `{1, …, N−1}` coupled
//! to two particle reservoirs whose rates are scaled by `N^{−θ}`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains the numerical
//! machinery only:
//!
//! * [`model`]: parameters, configurations, jump rates, jump maps, reference
//!   measures, initial sampling and the discrete calculus operators;
//! * [`engine`]: exact event-driven kinetic Monte Carlo on the diffusive clock
//!   `t ↦ tN²`, empirical profiles and the Dynkin martingale;
//! * [`exact`]: generator matrices and brute-force identities on small state
//!   spaces;
//! * [`pde`]: the heat equation `∂ₜρ = αΔρ` with Dirichlet, Robin or Neumann
//!   boundary conditions.
//!
//! File formats, ensembles and the command line live in the `sep-hydro`
//! companion crate.
#![no_std]

extern crate alloc;

pub mod engine;
mod error;
pub mod exact;
pub(crate) mod math;
pub mod model;
pub mod pde;
pub mod rng;
pub mod sumtree;

pub use engine::{
    dynkin_martingale, EmpiricalProfile, EventLog, EventRecord, MartingaleSeries, Observer,
    RateTable, SimulationState, TrajectoryOptions, TrajectoryRecord,
};
pub use error::{Error, Result};
pub use model::{
    apply_event, binomial_weight, boundary_rates, bulk_rate, discrete_gradient_plus,
    discrete_laplacian, integrate_test_function, sample_initial, windowed_average,
    BoundaryRates, Configuration, Direction, Event, ModelParams, Profile,
};
pub use pde::{bc_from_theta, solve, steady_state, weak_form_residual, BoundaryConditionSpec, PdeSolution};
