//! Static model data and the local operations every other module builds on.
//!
//! Sites are addressed in lattice coordinates `x ∈ {1, …, N−1}` and
//! macroscopic positions `u = x/N` throughout.

mod calculus;
mod configuration;
mod event;
mod measure;
mod params;
mod profile;
pub(crate) mod rates;

pub use calculus::{
    discrete_gradient_plus, discrete_laplacian, integrate_test_function, windowed_average,
    Direction,
};
pub use configuration::Configuration;
pub use event::Event;
pub use measure::{binomial_pmf, binomial_weight, ln_binomial_weight, sample_initial};
pub use params::ModelParams;
pub use profile::Profile;
pub use rates::{apply_event, boundary_rates, bulk_rate, event_rate, BoundaryRates};
