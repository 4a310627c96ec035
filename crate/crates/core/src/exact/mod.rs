//! Brute-force analysis on small state spaces: the generator as an explicit
//! matrix, its stationary and transient laws, detailed balance, Dirichlet
//! forms and relative entropy.

mod balance;
mod entropy;
mod forms;
mod generator;
mod linalg;
mod state_index;
mod stationary;

pub use balance::{bulk_balance_violation, detailed_balance_violation, reference_measure};
pub use entropy::{entropy_upper_bound, relative_entropy};
pub use forms::{
    boundary_carre_du_champ_identity, bulk_generator_bound_check, dirichlet_forms,
    generator_pairing, BoundaryIdentity, BulkBound, DensityFunction, DirichletForms,
    GeneratorPart,
};
pub use generator::{generator_matrix, generator_matrix_with_cap, GeneratorMatrix, DEFAULT_STATE_CAP};
pub use state_index::StateIndex;
pub use stationary::{stationary_distribution, transient_distribution};
