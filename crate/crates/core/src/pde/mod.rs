//! The heat equation `∂ₜρ = αΔρ` on `[0, 1]` with Dirichlet, Robin or Neumann
//! boundary conditions: a Crank–Nicolson solver, affine steady states and the
//! integral (weak) formulation as a residual.

mod bc;
mod solver;
mod steady;
mod weak;

pub use bc::{bc_from_theta, BoundaryConditionSpec};
pub use solver::{solve, PdeSolution, DEFAULT_GRID};
pub use steady::steady_state;
pub use weak::{weak_form_residual, SpaceTimeFunction};
