use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Boundary conditions of the hydrodynamic equation.
///
/// Robin reads `∂ᵤρ(0) = κ·left·(ρ(0) − ρ₋)` and `∂ᵤρ(1) = κ·right·(ρ₊ − ρ(1))`
/// with `left = (ε+γ)/α` and `right = (δ+β)/α`. Neumann is the `κ = 0` case.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum BoundaryConditionSpec {
    Dirichlet { rho_minus: f64, rho_plus: f64 },
    Robin { kappa: f64, left: f64, right: f64, rho_minus: f64, rho_plus: f64 },
    Neumann,
}

pub fn bc_from_theta(params: &ModelParams) -> BoundaryConditionSpec {
    let theta = params.theta();
    if theta < 1.0 {
        BoundaryConditionSpec::Dirichlet { rho_minus: params.rho_minus(), rho_plus: params.rho_plus() }
    } else if theta == 1.0 {
        let alpha = params.alpha() as f64;
        BoundaryConditionSpec::Robin {
            kappa: 1.0,
            left: (params.epsilon() + params.gamma()) / alpha,
            right: (params.delta() + params.beta()) / alpha,
            rho_minus: params.rho_minus(),
            rho_plus: params.rho_plus(),
        }
    } else {
        BoundaryConditionSpec::Neumann
    }
}

impl BoundaryConditionSpec {
    pub(crate) fn validate(&self, alpha: f64) -> Result<()> {
        let inside = |r: f64| (0.0..=alpha).contains(&r);
        match *self {
            BoundaryConditionSpec::Dirichlet { rho_minus, rho_plus } => {
                if !(inside(rho_minus) && inside(rho_plus)) {
                    return Err(Error::invalid("reservoir densities must lie in [0, α]"));
                }
            }
            BoundaryConditionSpec::Robin { kappa, left, right, rho_minus, rho_plus } => {
                if !(kappa >= 0.0 && kappa.is_finite() && left > 0.0 && right > 0.0) {
                    return Err(Error::invalid("Robin coefficients must be positive and κ ≥ 0"));
                }
                if !(inside(rho_minus) && inside(rho_plus)) {
                    return Err(Error::invalid("reservoir densities must lie in [0, α]"));
                }
            }
            BoundaryConditionSpec::Neumann => {}
        }
        Ok(())
    }

    /// `(κ·left, κ·right, ρ₋, ρ₊)` for flux conditions, `None` for Dirichlet.
    pub(crate) fn flux(&self) -> Option<(f64, f64, f64, f64)> {
        match *self {
            BoundaryConditionSpec::Dirichlet { .. } => None,
            BoundaryConditionSpec::Robin { kappa, left, right, rho_minus, rho_plus } => {
                Some((kappa * left, kappa * right, rho_minus, rho_plus))
            }
            BoundaryConditionSpec::Neumann => Some((0.0, 0.0, 0.0, 0.0)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundaryConditionSpec::Dirichlet { .. } => "dirichlet",
            BoundaryConditionSpec::Robin { .. } => "robin",
            BoundaryConditionSpec::Neumann => "neumann",
        }
    }
}
