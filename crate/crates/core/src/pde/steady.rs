use super::BoundaryConditionSpec;
use crate::error::{Error, Result};
use crate::model::Profile;

/// The time-independent solution, always affine in `u`.
///
/// Robin: `ρ(u) = c + m·u` with `m = κ·left·(c − ρ₋)` and `m = κ·right·(ρ₊ − c − m)`.
/// Neumann needs the conserved mass, which is also the constant value.
pub fn steady_state(bc: &BoundaryConditionSpec, alpha: f64, mass: Option<f64>) -> Result<Profile> {
    bc.validate(alpha)?;
    match *bc {
        BoundaryConditionSpec::Dirichlet { rho_minus, rho_plus } => Ok(Profile::linear(rho_minus, rho_plus)),
        BoundaryConditionSpec::Robin { kappa, .. } if kappa == 0.0 => neumann(alpha, mass),
        BoundaryConditionSpec::Robin { kappa, left, right, rho_minus, rho_plus } => {
            let (kl, kr) = (kappa * left, kappa * right);
            // [kl  −1     ] [c]   [kl·ρ₋]
            // [kr  1 + kr ] [m] = [kr·ρ₊]
            let det = kl * (1.0 + kr) + kr;
            if !(det.abs() > 0.0) || !det.is_finite() {
                return Err(Error::Numeric("singular Robin steady-state system".into()));
            }
            let c = (kl * rho_minus * (1.0 + kr) + kr * rho_plus) / det;
            let m = (kl * kr * rho_plus - kr * kl * rho_minus) / det;
            Ok(Profile::linear(c, c + m))
        }
        BoundaryConditionSpec::Neumann => neumann(alpha, mass),
    }
}

fn neumann(alpha: f64, mass: Option<f64>) -> Result<Profile> {
    let mass = mass.ok_or_else(|| Error::invalid("the Neumann steady state is selected by its mass"))?;
    if !(0.0..=alpha).contains(&mass) {
        return Err(Error::invalid("mass must lie in [0, α]"));
    }
    Ok(Profile::constant(mass))
}
