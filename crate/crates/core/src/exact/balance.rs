use alloc::vec::Vec;

use super::generator::generator_from_events;
use super::{GeneratorMatrix, StateIndex};
use crate::error::{Error, Result};
use crate::model::{binomial_weight, ModelParams, Profile};

/// `ν^N_ϱ(η)` for every state of `index`.
pub fn reference_measure(params: &ModelParams, varrho: &Profile, index: &StateIndex) -> Result<Vec<f64>> {
    (0..index.len()).map(|i| binomial_weight(params, varrho, &index.decode(i))).collect()
}

fn violation(generator: &GeneratorMatrix, nu: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..generator.dim() {
        for &(j, r) in generator.off_diagonal(i) {
            worst = worst.max((nu[i] * r - nu[j] * generator.get(j, i)).abs());
        }
    }
    worst
}

fn constant_fraction(varrho: f64) -> Result<Profile> {
    if varrho > 0.0 && varrho < 1.0 {
        Ok(Profile::constant(varrho))
    } else {
        Err(Error::invalid("reference fraction must lie in (0, 1)"))
    }
}

/// `max_{η,ξ} |ν(η)L(η,ξ) − ν(ξ)L(ξ,η)|` for the product Binomial(α, ϱ).
pub fn detailed_balance_violation(params: &ModelParams, varrho: f64) -> Result<f64> {
    let profile = constant_fraction(varrho)?;
    let g = super::generator_matrix(params)?;
    let nu = reference_measure(params, &profile, g.index())?;
    Ok(violation(&g, &nu))
}

/// Same as [`detailed_balance_violation`] restricted to bulk jumps.
pub fn bulk_balance_violation(params: &ModelParams, varrho: f64) -> Result<f64> {
    let profile = constant_fraction(varrho)?;
    let g = generator_from_events(params, super::DEFAULT_STATE_CAP, |e| e.is_bulk())?;
    let nu = reference_measure(params, &profile, g.index())?;
    Ok(violation(&g, &nu))
}
