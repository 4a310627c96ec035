use alloc::vec::Vec;

use super::{reference_measure, StateIndex, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::math;
use crate::model::{ModelParams, Profile};

/// `H(μ | ν^N_ϱ) = Σ_η μ(η) log(μ(η)/ν(η))`.
pub fn relative_entropy(mu: &[f64], params: &ModelParams, varrho: &Profile) -> Result<f64> {
    let index = StateIndex::new(params.alpha(), params.sites(), DEFAULT_STATE_CAP)?;
    if mu.len() != index.len() {
        return Err(Error::invalid("probability vector has the wrong length"));
    }
    if mu.iter().any(|&m| !(m >= 0.0)) || (mu.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("μ must be a probability vector"));
    }
    let nu: Vec<f64> = reference_measure(params, varrho, &index)?;
    let h: f64 = mu
        .iter()
        .zip(&nu)
        .filter(|(&m, _)| m > 0.0)
        .map(|(&m, &n)| m * (math::ln(m) - math::ln(n)))
        .sum();
    Ok(h.max(0.0))
}

/// `(N−1)[log α! + α log a^{−1} + α log (1−b)^{−1}]` for `ϱ ∈ [a, b]`.
pub fn entropy_upper_bound(params: &ModelParams, a: f64, b: f64) -> Result<f64> {
    if !(0.0 < a && a <= b && b < 1.0) {
        return Err(Error::invalid("need 0 < a ≤ b < 1"));
    }
    let alpha = params.alpha() as f64;
    Ok(params.sites() as f64
        * (math::ln_factorial(params.alpha()) - alpha * math::ln(a) - alpha * math::ln(1.0 - b)))
}
