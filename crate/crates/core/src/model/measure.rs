use alloc::vec::Vec;
use rand_core::RngCore;

use super::{Configuration, ModelParams, Profile};
use crate::error::{Error, Result};
use crate::math;
use crate::rng;

/// `P[Binomial(α, p) = k]`.
pub fn binomial_pmf(alpha: u32, k: u32, p: f64) -> f64 {
    if k > alpha {
        return 0.0;
    }
    math::binomial(alpha, k) * libm::pow(p, k as f64) * libm::pow(1.0 - p, (alpha - k) as f64)
}

fn site_fractions(params: &ModelParams, varrho: &Profile, sites: usize) -> Result<Vec<f64>> {
    let n = params.n() as f64;
    (1..=sites)
        .map(|x| {
            let r = varrho.eval(x as f64 / n);
            if r > 0.0 && r < 1.0 {
                Ok(r)
            } else {
                Err(Error::InvalidArgument(alloc::format!(
                    "reference fraction {r} at site {x} is outside (0, 1)"
                )))
            }
        })
        .collect()
}

/// Product Binomial weight `ν^N_ϱ(η) = Π_x C(α,η(x)) ϱ(x/N)^{η(x)} (1−ϱ(x/N))^{α−η(x)}`.
pub fn binomial_weight(params: &ModelParams, varrho: &Profile, config: &Configuration) -> Result<f64> {
    let fr = site_fractions(params, varrho, config.sites())?;
    Ok(fr
        .iter()
        .zip(config.as_slice())
        .map(|(&p, &k)| binomial_pmf(config.alpha(), k, p))
        .product())
}

/// `ln ν^N_ϱ(η)`, used for relative entropies.
pub fn ln_binomial_weight(params: &ModelParams, varrho: &Profile, config: &Configuration) -> Result<f64> {
    let alpha = config.alpha();
    let fr = site_fractions(params, varrho, config.sites())?;
    Ok(fr
        .iter()
        .zip(config.as_slice())
        .map(|(&p, &k)| {
            math::ln(math::binomial(alpha, k))
                + k as f64 * math::ln(p)
                + (alpha - k) as f64 * math::ln(1.0 - p)
        })
        .sum())
}

/// Draws `η(x) ~ Binomial(α, g(x/N)/α)` independently at every site.
///
/// The law of large numbers makes the resulting sequence of measures
/// associated to `g`.
pub fn sample_initial<R: RngCore + ?Sized>(
    params: &ModelParams,
    g: &Profile,
    rng: &mut R,
) -> Result<Configuration> {
    let alpha = params.alpha();
    let a = alpha as f64;
    let n = params.n() as f64;
    let mut occ = Vec::with_capacity(params.sites());
    for x in 1..=params.sites() {
        let density = g.eval(x as f64 / n);
        if !(density >= -1e-12 && density <= a + 1e-12) {
            return Err(Error::InvalidArgument(alloc::format!(
                "initial profile value {density} at u = {} outside [0, {alpha}]",
                x as f64 / n
            )));
        }
        let p = (density / a).clamp(0.0, 1.0);
        let k = (0..alpha).filter(|_| rng::uniform(rng) < p).count() as u32;
        occ.push(k);
    }
    Configuration::new(alpha, occ)
}
