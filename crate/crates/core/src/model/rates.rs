use super::{Configuration, Event, ModelParams};
use crate::error::{Error, Result};

/// Reservoir rates including the `N^{−θ}` prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRates {
    pub inject_left: f64,
    pub remove_left: f64,
    pub inject_right: f64,
    pub remove_right: f64,
}

impl BoundaryRates {
    pub fn total(&self) -> f64 {
        self.inject_left + self.remove_left + self.inject_right + self.remove_right
    }
}

/// `c_{x,y}(η) = η(x)·(α − η(y))` for nearest neighbours `x, y ∈ Λ_N`.
pub fn bulk_rate(config: &Configuration, x: usize, y: usize) -> Result<f64> {
    let sites = config.sites();
    if x == 0 || y == 0 || x > sites || y > sites {
        return Err(Error::InvalidArgument(alloc::format!(
            "sites ({x}, {y}) outside 1..={sites}"
        )));
    }
    if x.abs_diff(y) != 1 {
        return Err(Error::InvalidArgument(alloc::format!("sites {x} and {y} are not adjacent")));
    }
    Ok(pair_rate(config, x, y))
}

#[inline]
fn pair_rate(config: &Configuration, from: usize, to: usize) -> f64 {
    (config.get(from) * (config.alpha() - config.get(to))) as f64
}

/// `N^{−θ}·(ε[α−η(1)], γη(1), δ[α−η(N−1)], βη(N−1))`.
pub fn boundary_rates(params: &ModelParams, config: &Configuration) -> BoundaryRates {
    let k = params.boundary_factor();
    let a = config.alpha() as f64;
    let left = config.get(1) as f64;
    let right = config.get(config.sites()) as f64;
    BoundaryRates {
        inject_left: k * params.epsilon() * (a - left),
        remove_left: k * params.gamma() * left,
        inject_right: k * params.delta() * (a - right),
        remove_right: k * params.beta() * right,
    }
}

/// Rate of a single event in `config`.
#[inline]
pub fn event_rate(params: &ModelParams, config: &Configuration, event: Event) -> f64 {
    let a = config.alpha() as f64;
    match event {
        Event::BulkRight(x) => pair_rate(config, x, x + 1),
        Event::BulkLeft(x) => pair_rate(config, x + 1, x),
        Event::InjectLeft => params.boundary_factor() * params.epsilon() * (a - config.get(1) as f64),
        Event::RemoveLeft => params.boundary_factor() * params.gamma() * config.get(1) as f64,
        Event::InjectRight => {
            params.boundary_factor() * params.delta() * (a - config.get(config.sites()) as f64)
        }
        Event::RemoveRight => {
            params.boundary_factor() * params.beta() * config.get(config.sites()) as f64
        }
    }
}

/// Applies the jump map of `event`. Transitions whose rate vanishes (empty
/// source, full target) leave the configuration unchanged.
pub fn apply_event(config: &Configuration, event: Event) -> Configuration {
    let mut next = config.clone();
    apply_in_place(&mut next, event);
    next
}

/// In-place version of [`apply_event`]; returns whether anything changed.
#[inline]
pub(crate) fn apply_in_place(config: &mut Configuration, event: Event) -> bool {
    let alpha = config.alpha();
    let last = config.sites();
    let shift = |c: &mut Configuration, from: usize, to: usize| {
        let (a, b) = (c.get(from), c.get(to));
        if a >= 1 && b < alpha {
            c.set(from, a - 1);
            c.set(to, b + 1);
            true
        } else {
            false
        }
    };
    let inject = |c: &mut Configuration, x: usize| {
        let v = c.get(x);
        if v < alpha {
            c.set(x, v + 1);
            true
        } else {
            false
        }
    };
    let remove = |c: &mut Configuration, x: usize| {
        let v = c.get(x);
        if v >= 1 {
            c.set(x, v - 1);
            true
        } else {
            false
        }
    };
    match event {
        Event::BulkRight(x) => shift(config, x, x + 1),
        Event::BulkLeft(x) => shift(config, x + 1, x),
        Event::InjectLeft => inject(config, 1),
        Event::RemoveLeft => remove(config, 1),
        Event::InjectRight => inject(config, last),
        Event::RemoveRight => remove(config, last),
    }
}
