use alloc::vec::Vec;

use super::solver::trapezoid;
use super::{BoundaryConditionSpec, PdeSolution};
use crate::error::{Error, Result};
use crate::model::Profile;

/// A test function `G(t, u)` with the derivatives the weak form needs.
pub struct SpaceTimeFunction<'a> {
    pub value: &'a dyn Fn(f64, f64) -> f64,
    pub d_time: &'a dyn Fn(f64, f64) -> f64,
    pub d_space: &'a dyn Fn(f64, f64) -> f64,
    pub d_space2: &'a dyn Fn(f64, f64) -> f64,
}

impl SpaceTimeFunction<'_> {
    fn sample(&self, f: &dyn Fn(f64, f64) -> f64, t: f64, m: usize) -> Vec<f64> {
        (0..=m).map(|i| f(t, i as f64 / m as f64)).collect()
    }
}

fn pairing(a: &[f64], b: &[f64]) -> f64 {
    let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    trapezoid(&prod)
}

/// Residual of the integral identity at the last checkpoint `T`:
///
/// ```text
/// ⟨ρ_T,G_T⟩ − ⟨g,G_0⟩ − ∫_0^T ⟨ρ_s,(αΔ+∂_s)G_s⟩ ds + α∫_0^T [ρ_s(1)∂ᵤG_s(1) − ρ_s(0)∂ᵤG_s(0)] ds
///   + κ(ε+γ)∫_0^T (ρ_s(0) − ρ₋)G_s(0) ds − κ(δ+β)∫_0^T (ρ₊ − ρ_s(1))G_s(1) ds
/// ```
///
/// In the Dirichlet case `G` must vanish at both ends and the boundary values
/// of `ρ` are the reservoir densities. Space integrals use the trapezoid rule
/// on the solver grid and time integrals the trapezoid rule on the
/// checkpoints, which must start at `t = 0`.
pub fn weak_form_residual(
    solution: &PdeSolution,
    test: &SpaceTimeFunction<'_>,
    g: &Profile,
    bc: &BoundaryConditionSpec,
) -> Result<f64> {
    let times = &solution.times;
    if times.first() != Some(&0.0) {
        return Err(Error::invalid("the weak form needs a checkpoint at t = 0"));
    }
    let m = solution.m;
    let alpha = solution.alpha;
    if let BoundaryConditionSpec::Dirichlet { .. } = bc {
        for &t in times {
            if (test.value)(t, 0.0).abs() > 1e-12 || (test.value)(t, 1.0).abs() > 1e-12 {
                return Err(Error::invalid("Dirichlet test functions must vanish at u = 0 and u = 1"));
            }
        }
    }
    // Time integrand at checkpoint k.
    let integrand = |k: usize| -> f64 {
        let t = times[k];
        let rho = &solution.fields[k];
        let gen: Vec<f64> = (0..=m)
            .map(|i| {
                let u = i as f64 / m as f64;
                alpha * (test.d_space2)(t, u) + (test.d_time)(t, u)
            })
            .collect();
        let mut v = -pairing(rho, &gen);
        let (dl, dr) = ((test.d_space)(t, 0.0), (test.d_space)(t, 1.0));
        match *bc {
            BoundaryConditionSpec::Dirichlet { rho_minus, rho_plus } => {
                v += alpha * (rho_plus * dr - rho_minus * dl);
            }
            _ => {
                let (kl, kr, rho_minus, rho_plus) = bc.flux().expect("flux boundary");
                let (r0, r1) = (rho[0], rho[m]);
                v += alpha * (r1 * dr - r0 * dl);
                v += alpha * kl * (r0 - rho_minus) * (test.value)(t, 0.0);
                v -= alpha * kr * (rho_plus - r1) * (test.value)(t, 1.0);
            }
        }
        v
    };
    let mut integral = 0.0;
    let mut prev = integrand(0);
    for k in 1..times.len() {
        let cur = integrand(k);
        integral += 0.5 * (times[k] - times[k - 1]) * (prev + cur);
        prev = cur;
    }
    let last = times.len() - 1;
    let t_end = times[last];
    let g0: Vec<f64> = (0..=m).map(|i| g.eval(i as f64 / m as f64)).collect();
    let end = pairing(&solution.fields[last], &test.sample(test.value, t_end, m));
    let start = pairing(&g0, &test.sample(test.value, 0.0, m));
    Ok(end - start + integral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;
    use crate::pde::solve;
    use core::f64::consts::PI;

    fn zero(_: f64, _: f64) -> f64 {
        0.0
    }

    #[test]
    fn zero_test_function() {
        let g = Profile::linear(0.2, 0.9);
        let bc = BoundaryConditionSpec::Dirichlet { rho_minus: 0.2, rho_plus: 0.9 };
        let s = solve(&bc, &g, 1.0, &[0.0, 0.1], 16, 0.1).unwrap();
        let t = SpaceTimeFunction { value: &zero, d_time: &zero, d_space: &zero, d_space2: &zero };
        assert_eq!(weak_form_residual(&s, &t, &g, &bc).unwrap(), 0.0);
    }

    #[test]
    fn steady_states_balance_for_each_family() {
        let value = |t: f64, u: f64| math::cos(2.0 * u + t) + u * u;
        let d_time = |t: f64, u: f64| -math::sin(2.0 * u + t);
        let d_space = |t: f64, u: f64| -2.0 * math::sin(2.0 * u + t) + 2.0 * u;
        let d_space2 = |t: f64, u: f64| -4.0 * math::cos(2.0 * u + t) + 2.0;
        let test = SpaceTimeFunction { value: &value, d_time: &d_time, d_space: &d_space, d_space2: &d_space2 };
        let robin = BoundaryConditionSpec::Robin { kappa: 1.0, left: 0.5, right: 1.5, rho_minus: 0.3, rho_plus: 1.6 };
        for (bc, mass) in [(robin, None), (BoundaryConditionSpec::Neumann, Some(0.7))] {
            let g = crate::pde::steady_state(&bc, 2.0, mass).unwrap();
            // The steady state is exact on the grid, so only quadrature error remains.
            let residual = |m: usize| {
                let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.002).collect();
                let s = solve(&bc, &g, 2.0, &times, m, 0.002).unwrap();
                weak_form_residual(&s, &test, &g, &bc).unwrap().abs()
            };
            let (coarse, fine) = (residual(128), residual(256));
            assert!(coarse < 1e-4 && coarse / fine > 3.9, "{} {coarse} {fine}", bc.name());
        }
        // A non-vanishing G is rejected in Dirichlet mode.
        let bc = BoundaryConditionSpec::Dirichlet { rho_minus: 0.3, rho_plus: 0.6 };
        let g = Profile::linear(0.3, 0.6);
        let s = solve(&bc, &g, 1.0, &[0.0, 0.1], 16, 0.1).unwrap();
        assert!(weak_form_residual(&s, &test, &g, &bc).is_err());
    }

    fn dirichlet_residuals(test: &SpaceTimeFunction<'_>) -> Vec<f64> {
        let g = Profile::Harmonic { offset: 0.0, slope: 0.0, cos_amp: 0.0, sin_amp: 1.0, freq: PI };
        let bc = BoundaryConditionSpec::Dirichlet { rho_minus: 0.0, rho_plus: 0.0 };
        [40, 80, 160, 320]
            .iter()
            .map(|&m| {
                let dt = 1.0 / m as f64;
                let times: Vec<f64> = (0..=m / 10).map(|k| k as f64 * dt).collect();
                let s = solve(&bc, &g, 1.0, &times, m, dt).unwrap();
                weak_form_residual(&s, test, &g, &bc).unwrap().abs()
            })
            .collect()
    }

    #[test]
    fn manufactured_dirichlet_orthogonal_mode() {
        // sin(2πu) is discretely orthogonal to the sin(πu) mode the scheme
        // propagates, so every term vanishes up to rounding.
        let value = |_: f64, u: f64| math::sin(2.0 * PI * u);
        let d_space = |_: f64, u: f64| 2.0 * PI * math::cos(2.0 * PI * u);
        let d_space2 = |_: f64, u: f64| -4.0 * PI * PI * math::sin(2.0 * PI * u);
        let test = SpaceTimeFunction { value: &value, d_time: &zero, d_space: &d_space, d_space2: &d_space2 };
        assert!(dirichlet_residuals(&test).iter().all(|&r| r < 1e-12));
    }

    #[test]
    fn manufactured_dirichlet_converges_at_second_order() {
        let value = |t: f64, u: f64| u * (1.0 - u) * (1.0 + t);
        let d_time = |_: f64, u: f64| u * (1.0 - u);
        let d_space = |t: f64, u: f64| (1.0 - 2.0 * u) * (1.0 + t);
        let d_space2 = |t: f64, _: f64| -2.0 * (1.0 + t);
        let test = SpaceTimeFunction { value: &value, d_time: &d_time, d_space: &d_space, d_space2: &d_space2 };
        let r = dirichlet_residuals(&test);
        for w in r.windows(2) {
            assert!(w[0] / w[1] > 3.5, "{r:?}");
        }
        let value = |_: f64, u: f64| math::sin(PI * u);
        let d_space = |_: f64, u: f64| PI * math::cos(PI * u);
        let d_space2 = |_: f64, u: f64| -PI * PI * math::sin(PI * u);
        let test = SpaceTimeFunction { value: &value, d_time: &zero, d_space: &d_space, d_space2: &d_space2 };
        let r = dirichlet_residuals(&test);
        for w in r.windows(2) {
            assert!(w[0] / w[1] > 3.5, "{r:?}");
        }
    }
}
