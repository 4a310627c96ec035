//! Brute-force checks on small state spaces: stationarity, detailed balance,
//! the boundary carré du champ identities, the bulk generator bound, and the
//! stationary mean profile against the continuum steady states.

use serde::Serialize;

use sep_core::exact::{
    boundary_carre_du_champ_identity, bulk_balance_violation, bulk_generator_bound_check, detailed_balance_violation,
    generator_matrix, reference_measure, stationary_distribution, DensityFunction,
};
use sep_core::{rng, steady_state, BoundaryConditionSpec, ModelParams, Profile};

use crate::error::Result;
use crate::report::Check;

pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Reference fractions that equal the reservoir fractions at `1/N` and
/// `1 − 1/N` and are constant near each end. For `N = 2` both ends are the
/// same site, so two constant profiles are used instead.
pub fn matched_profiles(params: &ModelParams) -> Vec<Profile> {
    let (l, r) = (params.left_fraction(), params.right_fraction());
    let n = params.n() as f64;
    if params.n() >= 3 {
        let (a, b) = (1.0 / n, 1.0 - 1.0 / n);
        vec![Profile::table(vec![[0.0, l], [a, l], [b, r], [1.0, r]]).expect("increasing nodes")]
    } else if l == r {
        vec![Profile::constant(l)]
    } else {
        vec![Profile::constant(l), Profile::constant(r)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySample {
    pub seed: u64,
    pub left_residual: Option<f64>,
    pub right_residual: Option<f64>,
    pub bulk_lhs: f64,
    pub bulk_rhs: f64,
    pub bulk_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactReport {
    pub n: usize,
    pub alpha: u32,
    pub states: usize,
    /// `max |πL|` of the computed stationary law.
    pub stationarity_residual: f64,
    /// Reversibility defect w.r.t. the product measure, at equilibrium only.
    pub detailed_balance: Option<f64>,
    /// Bulk-only reversibility defect w.r.t. Binomial(α, ε/(ε+γ)).
    pub bulk_balance: f64,
    pub samples: Vec<IdentitySample>,
    pub checks: Vec<Check>,
}

pub fn exact_report(params: &ModelParams, densities: usize, seed: u64) -> Result<ExactReport> {
    let g = generator_matrix(params)?;
    let pi = stationary_distribution(&g)?;
    let stationarity_residual = g.left_apply(&pi).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let detailed_balance =
        if params.is_equilibrium() { Some(detailed_balance_violation(params, params.left_fraction())?) } else { None };
    let bulk_balance = bulk_balance_violation(params, params.left_fraction())?;

    let profiles = matched_profiles(params);
    let mut samples = Vec::with_capacity(densities);
    for k in 0..densities as u64 {
        let mut s = IdentitySample {
            seed: k,
            left_residual: None,
            right_residual: None,
            bulk_lhs: 0.0,
            bulk_rhs: 0.0,
            bulk_holds: true,
        };
        for (j, varrho) in profiles.iter().enumerate() {
            let nu = reference_measure(params, varrho, g.index())?;
            let f = DensityFunction::random(&nu, &mut rng::stream(seed, j as u64, k))?;
            let id = boundary_carre_du_champ_identity(params, varrho, &f)?;
            if id.left_matched {
                s.left_residual = Some(id.left_residual);
            }
            if id.right_matched {
                s.right_residual = Some(id.right_residual);
            }
            if j == 0 {
                let b = bulk_generator_bound_check(params, varrho, &f)?;
                s.bulk_lhs = b.lhs;
                s.bulk_rhs = b.rhs();
                s.bulk_holds = b.holds();
            }
        }
        samples.push(s);
    }

    let scale = g.max_exit_rate().max(1.0);
    let mut checks = vec![Check::at_most("stationarity |piL| / max exit rate", stationarity_residual / scale, IDENTITY_TOLERANCE)];
    if let Some(v) = detailed_balance {
        checks.push(Check::at_most("detailed balance", v, IDENTITY_TOLERANCE));
    }
    checks.push(Check::at_most("bulk detailed balance", bulk_balance, IDENTITY_TOLERANCE));
    let worst = |f: fn(&IdentitySample) -> Option<f64>| samples.iter().filter_map(f).fold(0.0f64, f64::max);
    checks.push(Check::at_most("left boundary identity", worst(|s| s.left_residual), IDENTITY_TOLERANCE));
    checks.push(Check::at_most("right boundary identity", worst(|s| s.right_residual), IDENTITY_TOLERANCE));
    let failures = samples.iter().filter(|s| !s.bulk_holds).count();
    checks.push(Check::holds("bulk generator bound", failures as f64, failures == 0));
    Ok(ExactReport {
        n: params.n(),
        alpha: params.alpha(),
        states: g.dim(),
        stationarity_residual,
        detailed_balance,
        bulk_balance,
        samples,
        checks,
    })
}

/// `E_π[η(x)]` for `x = 1, …, N−1` under the exact stationary law.
pub fn stationary_mean(params: &ModelParams) -> Result<Vec<f64>> {
    let g = generator_matrix(params)?;
    let pi = stationary_distribution(&g)?;
    let mut mean = vec![0.0; params.sites()];
    for (i, p) in pi.iter().enumerate() {
        let c = g.index().decode(i);
        for (m, &k) in mean.iter_mut().zip(c.as_slice()) {
            *m += p * k as f64;
        }
    }
    Ok(mean)
}

/// The stationary mean at site `x` against a continuum steady state read at
/// `u(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyComparison {
    pub family: &'static str,
    pub steady: Profile,
    pub u: Vec<f64>,
    pub exact: Vec<f64>,
    pub continuum: Vec<f64>,
    pub max_error: f64,
}

fn compare(family: &'static str, steady: Profile, u: Vec<f64>, exact: Vec<f64>) -> SteadyComparison {
    let continuum: Vec<f64> = u.iter().map(|&v| steady.eval(v)).collect();
    let max_error = exact.iter().zip(&continuum).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    SteadyComparison { family, steady, u, exact, continuum, max_error }
}

/// The stationary mean is affine in `x` and solves
/// `(ε+γ)N^{−θ}(ρ₋ − m₁) = α(m_x − m_{x+1}) = (δ+β)N^{−θ}(m_{N−1} − ρ₊)`.
/// With `x_L = 1 − αN^θ/(ε+γ)` and `x_R = N−1 + αN^θ/(δ+β)` it is the
/// Dirichlet steady state at `u = (x − x_L)/(x_R − x_L)`.
pub fn dirichlet_comparison(params: &ModelParams) -> Result<SteadyComparison> {
    let exact = stationary_mean(params)?;
    let (alpha, nt) = (params.alpha() as f64, (params.n() as f64).powf(params.theta()));
    let x_left = 1.0 - alpha * nt / (params.epsilon() + params.gamma());
    let x_right = params.sites() as f64 + alpha * nt / (params.delta() + params.beta());
    let u = (1..=params.sites()).map(|x| (x as f64 - x_left) / (x_right - x_left)).collect();
    let bc = BoundaryConditionSpec::Dirichlet { rho_minus: params.rho_minus(), rho_plus: params.rho_plus() };
    Ok(compare("dirichlet", steady_state(&bc, alpha, None)?, u, exact))
}

/// On `u = (x − 1)/(N − 2)` the same mean is the Robin steady state with
/// `κ = (N − 2)N^{−θ}`, `left = (ε+γ)/α`, `right = (δ+β)/α`.
pub fn robin_comparison(params: &ModelParams) -> Result<SteadyComparison> {
    if params.n() < 3 {
        return Err(sep_core::Error::InvalidArgument("the Robin map needs N ≥ 3".into()).into());
    }
    let exact = stationary_mean(params)?;
    let alpha = params.alpha() as f64;
    let span = (params.n() - 2) as f64;
    let bc = BoundaryConditionSpec::Robin {
        kappa: span * (params.n() as f64).powf(-params.theta()),
        left: (params.epsilon() + params.gamma()) / alpha,
        right: (params.delta() + params.beta()) / alpha,
        rho_minus: params.rho_minus(),
        rho_plus: params.rho_plus(),
    };
    let u = (1..=params.sites()).map(|x| (x - 1) as f64 / span).collect();
    Ok(compare("robin", steady_state(&bc, alpha, None)?, u, exact))
}

/// Equal reservoir densities: the mean is flat and equals the Neumann steady
/// state with the same mass, on `u = x/N`.
pub fn neumann_comparison(params: &ModelParams) -> Result<SteadyComparison> {
    if params.rho_minus() != params.rho_plus() {
        return Err(sep_core::Error::InvalidArgument("the flat stationary mean needs ρ₋ = ρ₊".into()).into());
    }
    let exact = stationary_mean(params)?;
    let mass = exact.iter().sum::<f64>() / exact.len() as f64;
    let n = params.n() as f64;
    let u = (1..=params.sites()).map(|x| x as f64 / n).collect();
    let steady = steady_state(&BoundaryConditionSpec::Neumann, params.alpha() as f64, Some(mass))?;
    Ok(compare("neumann", steady, u, exact))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fixture_passes() {
        let p = ModelParams::new(1, 2, 0.0, 0.8, 0.2, 0.8, 0.2).unwrap();
        let r = exact_report(&p, 5, 1).unwrap();
        assert_eq!(r.states, 2);
        assert!(r.checks.iter().all(|c| c.pass), "{:?}", r.checks);
        assert!(r.samples.iter().all(|s| s.left_residual.is_some() && s.right_residual.is_some()));
    }

    #[test]
    fn equilibrium_reports_detailed_balance() {
        let p = ModelParams::equilibrium(2, 4, 1.0, 0.3).unwrap();
        let r = exact_report(&p, 3, 2).unwrap();
        assert!(r.detailed_balance.unwrap() <= 1e-12);
        assert!(r.checks.iter().all(|c| c.pass), "{:?}", r.checks);
    }

    #[test]
    fn stationary_mean_maps_onto_steady_states() {
        for theta in [0.0, 0.5, 1.0, 2.0] {
            let p = ModelParams::new(2, 5, theta, 0.7, 0.3, 0.9, 0.4).unwrap();
            assert!(dirichlet_comparison(&p).unwrap().max_error < 1e-10, "theta={theta}");
            assert!(robin_comparison(&p).unwrap().max_error < 1e-10, "theta={theta}");
        }
        let p = ModelParams::new(1, 5, 0.0, 0.6, 0.4, 0.2, 0.3).unwrap();
        assert!(neumann_comparison(&p).unwrap().max_error < 1e-10);
        let q = ModelParams::new(1, 5, 0.0, 0.8, 0.2, 0.8, 0.2).unwrap();
        assert!(neumann_comparison(&q).is_err());
    }
}
