use crate::error::{Error, Result};
use crate::math;

/// Model constants: occupancy bound α, system size N, boundary exponent θ
/// and the four reservoir rate constants.
///
/// The reservoir densities `ρ₋ = αε/(ε+γ)` and `ρ₊ = αδ/(δ+β)` are derived at
/// construction and kept in sync by every constructor.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ModelParams {
    alpha: u32,
    n: usize,
    theta: f64,
    epsilon: f64,
    gamma: f64,
    beta: f64,
    delta: f64,
    rho_minus: f64,
    rho_plus: f64,
}

impl ModelParams {
    pub fn new(
        alpha: u32,
        n: usize,
        theta: f64,
        epsilon: f64,
        gamma: f64,
        beta: f64,
        delta: f64,
    ) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::invalid("alpha must be at least 1"));
        }
        if n < 2 {
            return Err(Error::invalid("n must be at least 2"));
        }
        if !theta.is_finite() {
            return Err(Error::invalid("theta must be finite"));
        }
        for (name, v) in [("epsilon", epsilon), ("gamma", gamma), ("beta", beta), ("delta", delta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "{name} must be a positive finite number, got {v}"
                )));
            }
        }
        let a = alpha as f64;
        Ok(Self {
            alpha,
            n,
            theta,
            epsilon,
            gamma,
            beta,
            delta,
            rho_minus: a * epsilon / (epsilon + gamma),
            rho_plus: a * delta / (delta + beta),
        })
    }

    /// Equilibrium parameters: both reservoirs at density fraction `varrho`,
    /// with total rates `ε+γ = δ+β = 1`.
    pub fn equilibrium(alpha: u32, n: usize, theta: f64, varrho: f64) -> Result<Self> {
        if !(varrho > 0.0 && varrho < 1.0) {
            return Err(Error::invalid("equilibrium density fraction must lie in (0, 1)"));
        }
        Self::new(alpha, n, theta, varrho, 1.0 - varrho, 1.0 - varrho, varrho)
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of lattice sites, `N − 1`.
    pub fn sites(&self) -> usize {
        self.n - 1
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn rho_minus(&self) -> f64 {
        self.rho_minus
    }

    pub fn rho_plus(&self) -> f64 {
        self.rho_plus
    }

    /// `ε/(ε+γ)`, the left reservoir density as a fraction of α.
    pub fn left_fraction(&self) -> f64 {
        self.epsilon / (self.epsilon + self.gamma)
    }

    /// `δ/(δ+β)`.
    pub fn right_fraction(&self) -> f64 {
        self.delta / (self.delta + self.beta)
    }

    /// `N^{−θ}`, computed as `exp(−θ ln N)` so θ may be any real.
    pub fn boundary_factor(&self) -> f64 {
        math::exp(-self.theta * math::ln(self.n as f64))
    }

    /// Both reservoirs impose the same density.
    pub fn is_equilibrium(&self) -> bool {
        (self.left_fraction() - self.right_fraction()).abs() <= 1e-15
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.alpha, n, self.theta, self.epsilon, self.gamma, self.beta, self.delta)
    }

    pub fn with_theta(&self, theta: f64) -> Result<Self> {
        Self::new(self.alpha, self.n, theta, self.epsilon, self.gamma, self.beta, self.delta)
    }

    pub fn with_alpha(&self, alpha: u32) -> Result<Self> {
        Self::new(alpha, self.n, self.theta, self.epsilon, self.gamma, self.beta, self.delta)
    }
}
