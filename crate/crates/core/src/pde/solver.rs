use alloc::vec::Vec;

use super::BoundaryConditionSpec;
use crate::error::{Error, Result};
use crate::math;
use crate::model::Profile;

pub const DEFAULT_GRID: usize = 512;

/// Number of backward-Euler half steps taken before Crank–Nicolson, to damp
/// the stiff modes excited by non-smooth or boundary-incompatible data.
const STARTUP_HALF_STEPS: usize = 4;

/// Grid values of `ρ_t` on `u_i = i/M`, `i = 0..=M`, at each checkpoint.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PdeSolution {
    pub alpha: f64,
    pub m: usize,
    /// Time step actually used (the requested one shrunk to divide the horizon).
    pub dt: f64,
    pub bc: BoundaryConditionSpec,
    pub times: Vec<f64>,
    pub fields: Vec<Vec<f64>>,
}

impl PdeSolution {
    pub fn h(&self) -> f64 {
        1.0 / self.m as f64
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.m).map(move |i| i as f64 / self.m as f64)
    }

    /// Trapezoid mass `∫ρ du` of checkpoint `k`.
    pub fn mass(&self, k: usize) -> f64 {
        trapezoid(&self.fields[k])
    }

    /// Piecewise-linear interpolation of checkpoint `k` at `u ∈ [0, 1]`.
    pub fn eval(&self, k: usize, u: f64) -> f64 {
        let f = &self.fields[k];
        let s = (u.clamp(0.0, 1.0) * self.m as f64).min(self.m as f64);
        let i = (math::floor(s) as usize).min(self.m - 1);
        let w = s - i as f64;
        f[i] * (1.0 - w) + f[i + 1] * w
    }

    /// Averages of the piecewise-linear interpolant of checkpoint `k` over
    /// `bins` equal cells of `[0, 1]`, integrated exactly.
    pub fn bin_average(&self, k: usize, bins: usize) -> Vec<f64> {
        let f = &self.fields[k];
        let mf = self.m as f64;
        // ∫_0^u of the interpolant.
        let primitive = |u: f64| -> f64 {
            let s = (u * mf).clamp(0.0, mf);
            let i = (math::floor(s) as usize).min(self.m - 1);
            let w = s - i as f64;
            let mut acc = 0.0;
            for j in 0..i {
                acc += 0.5 * (f[j] + f[j + 1]);
            }
            acc += w * f[i] + 0.5 * w * w * (f[i + 1] - f[i]);
            acc / mf
        };
        let mut prev = 0.0;
        (1..=bins)
            .map(|b| {
                let next = primitive(b as f64 / bins as f64);
                let avg = (next - prev) * bins as f64;
                prev = next;
                avg
            })
            .collect()
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.fields.iter().flatten().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
    }
}

pub(crate) fn trapezoid(f: &[f64]) -> f64 {
    let m = f.len() - 1;
    let inner: f64 = f[1..m].iter().sum();
    (inner + 0.5 * (f[0] + f[m])) / m as f64
}

/// Tridiagonal operator `A` and source `b` of the semi-discrete system
/// `u' = A u + b`. Dirichlet rows are left empty; they are pinned in the step.
struct Operator {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    source: Vec<f64>,
    pinned: Option<(f64, f64)>,
}

fn operator(bc: &BoundaryConditionSpec, alpha: f64, m: usize) -> Operator {
    let h = 1.0 / m as f64;
    let k = alpha / (h * h);
    let mut lower = alloc::vec![k; m + 1];
    let mut diag = alloc::vec![-2.0 * k; m + 1];
    let mut upper = alloc::vec![k; m + 1];
    let mut source = alloc::vec![0.0; m + 1];
    let pinned = match bc.flux() {
        None => {
            let BoundaryConditionSpec::Dirichlet { rho_minus, rho_plus } = *bc else { unreachable!() };
            for i in [0, m] {
                lower[i] = 0.0;
                diag[i] = 0.0;
                upper[i] = 0.0;
            }
            Some((rho_minus, rho_plus))
        }
        Some((left, right, rho_minus, rho_plus)) => {
            // Ghost values u₋₁ = u₁ − 2h·left·(u₀ − ρ₋), u_{M+1} = u_{M−1} + 2h·right·(ρ₊ − u_M).
            diag[0] = k * (-2.0 - 2.0 * h * left);
            upper[0] = 2.0 * k;
            source[0] = 2.0 * alpha * left * rho_minus / h;
            diag[m] = k * (-2.0 - 2.0 * h * right);
            lower[m] = 2.0 * k;
            source[m] = 2.0 * alpha * right * rho_plus / h;
            None
        }
    };
    lower[0] = 0.0;
    upper[m] = 0.0;
    Operator { lower, diag, upper, source, pinned }
}

impl Operator {
    /// One θ-scheme step: `(I − θτA) u⁺ = (I + (1−θ)τA) u + τ b`.
    fn step(&self, u: &mut Vec<f64>, tau: f64, theta: f64, scratch: &mut Scratch) {
        let n = u.len();
        let explicit = (1.0 - theta) * tau;
        for i in 0..n {
            let mut au = self.diag[i] * u[i];
            if i > 0 {
                au += self.lower[i] * u[i - 1];
            }
            if i + 1 < n {
                au += self.upper[i] * u[i + 1];
            }
            scratch.rhs[i] = u[i] + explicit * au + tau * self.source[i];
            scratch.a[i] = -theta * tau * self.lower[i];
            scratch.b[i] = 1.0 - theta * tau * self.diag[i];
            scratch.c[i] = -theta * tau * self.upper[i];
        }
        if let Some((l, r)) = self.pinned {
            scratch.rhs[0] = l;
            scratch.rhs[n - 1] = r;
        }
        thomas(&scratch.a, &scratch.b, &scratch.c, &mut scratch.rhs, &mut scratch.work);
        u.copy_from_slice(&scratch.rhs);
    }
}

struct Scratch {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    rhs: Vec<f64>,
    work: Vec<f64>,
}

/// Solves a tridiagonal system in place (`d` becomes the solution).
fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &mut [f64], cp: &mut [f64]) {
    let n = d.len();
    cp[0] = c[0] / b[0];
    d[0] /= b[0];
    for i in 1..n {
        let denom = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / denom;
        d[i] = (d[i] - a[i] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] -= cp[i] * d[i + 1];
    }
}

/// Crank–Nicolson in time (after a short backward-Euler start), centred
/// differences in space, flux boundaries through eliminated ghost points.
/// The field at each checkpoint is interpolated linearly between steps.
pub fn solve(
    bc: &BoundaryConditionSpec,
    g: &Profile,
    alpha: f64,
    checkpoints: &[f64],
    m: usize,
    dt: f64,
) -> Result<PdeSolution> {
    if m < 2 {
        return Err(Error::invalid("the grid needs at least two cells"));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("time step must be positive"));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("α must be positive"));
    }
    if checkpoints.iter().any(|&t| !(t >= 0.0 && t.is_finite())) || checkpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("checkpoints must be finite, non-negative and sorted"));
    }
    bc.validate(alpha)?;
    g.check_range(0.0, alpha)?;

    let op = operator(bc, alpha, m);
    let mut u: Vec<f64> = (0..=m).map(|i| g.eval(i as f64 / m as f64)).collect();
    let horizon = checkpoints.last().copied().unwrap_or(0.0);
    let steps = math::ceil(horizon / dt).max(1.0) as usize;
    let tau = if horizon > 0.0 { horizon / steps as f64 } else { dt };
    let mut scratch = Scratch {
        a: alloc::vec![0.0; m + 1],
        b: alloc::vec![0.0; m + 1],
        c: alloc::vec![0.0; m + 1],
        rhs: alloc::vec![0.0; m + 1],
        work: alloc::vec![0.0; m + 1],
    };

    let mut fields = Vec::with_capacity(checkpoints.len());
    let mut pending = checkpoints.iter().peekable();
    while let Some(&&t) = pending.peek() {
        if t > 0.0 {
            break;
        }
        fields.push(u.clone());
        pending.next();
    }
    let mut prev = u.clone();
    let mut now = 0.0;
    let mut step = 0usize;
    while pending.peek().is_some() {
        prev.copy_from_slice(&u);
        if step * 2 < STARTUP_HALF_STEPS {
            op.step(&mut u, 0.5 * tau, 1.0, &mut scratch);
            op.step(&mut u, 0.5 * tau, 1.0, &mut scratch);
        } else {
            op.step(&mut u, tau, 0.5, &mut scratch);
        }
        step += 1;
        let next = if step == steps { horizon } else { step as f64 * tau };
        while let Some(&&t) = pending.peek() {
            if t > next && step < steps {
                break;
            }
            let w = ((t - now) / (next - now)).clamp(0.0, 1.0);
            fields.push(prev.iter().zip(&u).map(|(a, b)| a * (1.0 - w) + b * w).collect());
            pending.next();
        }
        now = next;
    }
    Ok(PdeSolution { alpha, m, dt: tau, bc: *bc, times: checkpoints.to_vec(), fields })
}
