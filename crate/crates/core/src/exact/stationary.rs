use alloc::vec::Vec;

use super::linalg::least_squares;
use super::GeneratorMatrix;
use crate::error::{Error, Result};
use crate::math;

/// Largest state space solved by dense QR; larger ones use Gauss–Seidel.
const DENSE_LIMIT: usize = 1024;

/// The unique `π` with `π𝓛 = 0` and `Σπ = 1`.
pub fn stationary_distribution(generator: &GeneratorMatrix) -> Result<Vec<f64>> {
    let n = generator.dim();
    let mut pi = if n <= DENSE_LIMIT { dense_solve(generator)? } else { gauss_seidel(generator)? };
    let total: f64 = pi.iter().sum();
    for p in &mut pi {
        *p = (*p / total).max(0.0);
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);
    let scale = generator.max_exit_rate().max(1.0);
    let residual = generator.left_apply(&pi).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if residual > 1e-10 * scale {
        return Err(Error::Numeric(alloc::format!("stationary residual {residual:e} too large")));
    }
    Ok(pi)
}

fn dense_solve(generator: &GeneratorMatrix) -> Result<Vec<f64>> {
    // [𝓛ᵀ; s·1ᵀ] π = [0; s], with s the largest exit rate to balance the rows.
    let n = generator.dim();
    let s = generator.max_exit_rate().max(1.0);
    let mut a = alloc::vec![0.0; (n + 1) * n];
    for i in 0..n {
        a[i * n + i] = generator.diagonal(i);
        for &(j, r) in generator.off_diagonal(i) {
            a[j * n + i] = r;
        }
    }
    for j in 0..n {
        a[n * n + j] = s;
    }
    let mut b = alloc::vec![0.0; n + 1];
    b[n] = s;
    least_squares(a, n + 1, n, b)
}

fn gauss_seidel(generator: &GeneratorMatrix) -> Result<Vec<f64>> {
    let n = generator.dim();
    // Incoming transitions per state.
    let mut incoming: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); n];
    for i in 0..n {
        for &(j, r) in generator.off_diagonal(i) {
            incoming[j].push((i, r));
        }
    }
    let mut pi = alloc::vec![1.0 / n as f64; n];
    let scale = generator.max_exit_rate().max(1.0);
    // Sweep until the residual stops improving: the error in π is the
    // residual divided by the spectral gap, so stopping early costs accuracy.
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    for _ in 0..200_000 {
        for j in 0..n {
            let inflow: f64 = incoming[j].iter().map(|&(i, r)| pi[i] * r).sum();
            pi[j] = inflow / -generator.diagonal(j);
        }
        let total: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|p| *p /= total);
        let residual = generator.left_apply(&pi).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if residual < 0.9 * best {
            best = residual;
            stalled = 0;
        } else {
            stalled += 1;
        }
        if best <= 1e-12 * scale && stalled >= 20 {
            return Ok(pi);
        }
    }
    Err(Error::Numeric("Gauss–Seidel did not converge".into()))
}

/// `μ e^{t𝓛}` by uniformization.
pub fn transient_distribution(generator: &GeneratorMatrix, initial: &[f64], t: f64) -> Result<Vec<f64>> {
    if initial.len() != generator.dim() {
        return Err(Error::invalid("initial law has the wrong length"));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::invalid("time must be finite and non-negative"));
    }
    let lambda = generator.max_exit_rate();
    if lambda == 0.0 || t == 0.0 {
        return Ok(initial.to_vec());
    }
    // Keep Λ·dt ≤ 50 so that e^{−Λdt} does not underflow.
    let pieces = math::ceil(lambda * t / 50.0).max(1.0) as usize;
    let dt = t / pieces as f64;
    let mut mu = initial.to_vec();
    for _ in 0..pieces {
        mu = uniformized_step(generator, &mu, lambda, lambda * dt);
    }
    Ok(mu)
}

fn uniformized_step(generator: &GeneratorMatrix, mu: &[f64], lambda: f64, mean: f64) -> Vec<f64> {
    let mut weight = math::exp(-mean);
    let mut cumulative = weight;
    let mut term = mu.to_vec();
    let mut out: Vec<f64> = term.iter().map(|v| v * weight).collect();
    let mut k = 0usize;
    while cumulative < 1.0 - 1e-16 || (k as f64) < mean {
        k += 1;
        // term ← term · (I + 𝓛/Λ)
        let lt = generator.left_apply(&term);
        for (t, l) in term.iter_mut().zip(&lt) {
            *t += l / lambda;
        }
        weight *= mean / k as f64;
        cumulative += weight;
        for (o, t) in out.iter_mut().zip(&term) {
            *o += weight * t;
        }
        if k > 10_000 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::generator_matrix;
    use crate::model::{binomial_pmf, ModelParams};

    /// Dense `e^{tA}` by scaling and squaring a Taylor series.
    fn expm(a: &[f64], n: usize, t: f64) -> Vec<f64> {
        let norm = (0..n).map(|i| (0..n).map(|j| a[i * n + j].abs()).sum::<f64>()).fold(0.0, f64::max) * t;
        let mut squarings = 0;
        while norm / (1u64 << squarings) as f64 > 0.5 {
            squarings += 1;
        }
        let s = t / (1u64 << squarings) as f64;
        let mul = |x: &[f64], y: &[f64]| {
            let mut z = alloc::vec![0.0; n * n];
            for i in 0..n {
                for k in 0..n {
                    let xik = x[i * n + k];
                    for j in 0..n {
                        z[i * n + j] += xik * y[k * n + j];
                    }
                }
            }
            z
        };
        let scaled: Vec<f64> = a.iter().map(|v| v * s).collect();
        let mut result = alloc::vec![0.0; n * n];
        let mut term = alloc::vec![0.0; n * n];
        for i in 0..n {
            result[i * n + i] = 1.0;
            term[i * n + i] = 1.0;
        }
        for k in 1..30 {
            term = mul(&term, &scaled).iter().map(|v| v / k as f64).collect();
            for (r, t) in result.iter_mut().zip(&term) {
                *r += t;
            }
        }
        for _ in 0..squarings {
            result = mul(&result, &result);
        }
        result
    }

    #[test]
    fn equilibrium_is_product_binomial() {
        for n in [2usize, 3, 4, 5] {
            let p = ModelParams::new(2, n, 0.0, 1.0, 1.0, 0.6, 0.6).unwrap();
            let g = generator_matrix(&p).unwrap();
            let pi = stationary_distribution(&g).unwrap();
            for x in 1..n {
                let mut marginal = [0.0; 3];
                for (i, &w) in pi.iter().enumerate() {
                    marginal[g.index().decode(i).get(x) as usize] += w;
                }
                for (m, e) in marginal.iter().zip([0.25, 0.5, 0.25]) {
                    assert!((m - e).abs() < 1e-12, "n={n} x={x} {marginal:?}");
                }
            }
            assert!(pi.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn nonequilibrium_mean_profile_is_affine() {
        let p = ModelParams::new(1, 6, 0.0, 0.8, 0.2, 0.7, 0.3).unwrap();
        let g = generator_matrix(&p).unwrap();
        let pi = stationary_distribution(&g).unwrap();
        assert!(g.left_apply(&pi).iter().all(|v| v.abs() < 1e-12));
        let mean: Vec<f64> = (1..6)
            .map(|x| pi.iter().enumerate().map(|(i, w)| w * g.index().decode(i).get(x) as f64).sum())
            .collect();
        for w in mean.windows(3) {
            assert!((w[0] - 2.0 * w[1] + w[2]).abs() < 1e-12, "{mean:?}");
        }
        // Boundary balance: ε(α−m₁) − γm₁ equals the bulk current m₁ − m₂.
        let current = mean[0] - mean[1];
        assert!((0.8 * (1.0 - mean[0]) - 0.2 * mean[0] - current).abs() < 1e-12);
        assert!(current > 0.0);
    }

    #[test]
    fn gauss_seidel_agrees_with_qr() {
        let p = ModelParams::new(1, 9, 0.5, 0.8, 0.2, 0.7, 0.3).unwrap();
        let g = generator_matrix(&p).unwrap();
        let qr = dense_solve(&g).unwrap();
        let gs = gauss_seidel(&g).unwrap();
        let total: f64 = qr.iter().sum();
        for (a, b) in qr.iter().zip(&gs) {
            assert!((a / total - b).abs() < 1e-8 * b, "{} vs {b}", a / total);
        }
        let big = ModelParams::new(1, 12, 0.0, 0.8, 0.2, 0.7, 0.3).unwrap();
        let pi = stationary_distribution(&generator_matrix(&big).unwrap()).unwrap();
        assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let eq = ModelParams::equilibrium(1, 12, 0.0, 0.3).unwrap();
        let g = generator_matrix(&eq).unwrap();
        let pi = stationary_distribution(&g).unwrap();
        for (i, w) in pi.iter().enumerate() {
            let c = g.index().decode(i);
            let nu: f64 = c.as_slice().iter().map(|&k| binomial_pmf(1, k, 0.3)).product();
            assert!((w - nu).abs() < 1e-12);
        }
    }

    #[test]
    fn uniformization_matches_matrix_exponential() {
        let p = ModelParams::new(2, 4, 0.0, 0.8, 0.2, 0.3, 0.7).unwrap();
        let g = generator_matrix(&p).unwrap();
        let n = g.dim();
        let mut mu = alloc::vec![0.0; n];
        mu[0] = 1.0;
        for t in [0.0, 0.05, 0.7, 3.0, 40.0] {
            let u = transient_distribution(&g, &mu, t).unwrap();
            let e = expm(&g.to_dense(), n, t);
            for j in 0..n {
                assert!((u[j] - e[j]).abs() < 1e-11, "t={t} j={j}");
            }
            assert!((u.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        let late = transient_distribution(&g, &mu, 200.0).unwrap();
        let pi = stationary_distribution(&g).unwrap();
        assert!(late.iter().zip(&pi).all(|(a, b)| (a - b).abs() < 1e-10));
    }
}
