use super::Configuration;
use crate::error::{Error, Result};

/// `⟨π^N, G⟩ = (1/(N−1)) Σ_x η(x) G(x/N)`.
pub fn integrate_test_function<G: Fn(f64) -> f64>(config: &Configuration, g: G) -> f64 {
    let sites = config.sites();
    let n = (sites + 1) as f64;
    config
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &v)| v as f64 * g((i + 1) as f64 / n))
        .sum::<f64>()
        / sites as f64
}

/// `Δ_N G(x/N) = N²[G((x−1)/N) − 2G(x/N) + G((x+1)/N)]`, for `1 ≤ x ≤ N−1`.
pub fn discrete_laplacian<G: Fn(f64) -> f64>(g: G, x: usize, n: usize) -> Result<f64> {
    if n < 2 || x < 1 || x + 1 > n {
        return Err(Error::InvalidArgument(alloc::format!(
            "laplacian stencil at x = {x} leaves [0, 1] for N = {n}"
        )));
    }
    let nf = n as f64;
    let u = |k: usize| k as f64 / nf;
    Ok(nf * nf * (g(u(x - 1)) - 2.0 * g(u(x)) + g(u(x + 1))))
}

/// `∇⁺_N G(x/N) = N[G((x+1)/N) − G(x/N)]`, for `0 ≤ x ≤ N−1`.
pub fn discrete_gradient_plus<G: Fn(f64) -> f64>(g: G, x: usize, n: usize) -> Result<f64> {
    if n < 1 || x + 1 > n {
        return Err(Error::InvalidArgument(alloc::format!(
            "gradient stencil at x = {x} leaves [0, 1] for N = {n}"
        )));
    }
    let nf = n as f64;
    Ok(nf * (g((x + 1) as f64 / nf) - g(x as f64 / nf)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Direction {
    /// Sites `z+1, …, z+L`.
    Right,
    /// Sites `z−L, …, z−1`.
    Left,
}

/// Mean occupation over the `len` sites strictly to one side of `z`.
pub fn windowed_average(config: &Configuration, z: usize, len: usize, direction: Direction) -> Result<f64> {
    let sites = config.sites();
    let range = match direction {
        Direction::Right if len >= 1 && z >= 1 && z + len <= sites => (z + 1)..=(z + len),
        Direction::Left if len >= 1 && z <= sites && z > len => (z - len)..=(z - 1),
        _ => {
            return Err(Error::InvalidArgument(alloc::format!(
                "window of length {len} {direction:?} of site {z} does not fit in 1..={sites}"
            )))
        }
    };
    let total: u64 = range.map(|y| config.get(y) as u64).sum();
    Ok(total as f64 / len as f64)
}
