use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Least-squares solution of `A x = b` for a row-major `m × n` matrix with
/// `m ≥ n` and full column rank, by Householder QR.
pub(crate) fn least_squares(mut a: Vec<f64>, m: usize, n: usize, mut b: Vec<f64>) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), m * n);
    debug_assert_eq!(b.len(), m);
    let mut diag = alloc::vec![0.0; n];
    for k in 0..n {
        let norm = math::sqrt((k..m).map(|i| a[i * n + k] * a[i * n + k]).sum());
        if norm == 0.0 {
            return Err(Error::Numeric("rank-deficient least-squares system".into()));
        }
        let alpha = if a[k * n + k] > 0.0 { -norm } else { norm };
        // v = x − αe₁ stored in place of column k.
        a[k * n + k] -= alpha;
        let vnorm2: f64 = (k..m).map(|i| a[i * n + k] * a[i * n + k]).sum();
        diag[k] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k + 1..n {
            let dot: f64 = (k..m).map(|i| a[i * n + k] * a[i * n + j]).sum();
            let s = 2.0 * dot / vnorm2;
            for i in k..m {
                a[i * n + j] -= s * a[i * n + k];
            }
        }
        let dot: f64 = (k..m).map(|i| a[i * n + k] * b[i]).sum();
        let s = 2.0 * dot / vnorm2;
        for i in k..m {
            b[i] -= s * a[i * n + k];
        }
    }
    let scale = diag.iter().fold(0.0f64, |s, d| s.max(d.abs()));
    let mut x = alloc::vec![0.0; n];
    for k in (0..n).rev() {
        if diag[k].abs() <= 1e-14 * scale {
            return Err(Error::Numeric("rank-deficient least-squares system".into()));
        }
        let tail: f64 = (k + 1..n).map(|j| a[k * n + j] * x[j]).sum();
        x[k] = (b[k] - tail) / diag[k];
    }
    Ok(x)
}
