use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// A macroscopic density profile `u ↦ g(u)` on `[0, 1]`.
///
/// The same type serves for initial densities (values in `[0, α]`) and for
/// reference-measure fractions `ϱ(u)` (values in `(0, 1)`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Profile {
    Constant { value: f64 },
    /// Affine interpolation between `left` at `u = 0` and `right` at `u = 1`.
    Linear { left: f64, right: f64 },
    /// `left` for `u < at`, `right` for `u ≥ at`.
    Step { at: f64, left: f64, right: f64 },
    /// `offset + slope·u + cos_amp·cos(freq·u) + sin_amp·sin(freq·u)`.
    Harmonic { offset: f64, slope: f64, cos_amp: f64, sin_amp: f64, freq: f64 },
    /// Piecewise-linear interpolation through `(u, value)` nodes sorted by
    /// `u`; constant extension outside the node range.
    Table { points: Vec<[f64; 2]> },
}

impl Profile {
    pub fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    pub fn linear(left: f64, right: f64) -> Self {
        Profile::Linear { left, right }
    }

    pub fn table(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("profile table needs at least one node"));
        }
        if points.windows(2).any(|w| !(w[0][0] < w[1][0])) {
            return Err(Error::invalid("profile table nodes must be strictly increasing in u"));
        }
        if points.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::invalid("profile table contains non-finite values"));
        }
        Ok(Profile::Table { points })
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Profile::Constant { value } => *value,
            Profile::Linear { left, right } => left + (right - left) * u,
            Profile::Step { at, left, right } => {
                if u < *at {
                    *left
                } else {
                    *right
                }
            }
            Profile::Harmonic { offset, slope, cos_amp, sin_amp, freq } => {
                offset + slope * u + cos_amp * math::cos(freq * u) + sin_amp * math::sin(freq * u)
            }
            Profile::Table { points } => {
                let first = points[0];
                let last = points[points.len() - 1];
                if u <= first[0] {
                    return first[1];
                }
                if u >= last[0] {
                    return last[1];
                }
                let k = points.partition_point(|p| p[0] <= u);
                let (a, b) = (points[k - 1], points[k]);
                let w = (u - a[0]) / (b[0] - a[0]);
                a[1] + w * (b[1] - a[1])
            }
        }
    }

    /// Multiplies every value by `factor` (e.g. `g/α` for reference fractions).
    pub fn scaled(&self, factor: f64) -> Profile {
        match self {
            Profile::Constant { value } => Profile::Constant { value: value * factor },
            Profile::Linear { left, right } => {
                Profile::Linear { left: left * factor, right: right * factor }
            }
            Profile::Step { at, left, right } => {
                Profile::Step { at: *at, left: left * factor, right: right * factor }
            }
            Profile::Harmonic { offset, slope, cos_amp, sin_amp, freq } => Profile::Harmonic {
                offset: offset * factor,
                slope: slope * factor,
                cos_amp: cos_amp * factor,
                sin_amp: sin_amp * factor,
                freq: *freq,
            },
            Profile::Table { points } => Profile::Table {
                points: points.iter().map(|p| [p[0], p[1] * factor]).collect(),
            },
        }
    }

    /// An upper bound on the Lipschitz constant on `[0, 1]`, `None` for
    /// discontinuous profiles.
    pub fn lipschitz(&self) -> Option<f64> {
        match self {
            Profile::Constant { .. } => Some(0.0),
            Profile::Linear { left, right } => Some((right - left).abs()),
            Profile::Step { at, left, right } => {
                if left == right || *at <= 0.0 || *at > 1.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
            Profile::Harmonic { slope, cos_amp, sin_amp, freq, .. } => {
                Some(slope.abs() + freq.abs() * (cos_amp.abs() + sin_amp.abs()))
            }
            Profile::Table { points } => Some(
                points
                    .windows(2)
                    .map(|w| ((w[1][1] - w[0][1]) / (w[1][0] - w[0][0])).abs())
                    .fold(0.0, f64::max),
            ),
        }
    }

    /// Minimum and maximum over the table nodes plus a uniform sample of
    /// 2049 points of `[0, 1]`.
    pub fn sampled_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut visit = |v: f64| {
            lo = lo.min(v);
            hi = hi.max(v);
        };
        for i in 0..=2048 {
            visit(self.eval(i as f64 / 2048.0));
        }
        match self {
            Profile::Table { points } => points.iter().for_each(|p| visit(p[1])),
            Profile::Step { left, right, .. } => {
                visit(*left);
                visit(*right);
            }
            _ => {}
        }
        (lo, hi)
    }

    /// Checks that sampled values stay inside `[lo, hi]`.
    pub fn check_range(&self, lo: f64, hi: f64) -> Result<()> {
        let (a, b) = self.sampled_range();
        if !(a.is_finite() && b.is_finite()) || a < lo - 1e-12 || b > hi + 1e-12 {
            return Err(Error::InvalidArgument(alloc::format!(
                "profile range [{a}, {b}] not within [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}
