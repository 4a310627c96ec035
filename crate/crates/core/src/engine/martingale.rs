use alloc::vec::Vec;

use super::trajectory::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::math::CompensatedSum;
use crate::model::{Configuration, Event, ModelParams};

/// Coefficients of `N²𝓛_N⟨π^N, G⟩` and of the carré du champ
/// `N²(𝓛_N⟨π^N,G⟩² − 2⟨π^N,G⟩𝓛_N⟨π^N,G⟩)` for a fixed test function `G`.
///
/// The drift is affine in `η`:
///
/// ```text
/// N²𝓛⟨π,G⟩ = α/(N−1) Σ_x η(x) Δ_N G(x/N)
///          + (ε+γ)N^{2−θ}/(N−1) [ρ₋ − η(1)] G(1/N)   + αN²/(N−1) η(1)   [G(1/N) − G(0)]
///          + (δ+β)N^{2−θ}/(N−1) [ρ₊ − η(N−1)] G(1−1/N) + αN²/(N−1) η(N−1) [G(1−1/N) − G(1)]
/// ```
///
/// and the quadratic-variation rate is
///
/// ```text
/// N²/(N−1)² Σ_{x=1}^{N−2} {c_{x,x+1} + c_{x+1,x}} [G((x+1)/N) − G(x/N)]²
///   + N^{2−θ}/(N−1)² { (γη(1) + ε[α−η(1)]) G(1/N)² + (βη(N−1) + δ[α−η(N−1)]) G(1−1/N)² }.
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleWeights {
    params: ModelParams,
    /// `G(x/N)` for `x = 0..=N`.
    values: Vec<f64>,
    /// Drift coefficient of `η(x)`, index `x − 1`.
    drift: Vec<f64>,
    drift_const: f64,
    /// `[G((x+1)/N) − G(x/N)]²` for bonds `x = 1..=N−2`, index `x − 1`.
    bond_sq: Vec<f64>,
}

pub fn martingale_weights<G: Fn(f64) -> f64>(params: &ModelParams, g: G) -> MartingaleWeights {
    let n = params.n();
    let nf = n as f64;
    let alpha = params.alpha() as f64;
    let values: Vec<f64> = (0..=n).map(|k| g(k as f64 / nf)).collect();
    let scale = nf * nf / (nf - 1.0);
    let reservoir = nf * nf * params.boundary_factor() / (nf - 1.0);
    let mut drift: Vec<f64> = (1..n)
        .map(|x| alpha * scale * (values[x - 1] - 2.0 * values[x] + values[x + 1]))
        .collect();
    let last = n - 1;
    let (left_total, right_total) =
        (params.epsilon() + params.gamma(), params.delta() + params.beta());
    drift[0] += -left_total * reservoir * values[1] + alpha * scale * (values[1] - values[0]);
    drift[last - 1] +=
        -right_total * reservoir * values[last] + alpha * scale * (values[last] - values[n]);
    let drift_const = left_total * reservoir * params.rho_minus() * values[1]
        + right_total * reservoir * params.rho_plus() * values[last];
    let bond_sq = (1..n.saturating_sub(1))
        .map(|x| {
            let d = values[x + 1] - values[x];
            d * d
        })
        .collect();
    MartingaleWeights { params: *params, values, drift, drift_const, bond_sq }
}

impl MartingaleWeights {
    /// `⟨π^N, G⟩`.
    pub fn pairing(&self, config: &Configuration) -> f64 {
        config.as_slice().iter().zip(&self.values[1..]).map(|(&v, g)| v as f64 * g).sum::<f64>()
            / config.sites() as f64
    }

    /// `N²𝓛_N⟨π^N, G⟩(η)`.
    pub fn drift(&self, config: &Configuration) -> f64 {
        self.drift_const
            + config.as_slice().iter().zip(&self.drift).map(|(&v, w)| v as f64 * w).sum::<f64>()
    }

    #[inline]
    fn bond_term(&self, config: &Configuration, x: usize) -> f64 {
        let a = config.alpha();
        let (l, r) = (config.get(x), config.get(x + 1));
        (l * (a - r) + r * (a - l)) as f64 * self.bond_sq[x - 1]
    }

    #[inline]
    fn boundary_qv(&self, config: &Configuration) -> f64 {
        let p = &self.params;
        let a = p.alpha() as f64;
        let last = config.sites();
        let (l, r) = (config.get(1) as f64, config.get(last) as f64);
        let (gl, gr) = (self.values[1], self.values[last]);
        p.gamma() * l * gl * gl
            + p.epsilon() * (a - l) * gl * gl
            + p.beta() * r * gr * gr
            + p.delta() * (a - r) * gr * gr
    }

    fn factors(&self) -> (f64, f64) {
        let nf = self.params.n() as f64;
        let bulk = nf * nf / ((nf - 1.0) * (nf - 1.0));
        (bulk, bulk * self.params.boundary_factor())
    }

    /// Quadratic-variation rate of the Dynkin martingale in state `η`.
    pub fn qv_rate(&self, config: &Configuration) -> f64 {
        let (bulk, boundary) = self.factors();
        let bonds: f64 = (1..config.sites()).map(|x| self.bond_term(config, x)).sum();
        bulk * bonds + boundary * self.boundary_qv(config)
    }
}

/// `M_t(G)` and `∫_0^t` of its quadratic-variation rate, at each requested time.
#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub quadratic_variation: Vec<f64>,
}

/// Evaluates the Dynkin martingale
/// `M_t(G) = ⟨π_t,G⟩ − ⟨π_0,G⟩ − ∫_0^t N²𝓛_N⟨π_s,G⟩ ds`
/// along a recorded trajectory. The integrand is piecewise constant between
/// jumps, so the integral is exact. Times are macroscopic and must lie in the
/// span of the event log.
pub fn dynkin_martingale<G: Fn(f64) -> f64>(
    trajectory: &TrajectoryRecord,
    params: &ModelParams,
    g: G,
    times: &[f64],
) -> Result<MartingaleSeries> {
    let log = trajectory.event_log.as_ref().ok_or_else(|| {
        Error::Unsupported("the Dynkin martingale needs a trajectory recorded with its event log".into())
    })?;
    if log.n != params.n() || log.initial.alpha() != params.alpha() {
        return Err(Error::invalid("event log does not belong to these parameters"));
    }
    let nf = params.n() as f64;
    let n2 = nf * nf;
    let start = log.start_micro / n2;
    let end = log.end_micro / n2;
    if times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("martingale times must be non-decreasing"));
    }
    if times.iter().any(|&t| t < start - 1e-12 || t > end + 1e-12) {
        return Err(Error::InvalidArgument(alloc::format!(
            "martingale times must lie within the logged span [{start}, {end}]"
        )));
    }

    let w = martingale_weights(params, g);
    let (bulk_qv, boundary_qv) = w.factors();
    let mut config = log.initial.clone();
    let initial_pairing = w.pairing(&config);
    let mut pairing = initial_pairing;
    let mut drift = w.drift(&config);
    let mut qv = w.qv_rate(&config);
    let mut drift_integral = CompensatedSum::new(0.0);
    let mut qv_integral = CompensatedSum::new(0.0);
    let mut now = start;

    let mut out = MartingaleSeries {
        times: times.to_vec(),
        values: Vec::with_capacity(times.len()),
        quadratic_variation: Vec::with_capacity(times.len()),
    };
    let mut pending = times.iter().copied().peekable();
    let inv_sites = 1.0 / config.sites() as f64;

    let mut emit_until = |limit: f64,
                          now: f64,
                          pairing: f64,
                          drift: f64,
                          qv: f64,
                          di: &CompensatedSum,
                          qi: &CompensatedSum,
                          out: &mut MartingaleSeries| {
        while let Some(&t) = pending.peek() {
            if t > limit {
                break;
            }
            let dt = (t - now).max(0.0);
            out.values.push(pairing - initial_pairing - (di.value() + drift * dt));
            out.quadratic_variation.push(qi.value() + qv * dt);
            pending.next();
        }
    };

    for rec in &log.records {
        let next = now + rec.wait / n2;
        emit_until(next, now, pairing, drift, qv, &drift_integral, &qv_integral, &mut out);
        let ds = next - now;
        drift_integral.add(drift * ds);
        qv_integral.add(qv * ds);
        now = next;

        // Update the affine drift, the pairing and the touched bond terms.
        let (first, count) = match rec.event {
            Event::BulkRight(x) | Event::BulkLeft(x) => (x, 2),
            Event::InjectLeft | Event::RemoveLeft => (1, 1),
            Event::InjectRight | Event::RemoveRight => (config.sites(), 1),
        };
        let touched = first..first + count;
        let bonds = |c: &Configuration| -> f64 {
            let mut s = 0.0;
            let lo = first.saturating_sub(1).max(1);
            let hi = (first + count - 1).min(c.sites() - 1);
            for b in lo..=hi {
                s += w.bond_term(c, b);
            }
            s
        };
        let old_bonds = if config.sites() > 1 { bonds(&config) } else { 0.0 };
        let old_boundary = w.boundary_qv(&config);
        let mut before = [0u32; 2];
        for (slot, x) in before.iter_mut().zip(touched.clone()) {
            *slot = config.get(x);
        }
        crate::model::rates::apply_in_place(&mut config, rec.event);
        for (x, &b) in touched.zip(&before) {
            let dv = config.get(x) as f64 - b as f64;
            drift += w.drift[x - 1] * dv;
            pairing += w.values[x] * dv * inv_sites;
        }
        let new_bonds = if config.sites() > 1 { bonds(&config) } else { 0.0 };
        qv += bulk_qv * (new_bonds - old_bonds) + boundary_qv * (w.boundary_qv(&config) - old_boundary);
    }
    emit_until(f64::INFINITY, now, pairing, drift, qv, &drift_integral, &qv_integral, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{SimulationState, TrajectoryOptions};
    use crate::model::{apply_event, event_rate, integrate_test_function, sample_initial, Profile};
    use crate::rng;

    /// Direct generator action: Σ_e rate_e (F(η^e) − F(η)) and Σ_e rate_e (F(η^e) − F(η))².
    fn generator_oracle(params: &ModelParams, c: &Configuration, g: &dyn Fn(f64) -> f64) -> (f64, f64) {
        let n2 = (params.n() * params.n()) as f64;
        let f0 = integrate_test_function(c, g);
        let mut drift = 0.0;
        let mut qv = 0.0;
        for e in Event::all(params.n()) {
            let r = event_rate(params, c, e);
            let d = integrate_test_function(&apply_event(c, e), g) - f0;
            drift += r * d;
            qv += r * d * d;
        }
        (n2 * drift, n2 * qv)
    }

    #[test]
    fn closed_forms_match_generator() {
        let g = |u: f64| (3.0 * u).sin() + u * u;
        for (alpha, n, theta) in [(1u32, 2usize, 0.0), (2, 3, 0.5), (3, 9, 1.0), (2, 30, -0.5), (1, 12, 2.0)] {
            let p = ModelParams::new(alpha, n, theta, 0.7, 0.4, 1.3, 0.2).unwrap();
            let w = martingale_weights(&p, g);
            let mut r = rng::stream(3, 3, n as u64);
            for _ in 0..20 {
                let c = sample_initial(&p, &Profile::constant(alpha as f64 * 0.5), &mut r).unwrap();
                let (d, q) = generator_oracle(&p, &c, &g);
                assert!((w.drift(&c) - d).abs() <= 1e-9 * (1.0 + d.abs()), "drift {} vs {d}", w.drift(&c));
                assert!((w.qv_rate(&c) - q).abs() <= 1e-9 * (1.0 + q.abs()), "qv {} vs {q}", w.qv_rate(&c));
            }
        }
    }

    fn recorded(seed: u64, log: bool) -> (ModelParams, TrajectoryRecord) {
        let p = ModelParams::new(2, 20, 0.0, 0.8, 0.2, 0.2, 0.8).unwrap();
        let init = sample_initial(&p, &Profile::constant(1.0), &mut rng::stream(seed, 1, 0)).unwrap();
        let mut s = SimulationState::new(p, init, seed).unwrap();
        let opts = TrajectoryOptions { keep_configs: true, keep_event_log: log };
        (p, s.record_trajectory(&[0.02, 0.05], 4, opts).unwrap())
    }

    #[test]
    fn zero_test_function_gives_zero() {
        let (p, rec) = recorded(1, true);
        let m = dynkin_martingale(&rec, &p, |_| 0.0, &[0.0, 0.01, 0.05]).unwrap();
        assert!(m.values.iter().all(|&v| v == 0.0));
        assert!(m.quadratic_variation.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn missing_log_is_unsupported() {
        let (p, rec) = recorded(1, false);
        assert!(matches!(dynkin_martingale(&rec, &p, |u| u, &[0.01]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn incremental_replay_matches_direct_evaluation() {
        // Pairing at the final time equals ⟨π,G⟩ of the recorded configuration,
        // and the drift integral equals a naive replay.
        let (p, rec) = recorded(7, true);
        let g = |u: f64| (u * 5.0).cos();
        let m = dynkin_martingale(&rec, &p, g, &[0.05]).unwrap();
        let log = rec.event_log.as_ref().unwrap();
        let w = martingale_weights(&p, g);
        let n2 = 400.0;
        let mut c = log.initial.clone();
        let mut integral = 0.0;
        let mut qv = 0.0;
        let mut t = 0.0;
        for r in &log.records {
            integral += w.drift(&c) * r.wait / n2;
            qv += w.qv_rate(&c) * r.wait / n2;
            t += r.wait / n2;
            c = apply_event(&c, r.event);
        }
        integral += w.drift(&c) * (0.05 - t);
        qv += w.qv_rate(&c) * (0.05 - t);
        let expected = w.pairing(&c) - w.pairing(&log.initial) - integral;
        assert!((m.values[0] - expected).abs() < 1e-9, "{} vs {expected}", m.values[0]);
        assert!((m.quadratic_variation[0] - qv).abs() < 1e-9 * (1.0 + qv));
        assert_eq!(&c, rec.configs.as_ref().unwrap().last().unwrap());
    }

    #[test]
    fn rejects_times_outside_the_log() {
        let (p, rec) = recorded(2, true);
        assert!(dynkin_martingale(&rec, &p, |u| u, &[0.06]).is_err());
        assert!(dynkin_martingale(&rec, &p, |u| u, &[0.03, 0.01]).is_err());
    }
}
