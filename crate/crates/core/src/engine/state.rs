use super::profile::EmpiricalProfile;
use super::rate_table::RateTable;
use crate::error::{Error, Result};
use crate::math::CompensatedSum;
use crate::model::{rates::apply_in_place, Configuration, Event, ModelParams};
use crate::rng::{self, SimRng};

/// Hook invoked while the chain advances.
///
/// `hold` reports each holding interval (in microscopic time) together with
/// the configuration occupied during it; `jump` reports each applied event
/// with the configuration right after it. A holding interval that straddles
/// the end of one `advance_to` call is reported in two pieces.
pub trait Observer {
    #[inline]
    fn hold(&mut self, _config: &Configuration, _micro_dt: f64) {}

    #[inline]
    fn jump(&mut self, _event: Event, _config: &Configuration) {}
}

impl Observer for () {}

impl<O: Observer + ?Sized> Observer for &mut O {
    #[inline]
    fn hold(&mut self, config: &Configuration, micro_dt: f64) {
        (**self).hold(config, micro_dt)
    }

    #[inline]
    fn jump(&mut self, event: Event, config: &Configuration) {
        (**self).jump(event, config)
    }
}

/// A running chain: configuration, rates, clock and its own random stream.
#[derive(Debug, Clone)]
pub struct SimulationState {
    params: ModelParams,
    config: Configuration,
    rates: RateTable,
    clock: CompensatedSum,
    rng: SimRng,
    seed: u64,
    events: u64,
    /// Remaining holding time of a jump cut short by `advance_to`.
    pending_wait: Option<f64>,
}

impl SimulationState {
    /// Builds a state whose random stream is sub-stream 0 of `seed`.
    pub fn new(params: ModelParams, initial: Configuration, seed: u64) -> Result<Self> {
        Self::with_rng(params, initial, rng::stream(seed, 0, 0), seed)
    }

    /// Builds a state from an explicit random stream; `seed` is recorded for
    /// reporting only.
    pub fn with_rng(params: ModelParams, initial: Configuration, rng: SimRng, seed: u64) -> Result<Self> {
        if initial.sites() != params.sites() || initial.alpha() != params.alpha() {
            return Err(Error::InvalidArgument(alloc::format!(
                "configuration (alpha {}, {} sites) does not match parameters (alpha {}, {} sites)",
                initial.alpha(),
                initial.sites(),
                params.alpha(),
                params.sites()
            )));
        }
        let rates = RateTable::build(&params, &initial);
        Ok(Self { params, config: initial, rates, clock: CompensatedSum::new(0.0), rng, seed, events: 0, pending_wait: None })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn rates(&self) -> &RateTable {
        &self.rates
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of events applied so far.
    pub fn event_count(&self) -> u64 {
        self.events
    }

    /// Unscaled process time.
    pub fn micro_time(&self) -> f64 {
        self.clock.value()
    }

    /// `micro_time / N²`.
    pub fn macro_time(&self) -> f64 {
        let n = self.params.n() as f64;
        self.micro_time() / (n * n)
    }

    #[inline]
    fn apply(&mut self, event: Event) {
        let changed = apply_in_place(&mut self.config, event);
        debug_assert!(changed, "sampled an event with zero rate");
        self.rates.refresh_after(&self.params, &self.config, event);
        self.events += 1;
    }

    #[inline]
    fn next_wait(&mut self, total: f64) -> f64 {
        match self.pending_wait.take() {
            Some(w) => w,
            None => rng::exponential(&mut self.rng, total),
        }
    }

    #[inline]
    fn draw_event(&mut self) -> Event {
        let target = rng::uniform(&mut self.rng) * self.rates.total();
        self.rates.select(target)
    }

    /// One jump of the chain: exponential holding time, event chosen with
    /// probability proportional to its rate.
    pub fn step(&mut self) -> Result<(Event, f64)> {
        let total = self.rates.total();
        if !(total > 0.0) {
            return Err(Error::Absorbing);
        }
        let wait = self.next_wait(total);
        let event = self.draw_event();
        self.clock.add(wait);
        self.apply(event);
        Ok((event, wait))
    }

    /// Advances to macroscopic time `t`, i.e. microscopic time `tN²`.
    pub fn run_until(&mut self, t: f64) -> Result<()> {
        self.advance_to(t, &mut ())
    }

    /// [`run_until`](Self::run_until) with an observer.
    ///
    /// The clock stops exactly at `tN²`. The unfinished holding time is kept
    /// for the next call, so splitting a run at intermediate times does not
    /// change the trajectory.
    pub fn advance_to<O: Observer + ?Sized>(&mut self, t: f64, observer: &mut O) -> Result<()> {
        let now = self.macro_time();
        if !(t >= now) {
            return Err(Error::InvalidArgument(alloc::format!(
                "target time {t} precedes current time {now}"
            )));
        }
        let n = self.params.n() as f64;
        let target = t * n * n;
        loop {
            let total = self.rates.total();
            if !(total > 0.0) {
                return Err(Error::Absorbing);
            }
            let wait = self.next_wait(total);
            let clock = self.clock.value();
            if clock + wait > target {
                let rest = target - clock;
                if rest > 0.0 {
                    observer.hold(&self.config, rest);
                }
                self.pending_wait = Some(wait - rest);
                self.clock = CompensatedSum::new(target);
                return Ok(());
            }
            observer.hold(&self.config, wait);
            let event = self.draw_event();
            self.clock.add(wait);
            self.apply(event);
            observer.jump(event, &self.config);
        }
    }

    /// Binned empirical density; see [`EmpiricalProfile::from_config`].
    pub fn snapshot_profile(&self, bins: usize) -> Result<EmpiricalProfile> {
        EmpiricalProfile::from_config(&self.config, bins, self.macro_time())
    }

    /// Largest relative deviation of the maintained rates from a rebuild.
    pub fn rate_deviation(&self) -> f64 {
        self.rates.deviation_from_rebuild(&self.params, &self.config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{event_rate, Profile};
    use alloc::vec::Vec;

    fn params(alpha: u32, n: usize, theta: f64) -> ModelParams {
        ModelParams::new(alpha, n, theta, 0.8, 0.2, 0.8, 0.2).unwrap()
    }

    #[test]
    fn empty_lattice_total_rate() {
        let p = ModelParams::new(2, 9, 0.5, 0.3, 1.0, 1.0, 0.7).unwrap();
        let s = SimulationState::new(p, Configuration::empty(2, 8), 1).unwrap();
        let expected = p.boundary_factor() * (0.3 * 2.0 + 0.7 * 2.0);
        assert!((s.rates().total() - expected).abs() < 1e-14);
        assert_eq!(s.micro_time(), 0.0);
    }

    #[test]
    fn full_lattice_has_no_bulk_activity() {
        let p = params(3, 12, 0.0);
        let s = SimulationState::new(p, Configuration::filled(3, 11, 3), 1).unwrap();
        for x in 1..11 {
            assert_eq!(s.rates().rate(Event::BulkRight(x)), 0.0);
            assert_eq!(s.rates().rate(Event::BulkLeft(x)), 0.0);
        }
        assert!(s.rates().rate(Event::RemoveLeft) > 0.0);
    }

    #[test]
    fn mismatched_configuration_rejected() {
        let p = params(1, 10, 0.0);
        assert!(SimulationState::new(p, Configuration::empty(1, 8), 0).is_err());
        assert!(SimulationState::new(p, Configuration::empty(2, 9), 0).is_err());
    }

    #[test]
    fn incremental_rates_match_rebuild_after_a_million_events() {
        let p = ModelParams::new(3, 40, 0.7, 0.4, 1.3, 0.9, 2.2).unwrap();
        let init = crate::model::sample_initial(&p, &Profile::constant(1.5), &mut rng::stream(3, 1, 0)).unwrap();
        let mut s = SimulationState::new(p, init, 3).unwrap();
        for _ in 0..1_000_000 {
            s.step().unwrap();
        }
        assert!(s.rate_deviation() <= 1e-9, "deviation {}", s.rate_deviation());
        assert!(s.rate_deviation() <= 1e-12);
    }

    #[test]
    fn only_incident_rates_change() {
        let p = params(2, 15, 1.0);
        let init = crate::model::sample_initial(&p, &Profile::constant(1.0), &mut rng::stream(5, 1, 0)).unwrap();
        let mut s = SimulationState::new(p, init, 5).unwrap();
        for _ in 0..2000 {
            let before: Vec<f64> = s.rates().rates().to_vec();
            let (event, _) = s.step().unwrap();
            let touched: Vec<usize> = match event {
                Event::BulkRight(x) | Event::BulkLeft(x) => alloc::vec![x, x + 1],
                Event::InjectLeft | Event::RemoveLeft => alloc::vec![1],
                _ => alloc::vec![14],
            };
            for e in Event::all(15) {
                let incident = match e {
                    Event::BulkRight(y) | Event::BulkLeft(y) => touched.iter().any(|&x| x == y || x == y + 1),
                    Event::InjectLeft | Event::RemoveLeft => touched.contains(&1),
                    _ => touched.contains(&14),
                };
                let now = s.rates().rate(e);
                assert_eq!(now, event_rate(&p, s.config(), e));
                if !incident {
                    assert_eq!(now, before[e.index(15)], "{e:?} changed after {event:?}");
                }
            }
        }
    }

    #[test]
    fn single_site_first_event_frequencies() {
        // N = 2, α = 1, η = (0): only the two injections are possible.
        let p = ModelParams::new(1, 2, 0.0, 0.3, 1.0, 1.0, 0.9).unwrap();
        let runs = 20_000;
        let mut left = 0u32;
        for k in 0..runs {
            let mut s =
                SimulationState::with_rng(p, Configuration::empty(1, 1), rng::stream(77, 5, k), 77).unwrap();
            match s.step().unwrap().0 {
                Event::InjectLeft => left += 1,
                Event::InjectRight => {}
                e => panic!("impossible first event {e:?}"),
            }
        }
        let q = 0.3 / (0.3 + 0.9);
        let freq = left as f64 / runs as f64;
        let se = libm::sqrt(q * (1.0 - q) / runs as f64);
        assert!((freq - q).abs() <= 3.0 * se, "freq {freq} vs {q}");
    }

    #[test]
    fn mean_waiting_time_at_frozen_rates() {
        let p = params(2, 30, 0.0);
        let m = 100_000;
        // revert each jump so the rates stay frozen
        let mut s = SimulationState::new(p, Configuration::filled(2, 29, 1), 8).unwrap();
        let total = s.rates().total();
        let mut acc = 0.0;
        for _ in 0..m {
            let before = s.config().clone();
            let (_, w) = s.step().unwrap();
            acc += w;
            s.config = before;
            s.rates = RateTable::build(&p, &s.config);
        }
        let mean = acc / m as f64;
        assert!((mean - 1.0 / total).abs() <= 3.0 / (total * libm::sqrt(m as f64)));
    }

    #[test]
    fn run_until_semantics() {
        let p = params(1, 100, 0.0);
        let init = crate::model::sample_initial(&p, &Profile::constant(0.5), &mut rng::stream(1, 1, 0)).unwrap();
        let mut a = SimulationState::new(p, init.clone(), 11).unwrap();
        a.run_until(0.0).unwrap();
        assert_eq!(a.event_count(), 0);
        assert_eq!(a.config(), &init);
        a.run_until(0.01).unwrap();
        assert!(a.event_count() > 0);
        assert!((a.macro_time() - 0.01).abs() < 1e-15);
        assert!(a.run_until(0.005).is_err());

        let mut b = SimulationState::new(p, init, 11).unwrap();
        b.run_until(0.01).unwrap();
        assert_eq!(a.config(), b.config());
        assert_eq!(a.event_count(), b.event_count());
        // Splitting the run at intermediate times leaves the path unchanged.
        a.run_until(0.02).unwrap();
        for k in 1..=10 {
            b.run_until(0.01 + k as f64 * 0.001).unwrap();
        }
        assert_eq!(a.config(), b.config());
        assert_eq!(a.event_count(), b.event_count());
    }
}
