use alloc::vec::Vec;

use super::profile::EmpiricalProfile;
use super::state::{Observer, SimulationState};
use crate::error::{Error, Result};
use crate::model::{Configuration, Event};

/// One applied jump and the holding time that preceded it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub event: Event,
    pub wait: f64,
}

/// Complete jump history between two microscopic times.
#[derive(Debug, Clone, PartialEq)]
pub struct EventLog {
    pub n: usize,
    pub start_micro: f64,
    pub end_micro: f64,
    pub initial: Configuration,
    pub records: Vec<EventRecord>,
}

/// Observer collecting an [`EventLog`]. Each recorded wait is the time
/// elapsed since the previous recorded jump (or since logging began).
#[derive(Debug, Clone)]
pub struct EventLogger {
    records: Vec<EventRecord>,
    elapsed: f64,
}

impl EventLogger {
    pub fn new() -> Self {
        Self { records: Vec::new(), elapsed: 0.0 }
    }

    pub fn finish(self, n: usize, initial: Configuration, start_micro: f64, end_micro: f64) -> EventLog {
        EventLog { n, start_micro, end_micro, initial, records: self.records }
    }
}

impl Default for EventLogger {
    fn default() -> Self {
        Self::new()
    }
}

impl Observer for EventLogger {
    #[inline]
    fn hold(&mut self, _config: &Configuration, micro_dt: f64) {
        self.elapsed += micro_dt;
    }

    #[inline]
    fn jump(&mut self, event: Event, _config: &Configuration) {
        self.records.push(EventRecord { event, wait: self.elapsed });
        self.elapsed = 0.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrajectoryOptions {
    /// Keep the raw configuration at every sample time.
    pub keep_configs: bool,
    /// Keep the full event log (needed by the Dynkin martingale).
    pub keep_event_log: bool,
}

/// Snapshots of one trajectory at increasing macroscopic times.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub profiles: Vec<EmpiricalProfile>,
    pub configs: Option<Vec<Configuration>>,
    pub event_count: u64,
    pub event_log: Option<EventLog>,
}

impl SimulationState {
    /// Runs through `times` (strictly increasing, not before the current
    /// time) and snapshots the state at each of them.
    pub fn record_trajectory(
        &mut self,
        times: &[f64],
        bins: usize,
        options: TrajectoryOptions,
    ) -> Result<TrajectoryRecord> {
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("sample times must be strictly increasing"));
        }
        if let Some(&first) = times.first() {
            if !(first >= self.macro_time()) {
                return Err(Error::invalid("sample times must not precede the current time"));
            }
        }
        let initial = self.config().clone();
        let start_micro = self.micro_time();
        let start_events = self.event_count();
        let mut logger = EventLogger::new();
        let mut profiles = Vec::with_capacity(times.len());
        let mut configs = options.keep_configs.then(Vec::new);
        for &t in times {
            if options.keep_event_log {
                self.advance_to(t, &mut logger)?;
            } else {
                self.run_until(t)?;
            }
            profiles.push(self.snapshot_profile(bins)?);
            if let Some(c) = configs.as_mut() {
                c.push(self.config().clone());
            }
        }
        let event_log = options
            .keep_event_log
            .then(|| logger.finish(self.params().n(), initial, start_micro, self.micro_time()));
        Ok(TrajectoryRecord {
            times: times.to_vec(),
            profiles,
            configs,
            event_count: self.event_count() - start_events,
            event_log,
        })
    }
}
