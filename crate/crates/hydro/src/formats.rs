//! CSV exports of trajectories and PDE solutions, and the binary event log.
//!
//! Floating-point fields are written with the shortest representation that
//! parses back to the same value, so reading a file reproduces it exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sep_core::engine::EventLog;
use sep_core::{Configuration, EmpiricalProfile, Event, EventRecord, PdeSolution};

use crate::error::{HydroError, Result};
use crate::report::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub macro_time: f64,
    pub bin_index: usize,
    pub bin_center: f64,
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub t: f64,
    pub u: f64,
    pub rho: f64,
}

pub fn profile_rows(profiles: &[EmpiricalProfile]) -> Vec<ProfileRow> {
    profiles
        .iter()
        .flat_map(|p| {
            p.centers.iter().zip(&p.values).enumerate().map(move |(j, (&c, &v))| ProfileRow {
                macro_time: p.macro_time,
                bin_index: j,
                bin_center: c,
                density: v,
            })
        })
        .collect()
}

pub fn solution_rows(solution: &PdeSolution) -> Vec<SolutionRow> {
    let grid: Vec<f64> = solution.grid().collect();
    solution
        .times
        .iter()
        .zip(&solution.fields)
        .flat_map(|(&t, field)| grid.iter().zip(field).map(move |(&u, &rho)| SolutionRow { t, u, rho }))
        .collect()
}

fn csv_bytes<R: Serialize>(path: &Path, rows: &[R], header: &[&str]) -> Result<Vec<u8>> {
    let wrap = |e: csv::Error| HydroError::Csv { path: path.into(), source: e };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.serialize(r).map_err(wrap)?;
    }
    w.into_inner().map_err(|e| HydroError::Format(format!("{}: {e}", path.display())))
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R], header: &[&str]) -> Result<()> {
    write_atomic(path, &csv_bytes(path, rows, header)?)
}

pub fn read_csv<R: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<R>> {
    let wrap = |e: csv::Error| HydroError::Csv { path: path.into(), source: e };
    let mut r = csv::Reader::from_path(path).map_err(wrap)?;
    r.deserialize().map(|row| row.map_err(wrap)).collect()
}

pub const PROFILE_HEADER: [&str; 4] = ["macro_time", "bin_index", "bin_center", "density"];
pub const SOLUTION_HEADER: [&str; 3] = ["t", "u", "rho"];

pub fn write_profiles(path: &Path, profiles: &[EmpiricalProfile]) -> Result<()> {
    write_csv(path, &profile_rows(profiles), &PROFILE_HEADER)
}

pub fn write_solution(path: &Path, solution: &PdeSolution) -> Result<()> {
    write_csv(path, &solution_rows(solution), &SOLUTION_HEADER)
}

const LOG_MAGIC: &[u8; 8] = b"SEPLOG01";

/// Binary event log, little-endian throughout: magic, `N` (u64), `α` (u32),
/// start and end microscopic times (f64), the initial occupation of each of
/// the `N−1` sites (u32), the record count (u64), then one record per jump:
/// event id (u32) followed by the preceding waiting time (f64).
pub fn encode_event_log(log: &EventLog) -> Vec<u8> {
    let mut out = Vec::with_capacity(48 + 4 * log.initial.sites() + 12 * log.records.len());
    out.extend_from_slice(LOG_MAGIC);
    out.extend_from_slice(&(log.n as u64).to_le_bytes());
    out.extend_from_slice(&log.initial.alpha().to_le_bytes());
    out.extend_from_slice(&log.start_micro.to_le_bytes());
    out.extend_from_slice(&log.end_micro.to_le_bytes());
    for &k in log.initial.as_slice() {
        out.extend_from_slice(&k.to_le_bytes());
    }
    out.extend_from_slice(&(log.records.len() as u64).to_le_bytes());
    for r in &log.records {
        out.extend_from_slice(&(r.event.index(log.n) as u32).to_le_bytes());
        out.extend_from_slice(&r.wait.to_le_bytes());
    }
    out
}

struct Cursor<'a>(&'a [u8]);

impl Cursor<'_> {
    fn take<const K: usize>(&mut self) -> Result<[u8; K]> {
        if self.0.len() < K {
            return Err(HydroError::Format("event log is truncated".into()));
        }
        let (head, rest) = self.0.split_at(K);
        self.0 = rest;
        Ok(head.try_into().expect("length checked"))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
}

pub fn decode_event_log(bytes: &[u8]) -> Result<EventLog> {
    let mut c = Cursor(bytes);
    if &c.take::<8>()? != LOG_MAGIC {
        return Err(HydroError::Format("not an event log (bad magic)".into()));
    }
    let n = c.u64()? as usize;
    if n < 2 {
        return Err(HydroError::Format(format!("event log has invalid size N = {n}")));
    }
    let alpha = c.u32()?;
    let start_micro = c.f64()?;
    let end_micro = c.f64()?;
    let occupancy = (1..n).map(|_| c.u32()).collect::<Result<Vec<_>>>()?;
    let initial = Configuration::new(alpha, occupancy)?;
    let count = c.u64()? as usize;
    if c.0.len() != count.saturating_mul(12) {
        return Err(HydroError::Format(format!("event log declares {count} records but holds {} bytes", c.0.len())));
    }
    let records = (0..count)
        .map(|_| {
            let id = c.u32()? as usize;
            let event = Event::from_index(id, n)
                .ok_or_else(|| HydroError::Format(format!("event id {id} out of range for N = {n}")))?;
            Ok(EventRecord { event, wait: c.f64()? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EventLog { n, start_micro, end_micro, initial, records })
}

pub fn write_event_log(path: &Path, log: &EventLog) -> Result<()> {
    write_atomic(path, &encode_event_log(log))
}

pub fn read_event_log(path: &Path) -> Result<EventLog> {
    let bytes = std::fs::read(path).map_err(|e| HydroError::io(path, e))?;
    decode_event_log(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sep_core::{ModelParams, Profile, SimulationState, TrajectoryOptions};

    fn record() -> sep_core::TrajectoryRecord {
        let p = ModelParams::new(2, 25, 1.0, 0.8, 0.2, 0.8, 0.2).unwrap();
        let init = sep_core::sample_initial(&p, &Profile::constant(1.0), &mut sep_core::rng::stream(3, 0, 0)).unwrap();
        let mut s = SimulationState::new(p, init, 3).unwrap();
        let opts = TrajectoryOptions { keep_configs: false, keep_event_log: true };
        s.record_trajectory(&[0.003, 1.0 / 3.0 * 0.01, 0.01], 6, opts).unwrap()
    }

    #[test]
    fn profile_csv_round_trips_bit_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.csv");
        let rec = record();
        write_profiles(&path, &rec.profiles).unwrap();
        let back: Vec<ProfileRow> = read_csv(&path).unwrap();
        let rows = profile_rows(&rec.profiles);
        assert_eq!(back.len(), 18);
        for (a, b) in back.iter().zip(&rows) {
            assert_eq!(a.macro_time.to_bits(), b.macro_time.to_bits());
            assert_eq!(a.bin_center.to_bits(), b.bin_center.to_bits());
            assert_eq!(a.density.to_bits(), b.density.to_bits());
            assert_eq!(a.bin_index, b.bin_index);
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("macro_time,bin_index,bin_center,density\n"));
    }

    #[test]
    fn event_log_round_trips() {
        let log = record().event_log.unwrap();
        assert!(!log.records.is_empty());
        let bytes = encode_event_log(&log);
        assert_eq!(decode_event_log(&bytes).unwrap(), log);
        assert!(decode_event_log(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode_event_log(&bad).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.bin");
        write_event_log(&path, &log).unwrap();
        assert_eq!(read_event_log(&path).unwrap(), log);
    }

    #[test]
    fn solution_rows_cover_grid_and_times() {
        let bc = sep_core::BoundaryConditionSpec::Neumann;
        let sol = sep_core::solve(&bc, &Profile::linear(0.2, 0.6), 1.0, &[0.0, 0.01], 8, 1e-3).unwrap();
        let rows = solution_rows(&sol);
        assert_eq!(rows.len(), 18);
        assert_eq!(rows[9].t, 0.01);
        assert_eq!(rows[17].u, 1.0);
    }
}
