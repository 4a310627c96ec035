//! Versioned JSON reports with pass/fail checks, written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{HydroError, Result};

/// Version of the report and file-format schema.
pub const SPEC_VERSION: &str = "1.0.0";

/// One contract evaluated by an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Upper bound the value is compared against, when there is one.
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance: Some(tolerance), pass: value <= tolerance }
    }

    /// A boolean contract; `value` carries the quantity behind it.
    pub fn holds(name: impl Into<String>, value: f64, pass: bool) -> Self {
        Self { name: name.into(), value, tolerance: None, pass }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

/// Top-level object of every report file.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub spec_version: &'static str,
    pub kind: &'static str,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(kind: &'static str, seed: u64, checks: Vec<Check>, body: T) -> Self {
        Self { spec_version: SPEC_VERSION, kind, seed, pass: all_pass(&checks), checks, body }
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(format!(".tmp-{}", std::process::id()));
    path.with_file_name(name)
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| HydroError::io(dir, e))?;
    }
    let tmp = temp_path(path);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = fs::remove_file(&tmp);
        HydroError::io(path, e)
    })
}

pub fn emit_report<T: Serialize>(report: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_vec_pretty(report).map_err(|e| HydroError::Json { path: path.into(), source: e })?;
    text.push(b'\n');
    write_atomic(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/empty.json");
        let rows: Vec<f64> = Vec::new();
        emit_report(&Report::new("empty", 3, Vec::new(), rows), &path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["spec_version"], SPEC_VERSION);
        assert_eq!(v["pass"], true);
        assert_eq!(v["body"].as_array().unwrap().len(), 0);
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn checks() {
        assert!(Check::at_most("a", 1.0, 1.0).pass);
        assert!(!Check::at_most("a", f64::NAN, 1.0).pass);
        assert!(!all_pass(&[Check::holds("x", 0.0, true), Check::holds("y", 0.0, false)]));
    }

    #[test]
    fn io_errors_carry_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, b"x").unwrap();
        let err = write_atomic(&blocker.join("out.json"), b"{}").unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}
