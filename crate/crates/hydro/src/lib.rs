//! Experiments, file formats and the `sep` command line on top of
//! [`sep_core`].

pub mod config;
pub mod convergence;
pub mod diagnostics;
pub mod discrimination;
pub mod ensemble;
mod error;
pub mod exact_checks;
pub mod formats;
pub mod martingale;
pub mod metrics;
pub mod report;
pub mod cli;

pub use config::RunConfig;
pub use error::{HydroError, Result};
pub use report::{Check, SPEC_VERSION};
