//! Exact continuous-time simulation of the chain (Gillespie direct method on
//! a sum tree) observed on the diffusive clock: macroscopic time `t`
//! corresponds to microscopic time `tN²`.

mod martingale;
mod profile;
mod rate_table;
mod state;
mod trajectory;

pub use martingale::{dynkin_martingale, martingale_weights, MartingaleSeries, MartingaleWeights};
pub use profile::{bin_of_site, EmpiricalProfile};
pub use rate_table::RateTable;
pub use state::{Observer, SimulationState};
pub use trajectory::{EventLog, EventLogger, EventRecord, TrajectoryOptions, TrajectoryRecord};
