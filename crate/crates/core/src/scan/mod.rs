//! Experiment drivers: `K_n` time sweeps, first-violation times, light-cone
//! fits and the maximal-violation table.
//!
//! All times in this module are the dimensionless `h t`; conversion to
//! physical time divides by `h`, which must therefore be positive.

mod config;
mod fit;
mod sweep;
mod table;
mod violation;

pub use config::{ModelTemplate, ScanConfig, TimeGrid, DEFAULT_THRESHOLD};
pub use fit::{light_cone_fit, LightConeFit};
pub use sweep::{sweep, taus, DistanceSeries, Peak, ScanPoint, ScanResult, TauSource};
pub use table::{reference_maximum, reproduce_table, table_rows, TableRow, TABLE_TOLERANCE, TABLE_WINDOW};
pub use violation::{first_violation, refine_crossing, REFINE_TOL};
