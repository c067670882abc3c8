//! Leggett-Garg machinery: sequential two-time correlators, the spatial
//! correlator `K_n`, the 3x3 axis-optimization matrix, closed-form
//! references, the macrorealist bound and a projective-measurement sampler.
//!
//! Sites are 1-based here (the chain ends are sites 1 and `2n - 1`). Times
//! are physical times with `hbar = 1`; for `h = 1` they coincide with the
//! dimensionless `h t` used by scans and reports.

mod correlator;
mod eigen3;
mod kmatrix;
mod oracle;
mod sampler;

pub use correlator::{k_correlator, sequential_correlator, LgiProtocol, MeasurementEvent};
pub use eigen3::{symmetric_eigen3, Eigen3};
pub use kmatrix::{correlator_matrix, optimize_measurement, KMatrix, Optimum, ProtocolStates};
pub use oracle::{classical_bound, noninteracting_k, single_spin_k, LGI_SIGNS};
pub use sampler::{joint_distribution, sample_sequential, JointCounts, SampleOutcome};
