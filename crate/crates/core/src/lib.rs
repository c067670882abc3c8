//! Exact simulation of spin-1/2 Heisenberg chains and the spatial
//! Leggett-Garg correlator `K_n = C(1,n) + C(n,2n-1) - C(1,2n-1)`.
//!
//! The crate is organized bottom-up:
//!
//! * [`spin`]: chain specification, state vectors, matrix-free Pauli and
//!   Hamiltonian application.
//! * [`dynamics`]: time evolution through a sector-blocked dense spectral
//!   decomposition or a Lanczos/Krylov exponential.
//! * [`lgi`]: sequential correlators, `K_n`, the 3x3 measurement-axis
//!   optimization, closed-form references and a shot sampler.
//! * [`scan`]: time sweeps, first-violation detection, light-cone fits and
//!   the maximal-violation table.
//! * [`report`]: the CSV/JSON result schemas shared with the CLI and the
//!   plotting scripts.
//!
//! Units: `hbar = 1`. Library calls take physical times; scans and reports
//! use the dimensionless product `h * t`.

// NaN must fail range checks, and index loops mirror the linear algebra.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dynamics;
pub mod error;
pub mod lgi;
pub mod report;
pub mod scan;
pub mod spin;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Version string embedded in every result file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
