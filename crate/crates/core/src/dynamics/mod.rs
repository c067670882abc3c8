//! Time evolution `|psi(t)> = exp(-iHt) |psi(0)>`.
//!
//! Two engines sit behind [`Propagator`]: an exact spectral decomposition
//! computed per magnetization sector, and a Lanczos (Krylov subspace)
//! exponential with full re-orthogonalization. The spectral engine doubles
//! as the reference oracle for the Krylov one.

mod krylov;
mod propagator;
mod spectral;
mod symeig;

pub use krylov::{krylov_expm, KrylovOutcome};
pub use propagator::{Direction, Engine, KrylovSettings, Propagator, AUTO_DENSE_MAX_SITES};
pub use spectral::{evolve_spectral_reference, SpectralDecomposition};
