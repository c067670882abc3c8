//! Hilbert-space plumbing for open spin-1/2 chains.
//!
//! Basis convention: bit `i` of a basis index is site `i` (0-based), and
//! `sigma^z |0> = +|0>`. Site indices are 0-based everywhere in this module;
//! 1-based conversion happens at the LGI and CLI boundaries.

mod chain;
mod hamiltonian;
mod pauli;
mod state;

pub use chain::{Boundary, ChainSpec, Couplings, InteractionRange, MAX_DENSE_SITES, MAX_STATE_SITES};
pub use hamiltonian::{total_magnetization, Bond, Hamiltonian};
pub use pauli::{apply_pauli, apply_pauli_component, Pauli, PauliAxis};
pub(crate) use pauli::apply_axis_raw;
pub use state::StateVector;
