use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::chain::{ChainSpec, MAX_DENSE_SITES};
use super::state::{check_capacity, inner, StateVector};
use crate::dynamics::SpectralDecomposition;
use crate::error::{Error, Result};
use crate::C64;

/// One exchange bond, stored as the bit mask of its two sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub sites: (usize, usize),
    mask: usize,
    /// Matrix element `<k ^ mask| H |k>` for anti-aligned spins: `2 J xy`.
    flip: f64,
}

/// Matrix-free chain Hamiltonian.
///
/// The operator is real in the computational basis: the `zz` and field terms
/// are diagonal and `sx sx + sy sy` only swaps anti-aligned pairs with
/// amplitude 2. The diagonal is tabulated once; off-diagonal work is
/// `O(2^N)` per bond.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    spec: ChainSpec,
    bonds: Vec<Bond>,
    diag: Vec<f64>,
    spectral: OnceLock<SpectralDecomposition>,
}

impl Hamiltonian {
    pub fn new(spec: ChainSpec) -> Result<Self> {
        spec.validate()?;
        let dim = check_capacity(spec.n_sites)?;
        let j = spec.coupling_j;
        let bonds: Vec<Bond> = spec
            .bonds()
            .into_iter()
            .map(|(a, b)| Bond {
                sites: (a, b),
                mask: (1 << a) | (1 << b),
                flip: 2.0 * j * spec.couplings.xy,
            })
            .collect();
        let jz = j * spec.couplings.zz;
        let half_h = 0.5 * spec.field_h;
        let n = spec.n_sites;
        let diag = (0..dim)
            .map(|k| {
                let ones = (k.count_ones()) as f64;
                // sum_i sz_i = (#zeros - #ones)
                let mz = n as f64 - 2.0 * ones;
                let zz: f64 = bonds
                    .iter()
                    .map(|b| if (k & b.mask).count_ones() == 1 { -jz } else { jz })
                    .sum();
                zz - half_h * mz
            })
            .collect();
        Ok(Hamiltonian {
            spec,
            bonds,
            diag,
            spectral: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn n_sites(&self) -> usize {
        self.spec.n_sites
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// `out = H input`.
    pub fn apply_into(&self, input: &[C64], out: &mut [C64]) {
        debug_assert_eq!(input.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        for (k, o) in out.iter_mut().enumerate() {
            let mut acc = self.diag[k] * input[k];
            for b in &self.bonds {
                if (k & b.mask).count_ones() == 1 {
                    acc += b.flip * input[k ^ b.mask];
                }
            }
            *o = acc;
        }
    }

    /// `H |psi>` as raw amplitudes (not normalized).
    pub fn apply(&self, state: &StateVector) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply_into(state.amplitudes(), &mut out);
        out
    }

    /// `<psi|H|psi>`.
    pub fn expectation(&self, state: &StateVector) -> f64 {
        inner(state.amplitudes(), &self.apply(state)).re
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim())
            .map(|k| {
                self.diag[k].abs()
                    + self
                        .bonds
                        .iter()
                        .filter(|b| (k & b.mask).count_ones() == 1)
                        .map(|b| b.flip.abs())
                        .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Full complex matrix, built on demand for `N <= 13`.
    pub fn dense(&self) -> Result<DMatrix<C64>> {
        self.check_dense()?;
        let dim = self.dim();
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for k in 0..dim {
            m[(k, k)] = C64::new(self.diag[k], 0.0);
            for b in &self.bonds {
                if (k & b.mask).count_ones() == 1 {
                    m[(k ^ b.mask, k)] += C64::new(b.flip, 0.0);
                }
            }
        }
        Ok(m)
    }

    /// Basis indices with exactly `ones` down spins, in increasing order.
    pub fn sector_indices(&self, ones: u32) -> Vec<usize> {
        (0..self.dim()).filter(|k| k.count_ones() == ones).collect()
    }

    /// Real symmetric block of `H` restricted to a fixed-magnetization sector.
    pub fn sector_block(&self, indices: &[usize]) -> DMatrix<f64> {
        let d = indices.len();
        let mut m = DMatrix::zeros(d, d);
        for (col, &k) in indices.iter().enumerate() {
            m[(col, col)] = self.diag[k];
            for b in &self.bonds {
                if (k & b.mask).count_ones() == 1 {
                    let target = k ^ b.mask;
                    let row = indices
                        .binary_search(&target)
                        .expect("exchange preserves magnetization");
                    m[(row, col)] += b.flip;
                }
            }
        }
        m
    }

    /// Spectral decomposition, computed on first use and cached.
    pub fn spectral(&self) -> Result<&SpectralDecomposition> {
        self.check_dense()?;
        Ok(self.spectral.get_or_init(|| SpectralDecomposition::build(self)))
    }

    pub(crate) fn check_dense(&self) -> Result<()> {
        if self.n_sites() > MAX_DENSE_SITES {
            return Err(Error::Capacity {
                what: format!("dense realization is limited to {MAX_DENSE_SITES} sites"),
                n_sites: self.n_sites(),
                dim: 1u128 << self.n_sites(),
            });
        }
        Ok(())
    }
}

/// `<psi| sum_i sz_i |psi>`.
pub fn total_magnetization(state: &StateVector) -> f64 {
    let n = state.n_sites() as f64;
    state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm_sqr() * (n - 2.0 * k.count_ones() as f64))
        .sum()
}
