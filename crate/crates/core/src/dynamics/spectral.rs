use nalgebra::{DMatrix, DVector};

use super::symeig::symmetric_eigen;

use crate::error::Result;
use crate::spin::{Hamiltonian, StateVector};
use crate::C64;

#[derive(Debug, Clone)]
struct Sector {
    indices: Vec<usize>,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

/// Full eigendecomposition `H = V diag(E) V^T`, block diagonal in total
/// magnetization. `H` is real symmetric in the computational basis, so each
/// block is handled with a real symmetric solver.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    dim: usize,
    sectors: Vec<Sector>,
}

impl SpectralDecomposition {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        h.check_dense()?;
        Ok(Self::build(h))
    }

    pub(crate) fn build(h: &Hamiltonian) -> Self {
        let n = h.n_sites() as u32;
        let sectors = (0..=n)
            .map(|ones| {
                let indices = h.sector_indices(ones);
                let block = h.sector_block(&indices);
                let d = indices.len();
                let row_major: Vec<f64> = block.transpose().as_slice().to_vec();
                let (energies, vecs) = symmetric_eigen(row_major, d);
                Sector {
                    indices,
                    energies,
                    vectors: DMatrix::from_vec(d, d, vecs),
                }
            })
            .collect();
        SpectralDecomposition { dim: h.dim(), sectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.sectors.iter().flat_map(|s| s.energies.iter().copied()).collect();
        e.sort_by(|a, b| a.total_cmp(b));
        e
    }

    /// Largest block residual `|| H_s - V_s E_s V_s^T ||_F` relative to `||H||_F`.
    pub fn reconstruction_residual(&self, h: &Hamiltonian) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for s in &self.sectors {
            let block = h.sector_block(&s.indices);
            let e = DMatrix::from_diagonal(&DVector::from_column_slice(&s.energies));
            let rebuilt = &s.vectors * e * s.vectors.transpose();
            num += (&block - rebuilt).norm_squared();
            den += block.norm_squared();
        }
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    /// `exp(-i H t) input` for a signed time `t`.
    pub fn apply_exp(&self, input: &[C64], t: f64) -> Vec<C64> {
        debug_assert_eq!(input.len(), self.dim);
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for s in &self.sectors {
            let re = DVector::from_iterator(s.indices.len(), s.indices.iter().map(|&k| input[k].re));
            let im = DVector::from_iterator(s.indices.len(), s.indices.iter().map(|&k| input[k].im));
            let cr = s.vectors.tr_mul(&re);
            let ci = s.vectors.tr_mul(&im);
            let (mut pr, mut pi) = (cr.clone(), ci.clone());
            for (i, &e) in s.energies.iter().enumerate() {
                let (sin, cos) = (-e * t).sin_cos();
                pr[i] = cos * cr[i] - sin * ci[i];
                pi[i] = sin * cr[i] + cos * ci[i];
            }
            let yr = &s.vectors * pr;
            let yi = &s.vectors * pi;
            for (i, &k) in s.indices.iter().enumerate() {
                out[k] = C64::new(yr[i], yi[i]);
            }
        }
        out
    }
}

/// Exact `exp(-iH t)|state>` through the Hamiltonian's cached decomposition.
pub fn evolve_spectral_reference(h: &Hamiltonian, state: &StateVector, duration: f64) -> Result<StateVector> {
    let dec = h.spectral()?;
    let amps = dec.apply_exp(state.amplitudes(), duration);
    Ok(StateVector::from_unitary_image(state.n_sites(), amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::spin::{ChainSpec, InteractionRange};
    use rand::SeedableRng;

    #[test]
    fn reconstruction_residual_is_small() {
        for n in [1, 4, 7] {
            let h = Hamiltonian::new(ChainSpec::new(n, 1.0, 1.0, InteractionRange::Nnn)).unwrap();
            let dec = SpectralDecomposition::new(&h).unwrap();
            assert!(dec.reconstruction_residual(&h) <= 1e-9);
            assert_eq!(dec.eigenvalues().len(), 1 << n);
        }
    }

    #[test]
    fn factorized_evolution_without_coupling() {
        // J = 0: each spin picks up exp(+-i h t / 2) independently.
        let (h_field, t) = (0.9, 1.7);
        let h = Hamiltonian::new(ChainSpec::new(2, 0.0, h_field, InteractionRange::Nn)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let s = StateVector::random(2, &mut rng).unwrap();
        let out = evolve_spectral_reference(&h, &s, t).unwrap();
        for (k, (a, b)) in s.amplitudes().iter().zip(out.amplitudes()).enumerate() {
            let mz = 2.0 - 2.0 * k.count_ones() as f64;
            // E_k = -(h/2) mz, amplitude gains exp(-i E_k t)
            let phase = C64::from_polar(1.0, 0.5 * h_field * mz * t);
            assert!((a * phase - b).norm() < 1e-13);
        }
    }

    #[test]
    fn cached_per_hamiltonian() {
        let h = Hamiltonian::new(ChainSpec::new(3, 1.0, 1.0, InteractionRange::Nn)).unwrap();
        let a = h.spectral().unwrap() as *const _;
        let b = h.spectral().unwrap() as *const _;
        assert_eq!(a, b);
    }

    #[test]
    fn refuses_large_chains() {
        let h = Hamiltonian::new(ChainSpec::new(14, 1.0, 1.0, InteractionRange::Nn)).unwrap();
        let s = StateVector::plus(14).unwrap();
        assert!(matches!(
            evolve_spectral_reference(&h, &s, 0.1),
            Err(Error::Capacity { n_sites: 14, .. })
        ));
    }
}
