use rand::Rng;

use super::chain::MAX_STATE_SITES;
use crate::error::{Error, Result};
use crate::C64;

const NORM_TOL: f64 = 1e-10;

/// Normalized amplitude vector over the `2^N` computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_sites: usize,
    amps: Vec<C64>,
}

pub(crate) fn check_capacity(n_sites: usize) -> Result<usize> {
    if n_sites == 0 {
        return Err(Error::InvalidChain("n_sites must be at least 1".into()));
    }
    if n_sites > MAX_STATE_SITES {
        return Err(Error::Capacity {
            what: "state vector".into(),
            n_sites,
            dim: 1u128 << n_sites.min(127),
        });
    }
    Ok(1usize << n_sites)
}

pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// `<a|b>`, conjugating the left argument.
pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl StateVector {
    /// `|+>^N`: every amplitude equals `2^(-N/2)`.
    pub fn plus(n_sites: usize) -> Result<Self> {
        let dim = check_capacity(n_sites)?;
        let a = (dim as f64).sqrt().recip();
        Ok(StateVector {
            n_sites,
            amps: vec![C64::new(a, 0.0); dim],
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        let dim = check_capacity(n_sites)?;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { n_sites, amps })
    }

    /// Wraps amplitudes that must already be normalized.
    pub fn from_amplitudes(n_sites: usize, amps: Vec<C64>) -> Result<Self> {
        let dim = check_capacity(n_sites)?;
        if amps.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "expected {dim} amplitudes, got {}",
                amps.len()
            )));
        }
        let norm = norm_sqr(&amps).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!("state not normalized (norm {norm})")));
        }
        Ok(StateVector { n_sites, amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(n_sites: usize, mut amps: Vec<C64>) -> Result<Self> {
        let norm = norm_sqr(&amps).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        let inv = norm.recip();
        amps.iter_mut().for_each(|a| *a *= inv);
        Self::from_amplitudes(n_sites, amps)
    }

    /// Haar-like random state from Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n_sites: usize, rng: &mut R) -> Result<Self> {
        let dim = check_capacity(n_sites)?;
        let amps = (0..dim)
            .map(|_| {
                // Box-Muller
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen();
                let r = (-2.0 * u1.ln()).sqrt();
                let th = std::f64::consts::TAU * u2;
                C64::new(r * th.cos(), r * th.sin())
            })
            .collect();
        Self::normalized(n_sites, amps)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(&self.amps, &other.amps)
    }

    /// Euclidean distance `|| self - other ||`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Internal constructor for vectors produced by norm-preserving maps.
    pub(crate) fn from_unitary_image(n_sites: usize, amps: Vec<C64>) -> Self {
        debug_assert!((norm_sqr(&amps).sqrt() - 1.0).abs() < 1e-8);
        StateVector { n_sites, amps }
    }
}
