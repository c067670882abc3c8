use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::krylov::krylov_expm;
use super::spectral::SpectralDecomposition;
use crate::error::{Error, Result};
use crate::spin::{Hamiltonian, StateVector};
use crate::C64;

/// Chains up to this size use the dense spectral engine under [`Engine::Auto`].
pub const AUTO_DENSE_MAX_SITES: usize = 12;

/// Largest number of times a non-converged substep is halved before giving up.
const MAX_HALVINGS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    /// Dense spectral for `N <= 12`, Krylov above.
    #[default]
    Auto,
    DenseSpectral,
    Krylov,
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::Auto => "auto",
            Engine::DenseSpectral => "dense-spectral",
            Engine::Krylov => "krylov",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Engine::Auto),
            "dense" | "dense-spectral" | "spectral" => Ok(Engine::DenseSpectral),
            "krylov" | "lanczos" => Ok(Engine::Krylov),
            other => Err(Error::InvalidArgument(format!(
                "unknown engine '{other}' (expected auto, dense or krylov)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `exp(-iHt)`
    Forward,
    /// `exp(+iHt)`, i.e. forward evolution under `-H`.
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KrylovSettings {
    /// Maximum Lanczos dimension per substep.
    pub krylov_dim: usize,
    /// Error-estimate tolerance per substep.
    pub krylov_tol: f64,
    /// Longest substep (physical time, `hbar = 1`).
    pub max_substep: f64,
}

impl Default for KrylovSettings {
    fn default() -> Self {
        KrylovSettings {
            krylov_dim: 30,
            krylov_tol: 1e-10,
            max_substep: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
enum Backend {
    Spectral,
    Krylov(KrylovSettings),
}

/// Time-evolution engine bound to one Hamiltonian. Immutable and cheap to
/// clone; the spectral decomposition is computed at construction.
#[derive(Debug, Clone)]
pub struct Propagator {
    hamiltonian: Arc<Hamiltonian>,
    backend: Backend,
}

impl Propagator {
    pub fn new(hamiltonian: Hamiltonian, engine: Engine) -> Result<Self> {
        Self::with_settings(hamiltonian, engine, KrylovSettings::default())
    }

    pub fn with_settings(hamiltonian: Hamiltonian, engine: Engine, settings: KrylovSettings) -> Result<Self> {
        let engine = match engine {
            Engine::Auto if hamiltonian.n_sites() <= AUTO_DENSE_MAX_SITES => Engine::DenseSpectral,
            Engine::Auto => Engine::Krylov,
            e => e,
        };
        let backend = match engine {
            Engine::DenseSpectral => {
                hamiltonian.spectral()?;
                Backend::Spectral
            }
            _ => {
                if settings.krylov_dim == 0 || !(settings.krylov_tol >= 0.0) || !(settings.max_substep > 0.0) {
                    return Err(Error::InvalidArgument(format!("invalid Krylov settings {settings:?}")));
                }
                Backend::Krylov(settings)
            }
        };
        Ok(Propagator {
            hamiltonian: Arc::new(hamiltonian),
            backend,
        })
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    pub fn n_sites(&self) -> usize {
        self.hamiltonian.n_sites()
    }

    /// Resolved engine (never [`Engine::Auto`]).
    pub fn engine(&self) -> Engine {
        match self.backend {
            Backend::Spectral => Engine::DenseSpectral,
            Backend::Krylov(_) => Engine::Krylov,
        }
    }

    pub fn spectral(&self) -> Option<&SpectralDecomposition> {
        match self.backend {
            Backend::Spectral => self.hamiltonian.spectral().ok(),
            Backend::Krylov(_) => None,
        }
    }

    pub fn evolve(&self, state: &StateVector, duration: f64, direction: Direction) -> Result<StateVector> {
        if state.n_sites() != self.n_sites() {
            return Err(Error::InvalidArgument(format!(
                "state has {} sites, propagator {}",
                state.n_sites(),
                self.n_sites()
            )));
        }
        if !(duration >= 0.0) || !duration.is_finite() {
            return Err(Error::InvalidArgument(format!("duration must be finite and >= 0, got {duration}")));
        }
        let t = match direction {
            Direction::Forward => duration,
            Direction::Backward => -duration,
        };
        let amps = self.evolve_raw(state.amplitudes(), t)?;
        Ok(StateVector::from_unitary_image(state.n_sites(), amps))
    }

    /// `exp(-iHt) v` for signed `t` on raw amplitudes.
    pub(crate) fn evolve_raw(&self, v: &[C64], t: f64) -> Result<Vec<C64>> {
        if t == 0.0 {
            return Ok(v.to_vec());
        }
        match &self.backend {
            Backend::Spectral => Ok(self.hamiltonian.spectral()?.apply_exp(v, t)),
            Backend::Krylov(settings) => self.krylov_evolve(v, t, settings),
        }
    }

    fn krylov_evolve(&self, v: &[C64], t: f64, s: &KrylovSettings) -> Result<Vec<C64>> {
        let steps = (t.abs() / s.max_substep).ceil().max(1.0) as usize;
        let tau = t / steps as f64;
        let mut cur = v.to_vec();
        for _ in 0..steps {
            cur = self.krylov_substep(&cur, tau, s, 0)?;
        }
        Ok(cur)
    }

    fn krylov_substep(&self, v: &[C64], tau: f64, s: &KrylovSettings, depth: u32) -> Result<Vec<C64>> {
        let out = krylov_expm(&self.hamiltonian, v, tau, s.krylov_dim, s.krylov_tol);
        if out.error_estimate <= s.krylov_tol {
            return Ok(out.vector);
        }
        if depth >= MAX_HALVINGS {
            return Err(Error::Convergence {
                residual: out.error_estimate,
                tolerance: s.krylov_tol,
            });
        }
        let half = self.krylov_substep(v, 0.5 * tau, s, depth + 1)?;
        self.krylov_substep(&half, 0.5 * tau, s, depth + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{total_magnetization, ChainSpec, InteractionRange, PauliAxis};
    use rand::{Rng, SeedableRng};

    fn prop(n: usize, j: f64, h: f64, range: InteractionRange, engine: Engine) -> Propagator {
        Propagator::new(Hamiltonian::new(ChainSpec::new(n, j, h, range)).unwrap(), engine).unwrap()
    }

    #[test]
    fn auto_engine_selection() {
        assert_eq!(prop(5, 1.0, 1.0, InteractionRange::Nn, Engine::Auto).engine(), Engine::DenseSpectral);
        assert_eq!(prop(13, 1.0, 1.0, InteractionRange::Nn, Engine::Auto).engine(), Engine::Krylov);
        let h = Hamiltonian::new(ChainSpec::new(14, 1.0, 1.0, InteractionRange::Nn)).unwrap();
        assert!(Propagator::new(h, Engine::DenseSpectral).is_err());
    }

    #[test]
    fn zero_duration_is_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for engine in [Engine::DenseSpectral, Engine::Krylov] {
            let p = prop(4, 1.0, 1.0, InteractionRange::Nn, engine);
            let s = StateVector::random(4, &mut rng).unwrap();
            let out = p.evolve(&s, 0.0, Direction::Forward).unwrap();
            assert!(out.distance(&s) <= 1e-14);
        }
    }

    #[test]
    fn single_spin_precession() {
        // H = -(h/2) sz on |+>: <sx>(t) = cos(ht)
        let h_field = 1.3;
        for engine in [Engine::DenseSpectral, Engine::Krylov] {
            let p = prop(1, 0.0, h_field, InteractionRange::Nn, engine);
            let plus = StateVector::plus(1).unwrap();
            for t in [0.0, 0.4, 1.1, 2.5, 7.0] {
                let s = p.evolve(&plus, t, Direction::Forward).unwrap();
                let sx = crate::spin::apply_pauli(&s, 0, &PauliAxis::x()).unwrap();
                assert!((s.inner(&sx).re - (h_field * t).cos()).abs() < 1e-10, "{engine:?} t={t}");
            }
        }
    }

    #[test]
    fn forward_then_backward_returns() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for engine in [Engine::DenseSpectral, Engine::Krylov] {
            let p = prop(6, 1.0, 0.7, InteractionRange::Nnn, engine);
            let s = StateVector::random(6, &mut rng).unwrap();
            let f = p.evolve(&s, 2.3, Direction::Forward).unwrap();
            let b = p.evolve(&f, 2.3, Direction::Backward).unwrap();
            assert!(b.distance(&s) < 1e-9);
            assert!((f.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn composition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for engine in [Engine::DenseSpectral, Engine::Krylov] {
            let p = prop(7, 1.0, 1.0, InteractionRange::Nn, engine);
            let s = StateVector::random(7, &mut rng).unwrap();
            let (t1, t2) = (0.73, 1.41);
            let direct = p.evolve(&s, t1 + t2, Direction::Forward).unwrap();
            let step = p.evolve(&s, t1, Direction::Forward).unwrap();
            let step = p.evolve(&step, t2, Direction::Forward).unwrap();
            assert!(direct.distance(&step) < 1e-9);
        }
    }

    #[test]
    fn conserves_energy_and_magnetization() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for engine in [Engine::DenseSpectral, Engine::Krylov] {
            let p = prop(8, 1.0, 1.0, InteractionRange::Nnn, engine);
            let s = StateVector::random(8, &mut rng).unwrap();
            let e0 = p.hamiltonian().expectation(&s);
            let m0 = total_magnetization(&s);
            for _ in 0..4 {
                let t = rng.gen_range(0.0..5.0);
                let st = p.evolve(&s, t, Direction::Forward).unwrap();
                let e = p.hamiltonian().expectation(&st);
                assert!((e - e0).abs() <= 1e-8 * e0.abs().max(1.0));
                assert!((total_magnetization(&st) - m0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn engines_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for n in [2, 5, 8] {
            let dense = prop(n, 1.0, 1.0, InteractionRange::Nnn, Engine::DenseSpectral);
            let kry = prop(n, 1.0, 1.0, InteractionRange::Nnn, Engine::Krylov);
            let s = StateVector::random(n, &mut rng).unwrap();
            let t = rng.gen_range(0.0..10.0);
            let a = dense.evolve(&s, t, Direction::Forward).unwrap();
            let b = kry.evolve(&s, t, Direction::Forward).unwrap();
            assert!(a.distance(&b) < 1e-8, "n={n} t={t}");
        }
    }

    #[test]
    fn convergence_error_reports_residual() {
        let h = Hamiltonian::new(ChainSpec::new(8, 1.0, 1.0, InteractionRange::Nn)).unwrap();
        let settings = KrylovSettings {
            krylov_dim: 2,
            krylov_tol: 1e-300,
            max_substep: 1.0,
        };
        let p = Propagator::with_settings(h, Engine::Krylov, settings).unwrap();
        let s = StateVector::plus(8).unwrap();
        match p.evolve(&s, 1.0, Direction::Forward) {
            Err(Error::Convergence { residual, .. }) => assert!(residual > 0.0),
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_duration() {
        let p = prop(2, 1.0, 1.0, InteractionRange::Nn, Engine::DenseSpectral);
        let s = StateVector::plus(2).unwrap();
        assert!(p.evolve(&s, -1.0, Direction::Forward).is_err());
    }
}
