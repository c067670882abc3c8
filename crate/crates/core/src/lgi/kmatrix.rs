use serde::{Deserialize, Serialize};

use super::correlator::{check_chain, check_state, re_inner};
use super::eigen3::symmetric_eigen3;
use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::spin::{apply_pauli_component, Pauli, PauliAxis, StateVector};
use crate::C64;

/// Relative eigenvalue gap below which the top eigenpair is reported degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// The 3x3 matrix whose quadratic form over a unit axis `v` is `K_n(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMatrix {
    pub entries: [[f64; 3]; 3],
    pub symmetrized: bool,
    /// Frobenius norm of the antisymmetric part of the raw matrix.
    pub antisymmetric_residual: f64,
}

impl KMatrix {
    pub fn from_raw(entries: [[f64; 3]; 3]) -> Self {
        let mut anti = 0.0;
        for p in 0..3 {
            for q in 0..3 {
                anti += (0.5 * (entries[p][q] - entries[q][p])).powi(2);
            }
        }
        KMatrix {
            entries,
            symmetrized: false,
            antisymmetric_residual: anti.sqrt(),
        }
    }

    /// `(K + K^T) / 2`; exactly symmetric afterwards.
    pub fn symmetrize(&self) -> KMatrix {
        let mut s = self.entries;
        for p in 0..3 {
            for q in p + 1..3 {
                let avg = 0.5 * (self.entries[p][q] + self.entries[q][p]);
                s[p][q] = avg;
                s[q][p] = avg;
            }
        }
        KMatrix {
            entries: s,
            symmetrized: true,
            antisymmetric_residual: self.antisymmetric_residual,
        }
    }

    /// `v^T K v`.
    pub fn quadratic_form(&self, axis: &PauliAxis) -> f64 {
        let v = axis.components();
        (0..3)
            .map(|p| (0..3).map(|q| v[p] * self.entries[p][q] * v[q]).sum::<f64>())
            .sum()
    }

    pub fn diagonal(&self) -> [f64; 3] {
        [self.entries[0][0], self.entries[1][1], self.entries[2][2]]
    }
}

/// Evolved vectors from which all 27 sequential correlators of the
/// protocol at one time `t` follow by inner products.
///
/// With `A`, `B`, `C` the parties at sites `1, n, 2n-1` and `U(t) = exp(-iHt)`:
/// `psi_t = U(t) psi`, `psi_2t = U(2t) psi`, `a_t[p] = U(t) A^p psi`,
/// `a_2t[p] = U(2t) A^p psi`, `b_t[p] = U(t) B^p psi_t`.
#[derive(Debug, Clone)]
pub struct ProtocolStates {
    pub(crate) n: usize,
    pub(crate) psi_t: Vec<C64>,
    pub(crate) psi_2t: Vec<C64>,
    pub(crate) a_t: [Vec<C64>; 3],
    pub(crate) a_2t: [Vec<C64>; 3],
    pub(crate) b_t: [Vec<C64>; 3],
}

pub(crate) fn pauli_images(v: &[C64], site: usize) -> [Vec<C64>; 3] {
    Pauli::ALL.map(|p| {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        apply_pauli_component(v, site, p, &mut out);
        out
    })
}

impl ProtocolStates {
    /// Fresh evolutions from `psi0` (seven evolutions of length `t` or `2t`).
    pub fn compute(prop: &Propagator, psi0: &StateVector, n: usize, t: f64) -> Result<Self> {
        check_state(prop, psi0)?;
        check_chain(n, prop.n_sites())?;
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!("time must be >= 0, got {t}")));
        }
        let psi = psi0.amplitudes();
        let psi_t = prop.evolve_raw(psi, t)?;
        let psi_2t = prop.evolve_raw(&psi_t, t)?;
        let first = pauli_images(psi, 0);
        let mut a_t = first.clone();
        let mut a_2t = first;
        for p in 0..3 {
            a_t[p] = prop.evolve_raw(&a_t[p], t)?;
            a_2t[p] = prop.evolve_raw(&a_t[p], t)?;
        }
        let b_t = Self::middle(prop, &psi_t, n, t)?;
        Ok(ProtocolStates {
            n,
            psi_t,
            psi_2t,
            a_t,
            a_2t,
            b_t,
        })
    }

    /// `U(t) B^p psi_t` for the three Pauli components.
    pub(crate) fn middle(prop: &Propagator, psi_t: &[C64], n: usize, t: f64) -> Result<[Vec<C64>; 3]> {
        let [x, y, z] = pauli_images(psi_t, n - 1);
        Ok([prop.evolve_raw(&x, t)?, prop.evolve_raw(&y, t)?, prop.evolve_raw(&z, t)?])
    }

    /// Raw (unsymmetrized) correlator matrix.
    pub fn kmatrix(&self) -> KMatrix {
        let n_sites = 2 * self.n - 1;
        let b_q = pauli_images(&self.psi_t, self.n - 1);
        let c_q = pauli_images(&self.psi_2t, n_sites - 1);
        let mut k = [[0.0; 3]; 3];
        for p in 0..3 {
            for q in 0..3 {
                k[p][q] = re_inner(&self.a_t[p], &b_q[q]) + re_inner(&self.b_t[p], &c_q[q])
                    - re_inner(&self.a_2t[p], &c_q[q]);
            }
        }
        KMatrix::from_raw(k)
    }
}

/// Symmetrized correlator matrix at distance `n` and base time `t`.
pub fn correlator_matrix(prop: &Propagator, psi0: &StateVector, n: usize, t: f64) -> Result<KMatrix> {
    Ok(ProtocolStates::compute(prop, psi0, n, t)?.kmatrix().symmetrize())
}

/// Top eigenpair of a symmetrized [`KMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub lambda_max: f64,
    pub axis: PauliAxis,
    /// Gap to the second eigenvalue.
    pub gap: f64,
    pub degenerate: bool,
}

/// Sign convention: the first component with magnitude above `1e-12` is positive.
fn canonical_sign(v: [f64; 3]) -> [f64; 3] {
    match v.iter().find(|c| c.abs() > 1e-12) {
        Some(c) if *c < 0.0 => v.map(|x| -x),
        _ => v,
    }
}

/// Largest eigenvalue `lambda_max` and a unit eigenvector `v_max`, so that
/// `K_n(v) <= lambda_max = K_n(v_max)` for every unit `v`.
///
/// When the top eigenvalue is degenerate the axis is the normalized
/// projection of the first of `x, y, z` with a non-negligible component in
/// the top eigenspace.
pub fn optimize_measurement(kmat: &KMatrix) -> Result<Optimum> {
    if !kmat.symmetrized {
        return Err(Error::InvalidArgument("optimize_measurement needs a symmetrized KMatrix".into()));
    }
    if kmat.entries.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Degenerate("KMatrix has non-finite entries".into()));
    }
    let eig = symmetric_eigen3(&kmat.entries);
    let lambda = eig.values[0];
    let tol = DEGENERACY_TOL * lambda.abs().max(1.0);
    let gap = eig.values[0] - eig.values[1];
    let degenerate = gap <= tol;
    let v = if degenerate {
        let top: Vec<[f64; 3]> = (0..3)
            .filter(|&k| lambda - eig.values[k] <= tol)
            .map(|k| eig.vectors[k])
            .collect();
        let projected = (0..3).find_map(|axis| {
            let mut proj = [0.0; 3];
            for u in &top {
                let w = u[axis];
                for i in 0..3 {
                    proj[i] += w * u[i];
                }
            }
            let norm = proj.iter().map(|x| x * x).sum::<f64>().sqrt();
            (norm > 1e-6).then(|| proj.map(|x| x / norm))
        });
        projected.unwrap_or(eig.vectors[0])
    } else {
        eig.vectors[0]
    };
    Ok(Optimum {
        lambda_max: lambda,
        axis: PauliAxis::from_direction(canonical_sign(v))?,
        gap,
        degenerate,
    })
}
