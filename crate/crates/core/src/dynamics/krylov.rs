use super::symeig::tridiagonal_eigen;
use crate::spin::Hamiltonian;
use crate::C64;

/// Result of one Krylov exponential step.
#[derive(Debug, Clone)]
pub struct KrylovOutcome {
    pub vector: Vec<C64>,
    /// A posteriori error estimate `beta_m |[exp(-i tau T_m) e_1]_m| ||v||`.
    pub error_estimate: f64,
    /// Krylov dimension actually used.
    pub dimension: usize,
    /// True when the subspace became invariant (estimate is exactly zero).
    pub invariant: bool,
}

/// `exp(-i tau T) e_1` for a real symmetric tridiagonal `T`.
fn tridiagonal_exp_e1(alpha: &[f64], beta: &[f64], tau: f64) -> Vec<C64> {
    let m = alpha.len();
    let (ev, z) = tridiagonal_eigen(alpha, beta);
    (0..m)
        .map(|i| {
            (0..m)
                .map(|k| C64::from_polar(z[i + m * k] * z[m * k], -tau * ev[k]))
                .sum()
        })
        .collect()
}

fn axpy(a: C64, x: &[C64], y: &mut [C64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Approximates `exp(-i tau H) v` in a Lanczos basis of dimension at most
/// `max_dim`, stopping as soon as the error estimate drops below `tol`.
///
/// The basis is kept orthonormal by two passes of classical Gram-Schmidt
/// against all previous vectors.
pub fn krylov_expm(h: &Hamiltonian, v: &[C64], tau: f64, max_dim: usize, tol: f64) -> KrylovOutcome {
    let dim = v.len();
    let v_norm = norm(v);
    if v_norm == 0.0 || tau == 0.0 {
        return KrylovOutcome {
            vector: v.to_vec(),
            error_estimate: 0.0,
            dimension: 0,
            invariant: true,
        };
    }
    let max_dim = max_dim.clamp(1, dim);
    let scale = h.norm_bound().max(f64::MIN_POSITIVE);
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(max_dim);
    basis.push(v.iter().map(|x| x / v_norm).collect());
    let mut alpha = Vec::with_capacity(max_dim);
    let mut beta: Vec<f64> = Vec::with_capacity(max_dim);
    let mut w = vec![C64::new(0.0, 0.0); dim];

    let mut coeffs;
    let mut estimate;
    let mut invariant = false;
    loop {
        let j = basis.len() - 1;
        h.apply_into(&basis[j], &mut w);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        axpy(C64::new(-a, 0.0), &basis[j], &mut w);
        if j > 0 {
            axpy(C64::new(-beta[j - 1], 0.0), &basis[j - 1], &mut w);
        }
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
        }
        let b = norm(&w);
        coeffs = tridiagonal_exp_e1(&alpha, &beta, tau);
        if b <= 1e-13 * scale {
            invariant = true;
            estimate = 0.0;
            break;
        }
        estimate = b * coeffs[j].norm() * v_norm;
        if estimate <= tol || basis.len() == max_dim {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }

    let mut out = vec![C64::new(0.0, 0.0); dim];
    for (c, q) in coeffs.iter().zip(&basis) {
        axpy(c * v_norm, q, &mut out);
    }
    KrylovOutcome {
        vector: out,
        error_estimate: estimate,
        dimension: alpha.len(),
        invariant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{ChainSpec, InteractionRange, StateVector};
    use rand::SeedableRng;

    fn distance(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn tridiagonal_exp_of_diagonal() {
        let c = tridiagonal_exp_e1(&[2.0], &[], 0.5);
        assert!((c[0] - C64::from_polar(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn invariant_subspace_is_exact() {
        // |+>^N is not an eigenstate, but |00...0> is: one Lanczos vector.
        let h = Hamiltonian::new(ChainSpec::new(6, 1.0, 1.0, InteractionRange::Nn)).unwrap();
        let s = StateVector::basis(6, 0).unwrap();
        let out = krylov_expm(&h, s.amplitudes(), 0.3, 30, 1e-12);
        assert!(out.invariant);
        assert_eq!(out.dimension, 1);
        let e = h.diagonal()[0];
        assert!((out.vector[0] - C64::from_polar(1.0, -0.3 * e)).norm() < 1e-14);
    }

    #[test]
    fn error_decreases_with_dimension() {
        let h = Hamiltonian::new(ChainSpec::new(8, 1.0, 1.0, InteractionRange::Nnn)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let s = StateVector::random(8, &mut rng).unwrap();
        let tau = 0.4;
        let exact = h.spectral().unwrap().apply_exp(s.amplitudes(), tau);
        let mut last = f64::INFINITY;
        for m in [2, 4, 6, 8, 10, 12, 14, 16, 20, 24, 28, 32, 40] {
            let out = krylov_expm(&h, s.amplitudes(), tau, m, 0.0);
            let err = distance(&out.vector, &exact);
            if last > 1e-13 {
                assert!(err < last, "m={m}: {err} !< {last}");
            }
            last = err;
        }
        assert!(last < 1e-10);
    }

    #[test]
    fn estimate_tracks_true_error() {
        let h = Hamiltonian::new(ChainSpec::new(7, 1.0, 1.0, InteractionRange::Nn)).unwrap();
        let s = StateVector::plus(7).unwrap();
        let exact = h.spectral().unwrap().apply_exp(s.amplitudes(), 0.1);
        let out = krylov_expm(&h, s.amplitudes(), 0.1, 30, 1e-11);
        assert!(out.error_estimate <= 1e-11);
        assert!(distance(&out.vector, &exact) < 1e-10);
    }
}
