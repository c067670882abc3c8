/// Eigen-decomposition of a real symmetric 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen3 {
    /// Eigenvalues in descending order.
    pub values: [f64; 3],
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: [[f64; 3]; 3],
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi rotations until the off-diagonal part vanishes to
/// machine precision. Symmetry of the input is assumed; only the upper
/// triangle is read.
pub fn symmetric_eigen3(m: &[[f64; 3]; 3]) -> Eigen3 {
    let mut a = *m;
    for r in 0..3 {
        for c in 0..r {
            a[r][c] = a[c][r];
        }
    }
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
        if off.sqrt() <= 1e-17 * scale || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = (t * t + 1.0).sqrt().recip();
            let s = t * c;
            // A <- J^T A J with J the (p, q) rotation
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    Eigen3 {
        values: order.map(|k| a[k][k]),
        vectors: order.map(|k| [v[0][k], v[1][k], v[2][k]]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix3, SymmetricEigen};
    use proptest::prelude::*;

    fn check(m: [[f64; 3]; 3]) {
        let e = symmetric_eigen3(&m);
        assert!(e.values[0] >= e.values[1] && e.values[1] >= e.values[2]);
        for k in 0..3 {
            let v = e.vectors[k];
            let norm: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            for r in 0..3 {
                let mv: f64 = (0..3).map(|c| m[r][c] * v[c]).sum();
                assert!((mv - e.values[k] * v[r]).abs() < 1e-12, "{m:?}");
            }
        }
        // Independent 3x3 reference (accurate at this size).
        let reference = SymmetricEigen::new(Matrix3::from_fn(|r, c| m[r][c]));
        let mut ev: Vec<f64> = reference.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        for k in 0..3 {
            assert!((ev[k] - e.values[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_and_diagonal() {
        let id = symmetric_eigen3(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(id.values, [1.0, 1.0, 1.0]);
        let d = symmetric_eigen3(&[[-0.5, 0.0, 0.0], [0.0, 0.3, 0.0], [0.0, 0.0, 1.2]]);
        assert_eq!(d.values, [1.2, 0.3, -0.5]);
        assert_eq!(d.vectors[0], [0.0, 0.0, 1.0]);
    }

    #[test]
    fn known_matrix() {
        // [[2,1,0],[1,2,0],[0,0,5]] has eigenvalues 5, 3, 1.
        let e = symmetric_eigen3(&[[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]]);
        for (a, b) in e.values.iter().zip([5.0, 3.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        check([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]]);
        check([[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]]);
        check([[0.0; 3]; 3]);
    }

    proptest! {
        #[test]
        fn random_symmetric(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0,
                            d in -3.0f64..3.0, e in -3.0f64..3.0, f in -3.0f64..3.0) {
            check([[a, d, e], [d, b, f], [e, f, c]]);
        }
    }
}
