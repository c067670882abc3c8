//! Dense real symmetric eigensolver: Householder reduction to tridiagonal
//! form followed by implicit QL iteration.

/// Eigenvalues and orthonormal eigenvectors of the symmetric `n x n` matrix
/// given row-major in `a`. Eigenvectors are returned column-major
/// (`z[row + n * col]`), eigenvalues in no particular order.
pub(crate) fn symmetric_eigen(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiagonalize(&mut a, n, &mut d, &mut e);
    // a now holds Q (row-major) with A = Q T Q^T; the QL step wants Q
    // column-major and e[i] coupling i and i + 1.
    let mut z = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            z[r + n * c] = a[r * n + c];
        }
    }
    if n > 0 {
        e.rotate_left(1);
        e[n - 1] = 0.0;
    }
    ql_implicit(&mut d, &mut e, &mut z);
    (d, z)
}

/// Householder reduction. On return `d` is the diagonal, `e[i]` couples
/// `i - 1` and `i` (`e[0] = 0`), and `a` is overwritten by the orthogonal
/// transformation.
fn householder_tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let idx = |r: usize, c: usize| r * n + c;
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[idx(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..=l {
                    a[idx(i, k)] /= scale;
                    h += a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[idx(i, l)] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    a[idx(j, i)] = a[idx(i, j)] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in j + 1..=l {
                        g += a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] -= f * e[k] + g * a[idx(i, k)];
                    }
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }
    if n == 0 {
        return;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    let mut g_col = vec![0.0; n];
    for i in 0..n {
        if d[i] != 0.0 {
            // g_j = sum_k a[i][k] a[k][j] for j < i, then a[k][j] -= g_j a[k][i]
            g_col[..i].iter_mut().for_each(|g| *g = 0.0);
            for k in 0..i {
                let aik = a[idx(i, k)];
                let row = &a[idx(k, 0)..idx(k, 0) + i];
                for (g, akj) in g_col[..i].iter_mut().zip(row) {
                    *g += aik * akj;
                }
            }
            for k in 0..i {
                let aki = a[idx(k, i)];
                let row = &mut a[idx(k, 0)..idx(k, 0) + i];
                for (akj, g) in row.iter_mut().zip(&g_col[..i]) {
                    *akj -= g * aki;
                }
            }
        }
        d[i] = a[idx(i, i)];
        a[idx(i, i)] = 1.0;
        for j in 0..i {
            a[idx(j, i)] = 0.0;
            a[idx(i, j)] = 0.0;
        }
    }
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix by implicit
/// QL iteration with Wilkinson shifts. Returns eigenvalues and the
/// eigenvector matrix stored column-major (`z[row + n * col]`).
pub(crate) fn tridiagonal_eigen(diag: &[f64], offdiag: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut d = diag.to_vec();
    // e[i] couples i and i + 1; e[n - 1] is scratch.
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&offdiag[..n.saturating_sub(1)]);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i + n * i] = 1.0;
    }
    ql_implicit(&mut d, &mut e, &mut z);
    (d, z)
}

/// Implicit QL sweeps on `(d, e)`, rotating the columns of `z` along.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 200, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (left, right) = z.split_at_mut(n * (i + 1));
                let col_i = &mut left[n * i..];
                let col_i1 = &mut right[..n];
                for (zi, zi1) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                    let (a, b) = (*zi, *zi1);
                    *zi1 = s * a + c * b;
                    *zi = c * a - s * b;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
