//! Dense real symmetric eigensolver: Householder reduction to tridiagonal
//! form followed by the implicitly shifted QL iteration.
//!
//! The QL deflation test is relative (`|e_m| <= ε (|d_m| + |d_{m+1}|)`), which
//! keeps the small eigenvalues of strongly graded Hamiltonians accurate even
//! when the matrix norm is many orders of magnitude larger.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

const MAX_QL_ITER: usize = 60;

/// Eigenvalues in ascending order and, optionally, the matching orthonormal
/// eigenvectors stored as matrix columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Option<DMatrix<f64>>,
}

/// Diagonalize a symmetric matrix.
///
/// Rejects input whose asymmetry exceeds `1e-12 · max|A|`.
pub fn eigen_symmetric(matrix: &DMatrix<f64>, want_vectors: bool) -> Result<SymmetricEigen> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(crate::error::invalid(format!(
            "matrix must be square, got {}x{}",
            n,
            matrix.ncols()
        )));
    }
    if n == 0 {
        return Ok(SymmetricEigen {
            values: vec![],
            vectors: want_vectors.then(|| DMatrix::zeros(0, 0)),
        });
    }
    check_symmetric(matrix)?;

    // Row-major working copy, symmetrized.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            v[i * n + j] = 0.5 * (matrix[(i, j)] + matrix[(j, i)]);
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);

    // z[col * n + row]: eigenvector columns stored contiguously for the rotations.
    let mut z = if want_vectors {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                z[j * n + i] = v[i * n + j];
            }
        }
        Some(z)
    } else {
        None
    };
    ql_implicit(n, &mut d, &mut e, z.as_deref_mut())?;

    // Stable ascending order; ties keep their original index order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = z.map(|z| DMatrix::from_fn(n, n, |row, col| z[order[col] * n + row]));
    Ok(SymmetricEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues_symmetric(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(eigen_symmetric(matrix, false)?.values)
}

fn check_symmetric(matrix: &DMatrix<f64>) -> Result<()> {
    let n = matrix.nrows();
    let scale = matrix.amax();
    let tol = 1e-12 * scale;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (matrix[(i, j)] - matrix[(j, i)]).abs();
            if gap > tol || !gap.is_finite() {
                return Err(Error::Asymmetric {
                    row: i,
                    col: j,
                    gap,
                });
            }
        }
    }
    Ok(())
}

/// Householder reduction (EISPACK `tred2` ordering). On return `v` holds the
/// orthogonal transformation, `d` the diagonal and `e[1..]` the subdiagonal.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let idx = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
                v[idx(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[idx(j, i)] = f;
                g = e[j] + v[idx(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[idx(k, j)] * d[k];
                    e[k] += v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for i in 0..(n - 1) {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = 0.0;
    }
    v[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL with Wilkinson-style shifts on the tridiagonal `(d, e)`.
/// `z`, when given, holds eigenvector columns contiguously and is rotated in place.
fn ql_implicit(n: usize, d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

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
            if iter > MAX_QL_ITER {
                return Err(Error::NoConvergence {
                    what: "symmetric QL sweep",
                    iterations: MAX_QL_ITER,
                });
            }

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
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let col_i = &mut lo[i * n..];
                    let col_next = &mut hi[..n];
                    for (zi, zn) in col_i.iter_mut().zip(col_next.iter_mut()) {
                        let t = *zn;
                        *zn = s * *zi + c * t;
                        *zi = c * *zi - s * t;
                    }
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
    Ok(())
}

/// Quantum-number label of one eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StateLabel {
    pub n: usize,
    pub ell: u32,
}

/// Ascending eigenvalues at fixed angular momentum with their `(n, ℓ)` labels.
#[derive(Debug, Clone)]
pub struct Spectrum<P> {
    pub eigenvalues: Vec<f64>,
    pub labels: Vec<StateLabel>,
    pub provenance: P,
}

impl<P> Spectrum<P> {
    /// Label the `i`-th eigenvalue as `n = i`.
    pub fn from_sorted(eigenvalues: Vec<f64>, ell: u32, provenance: P) -> Self {
        let labels = (0..eigenvalues.len())
            .map(|n| StateLabel { n, ell })
            .collect();
        Self {
            eigenvalues,
            labels,
            provenance,
        }
    }

    pub fn energy(&self, n: usize) -> Option<f64> {
        self.eigenvalues.get(n).copied()
    }
}
