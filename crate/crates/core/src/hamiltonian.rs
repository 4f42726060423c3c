//! Discrete radial Hamiltonian over the interior collocation nodes.
//!
//! The basis is `χ_j(r) = g_j(x(r)) / √(w_j r'(x_j))`, orthonormal under Lobatto
//! quadrature. Kinetic matrix elements are evaluated with the same quadrature:
//!
//! ```text
//! T_ij = ½ Σ_k w_k D_ki D_kj / r'(x_k)  /  √(w_i r'_i · w_j r'_j)
//! ```
//!
//! and the potential is diagonal. Deleting the first and last node imposes
//! `ψ = 0` on both walls.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::coordinate_map::MappedGrid;
use crate::error::{invalid, Error, Result};
use crate::potentials::PotentialSpec;

#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    entries: DMatrix<f64>,
    ell: u32,
    grid: MappedGrid,
}

impl HamiltonianMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn grid(&self) -> &MappedGrid {
        &self.grid
    }
}

/// Symmetric kinetic-energy matrix on the interior nodes.
pub fn kinetic_matrix(grid: &MappedGrid) -> DMatrix<f64> {
    let lob = grid.lobatto();
    let n = lob.order();
    let dim = n - 1;
    let w = lob.weights();
    let s = grid.map_deriv();
    let d = lob.deriv_matrix();

    // B_kj = D_kj √(w_k / r'_k), so K = Bᵀ B.
    let b = DMatrix::from_fn(n + 1, dim, |k, j| d[(k, j + 1)] * (w[k] / s[k]).sqrt());
    let mut t = b.tr_mul(&b);
    let q: Vec<f64> = (1..n).map(|j| (w[j] * s[j]).sqrt()).collect();
    for i in 0..dim {
        for j in 0..=i {
            let val = 0.25 * (t[(i, j)] + t[(j, i)]) / (q[i] * q[j]);
            t[(i, j)] = val;
            t[(j, i)] = val;
        }
    }
    t
}

pub fn assemble(grid: &MappedGrid, spec: &PotentialSpec, ell: u32) -> Result<HamiltonianMatrix> {
    let n = grid.lobatto().order();
    let radii = grid.radii();
    if radii[1] <= 0.0 {
        return Err(invalid(format!(
            "innermost interior radius is {}; the centrifugal term needs r > 0",
            radii[1]
        )));
    }
    let mut entries = kinetic_matrix(grid);
    for i in 1..n {
        entries[(i - 1, i - 1)] += spec.evaluate(ell, radii[i])?;
    }
    Ok(HamiltonianMatrix {
        entries,
        ell,
        grid: grid.clone(),
    })
}

/// One node of a reconstructed radial function `u(r) = r R(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionSample {
    pub r: f64,
    pub psi: f64,
    /// `u(r)²`, i.e. `4π r² |Ψ|²` for the full normalized wavefunction.
    pub density: f64,
}

/// Convert a normalized eigenvector of `h` into samples of `u(r)` on every
/// node, including the zero boundary values. The result satisfies
/// `Σ_k w_k r'_k u_k² = 1`.
pub fn wavefunction_samples(
    h: &HamiltonianMatrix,
    eigvec: &DVector<f64>,
    grid: &MappedGrid,
) -> Result<Vec<WavefunctionSample>> {
    if eigvec.len() != h.dim() {
        return Err(invalid(format!(
            "eigenvector has length {}, Hamiltonian dimension is {}",
            eigvec.len(),
            h.dim()
        )));
    }
    if grid.len() != h.dim() + 2 {
        return Err(invalid("grid does not match the Hamiltonian"));
    }
    let norm = eigvec.norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized(norm));
    }
    let w = grid.lobatto().weights();
    let s = grid.map_deriv();
    let last = grid.len() - 1;
    Ok(grid
        .radii()
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let psi = if k == 0 || k == last {
                0.0
            } else {
                eigvec[k - 1] / (w[k] * s[k]).sqrt()
            };
            WavefunctionSample {
                r,
                psi,
                density: psi * psi,
            }
        })
        .collect())
}

/// Number of sign changes, skipping samples below `1e-8` of the peak magnitude.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-8 * peak;
    let mut prev = 0.0f64;
    let mut changes = 0;
    for &v in values.iter().filter(|v| v.abs() > floor) {
        if prev != 0.0 && prev.signum() != v.signum() {
            changes += 1;
        }
        prev = v;
    }
    changes
}
