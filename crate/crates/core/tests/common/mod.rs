//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use confined_gps::coordinate_map::MapSpec;
use confined_gps::potentials::PotentialSpec;
use confined_gps::spectral_basis::LobattoGrid;
use nalgebra::DMatrix;

/// First three derivatives of a coordinate map at `x`.
fn map_derivatives(map: &MapSpec, x: f64) -> (f64, f64, f64, f64) {
    match *map {
        MapSpec::Algebraic { alpha, r_max } => {
            let l = alpha * r_max / 2.0;
            let d = 1.0 - x + alpha;
            let c = l * (2.0 + alpha);
            (l * (1.0 + x) / d, c / (d * d), 2.0 * c / d.powi(3), 6.0 * c / d.powi(4))
        }
        MapSpec::Linear { r_a, r_b } => {
            let h = 0.5 * (r_b - r_a);
            (r_a + h * (1.0 + x), h, 0.0, 0.0)
        }
    }
}

/// Collocation form of the mapped Hamiltonian on interior Lobatto nodes:
/// the symmetrized second-derivative matrix of the Legendre basis plus the
/// map-induced potential `(3 r''² - 2 r''' r') / (8 r'⁴)`.
pub fn collocation_hamiltonian(order: usize, map: MapSpec, potential: &PotentialSpec, ell: u32) -> DMatrix<f64> {
    let grid = LobattoGrid::new(order).unwrap();
    let x = grid.nodes();
    let n = order as f64;
    let m = order - 1;
    let derivs: Vec<_> = (1..order).map(|i| map_derivatives(&map, x[i])).collect();
    DMatrix::from_fn(m, m, |a, b| {
        let (i, j) = (a + 1, b + 1);
        let (r_i, d1_i, d2_i, d3_i) = derivs[a];
        let d1_j = derivs[b].1;
        if i == j {
            let d2 = -n * (n + 1.0) / (3.0 * (1.0 - x[i] * x[i]));
            let vm = (3.0 * d2_i * d2_i - 2.0 * d3_i * d1_i) / (8.0 * d1_i.powi(4));
            -0.5 * d2 / (d1_i * d1_i) + potential.evaluate(ell, r_i).unwrap() + vm
        } else {
            let d2 = -2.0 / (x[i] - x[j]).powi(2);
            -0.5 * d2 / (d1_i * d1_j)
        }
    })
}

/// Eigenvalues of a symmetric 3×3 matrix from the trigonometric solution of
/// its characteristic cubic, ascending.
pub fn symmetric_3x3_eigenvalues(a: &DMatrix<f64>) -> [f64; 3] {
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let q = a.trace() / 3.0;
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    let b = (a - DMatrix::identity(3, 3) * q) / p;
    let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let hi = q + 2.0 * p * phi.cos();
    let lo = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [lo, 3.0 * q - hi - lo, hi]
}

/// Deterministic pseudo-random symmetric matrix with entries in [-1, 1].
pub fn lcg_symmetric(dim: usize, seed: u64) -> DMatrix<f64> {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = next();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}
