mod common;

use approx::assert_relative_eq;
use confined_gps::coordinate_map::{MapSpec, MappedGrid};
use confined_gps::eigensolver::{eigen_symmetric, eigenvalues_symmetric};
use confined_gps::hamiltonian::assemble;
use confined_gps::potentials::PotentialSpec;
use confined_gps::solver::lobatto_grid;
use nalgebra::DMatrix;

use common::{collocation_hamiltonian, lcg_symmetric, symmetric_3x3_eigenvalues};

fn galerkin(order: usize, map: MapSpec, pot: &PotentialSpec, ell: u32) -> Vec<f64> {
    let grid = MappedGrid::new(lobatto_grid(order).unwrap(), map);
    eigenvalues_symmetric(assemble(&grid, pot, ell).unwrap().entries()).unwrap()
}

/// The collocation matrix is not symmetric for a nonlinear map, but it is
/// similar to a symmetric one; nalgebra's general Schur solver provides its
/// spectrum independently of the crate's own eigensolver.
fn collocation(order: usize, map: MapSpec, pot: &PotentialSpec, ell: u32) -> Vec<f64> {
    let h = collocation_hamiltonian(order, map, pot, ell);
    let sym = (&h + h.transpose()) * 0.5;
    let mut v: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn collocation_and_galerkin_agree_on_algebraic_maps() {
    let cases = [
        (PotentialSpec::harmonic(1.0).unwrap(), 0, 1.0),
        (PotentialSpec::harmonic(1.0).unwrap(), 2, 3.0),
        (PotentialSpec::coulomb(1.0).unwrap(), 0, 2.0),
        (PotentialSpec::coulomb(1.0).unwrap(), 1, 20.0),
        (PotentialSpec::davidson(1.0, 1.0).unwrap(), 0, 1.4553467),
    ];
    for (pot, ell, r_c) in cases {
        let map = MapSpec::algebraic(25.0, r_c).unwrap();
        let g = galerkin(120, map, &pot, ell);
        let c = collocation(120, map, &pot, ell);
        for n in 0..6 {
            assert_relative_eq!(g[n], c[n], max_relative = 1e-9);
        }
    }
}

#[test]
fn collocation_and_galerkin_agree_on_linear_maps() {
    let pot = PotentialSpec::harmonic(1.0).unwrap();
    for (r_a, r_b, ell) in [(1.224_744_871_391_589, 200.0, 0), (0.5, 3.0, 3), (2.0, 6.0, 1)] {
        let map = MapSpec::linear(r_a, r_b).unwrap();
        let g = galerkin(150, map, &pot, ell);
        let c = collocation(150, map, &pot, ell);
        for n in 0..5 {
            assert_relative_eq!(g[n], c[n], max_relative = 1e-9);
        }
    }
}

#[test]
fn collocation_form_matches_symmetric_part_exactly_for_linear_map() {
    // With r'' = 0 the collocation matrix is already symmetric.
    let map = MapSpec::linear(0.5, 4.0).unwrap();
    let h = collocation_hamiltonian(40, map, &PotentialSpec::harmonic(1.0).unwrap(), 1);
    let asym = (&h - h.transpose()).amax();
    assert!(asym < 1e-12 * h.amax());
}

#[test]
fn random_3x3_matches_cubic_roots() {
    for seed in 0..50 {
        let a = lcg_symmetric(3, seed);
        let got = eigenvalues_symmetric(&a).unwrap();
        let want = symmetric_3x3_eigenvalues(&a);
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "seed {seed}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn repeated_eigenvalue_3x3() {
    let a = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0]);
    let got = eigenvalues_symmetric(&a).unwrap();
    for (g, w) in got.iter().zip([1.0, 1.0, 4.0]) {
        assert!((g - w).abs() < 1e-13);
    }
}

#[test]
fn agrees_with_nalgebra_on_random_matrices() {
    for (dim, seed) in [(7, 1), (40, 2), (120, 3)] {
        let a = lcg_symmetric(dim, seed);
        let ours = eigen_symmetric(&a, true).unwrap();
        let mut theirs: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (o, t) in ours.values.iter().zip(&theirs) {
            assert!((o - t).abs() < 1e-11 * dim as f64);
        }
    }
}

#[test]
fn graded_hamiltonian_matches_nalgebra() {
    // Entries span many orders of magnitude near the origin of the algebraic map.
    let grid = MappedGrid::new(lobatto_grid(300).unwrap(), MapSpec::algebraic(25.0, 200.0).unwrap());
    let h = assemble(&grid, &PotentialSpec::coulomb(1.0).unwrap(), 0).unwrap();
    let ours = eigenvalues_symmetric(h.entries()).unwrap();
    let mut theirs: Vec<f64> = h.entries().clone().symmetric_eigenvalues().iter().copied().collect();
    theirs.sort_by(f64::total_cmp);
    for n in 0..10 {
        assert_relative_eq!(ours[n], theirs[n], max_relative = 1e-9);
    }
    // Higher Rydberg states are no longer contained by r_max = 200.
    for n in 0..5 {
        let principal = (n + 1) as f64;
        assert!((ours[n] + 0.5 / (principal * principal)).abs() < 1e-8, "n={n}: {}", ours[n]);
    }
}
