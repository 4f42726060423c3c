//! Generalized pseudospectral (mapped Gauss-Lobatto-Legendre) solver for the
//! radial Schrödinger equation with central potentials under spherical
//! confinement: hard spheres, spherical shells and finite barriers.

pub mod analytic;
pub mod cli;
pub mod coordinate_map;
pub mod degeneracy;
pub mod eigensolver;
pub mod error;
pub mod fixtures;
pub mod hamiltonian;
pub mod output;
pub mod potentials;
pub mod solver;
pub mod spectral_basis;
pub mod tables;

pub use error::{Error, Result};
