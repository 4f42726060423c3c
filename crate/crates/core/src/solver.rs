//! End-to-end pipeline: confinement geometry → mapped grid → Hamiltonian → spectrum.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::coordinate_map::{MapSpec, MappedGrid};
use crate::eigensolver::{eigen_symmetric, Spectrum};
use crate::error::{invalid, Result};
use crate::hamiltonian::{assemble, wavefunction_samples, WavefunctionSample};
use crate::potentials::{Barrier, BarrierKind, PotentialSpec};
use crate::spectral_basis::LobattoGrid;

pub const DEFAULT_ORDER: usize = 300;
pub const DEFAULT_ALPHA: f64 = 25.0;
pub const DEFAULT_R_MAX: f64 = 200.0;

/// Discretization parameters: polynomial order `N`, map parameter `α`, and
/// the radius standing in for infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridParams {
    pub order: usize,
    pub alpha: f64,
    pub r_max: f64,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            alpha: DEFAULT_ALPHA,
            r_max: DEFAULT_R_MAX,
        }
    }
}

impl GridParams {
    pub fn with_order(self, order: usize) -> Self {
        Self { order, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(invalid(format!("grid order must be >= 2, got {}", self.order)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(invalid(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(invalid(format!("r_max must be positive, got {}", self.r_max)));
        }
        Ok(())
    }
}

/// Shared Lobatto grids, built once per order.
pub fn lobatto_grid(order: usize) -> Result<Arc<LobattoGrid>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LobattoGrid>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().expect("grid cache poisoned").get(&order) {
        return Ok(g.clone());
    }
    let grid = Arc::new(LobattoGrid::new(order)?);
    Ok(cache
        .lock()
        .expect("grid cache poisoned")
        .entry(order)
        .or_insert(grid)
        .clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "radius", rename_all = "snake_case")]
pub enum OuterRadius {
    Finite(f64),
    /// Resolved to `GridParams::r_max`.
    Infinite,
}

impl OuterRadius {
    pub fn resolve(self, params: &GridParams) -> f64 {
        match self {
            OuterRadius::Finite(r) => r,
            OuterRadius::Infinite => params.r_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Wall {
    Impenetrable,
    /// Finite barrier of the given height at the outer radius; the domain
    /// itself extends to `r_max`.
    FiniteBarrier { height: f64, kind: BarrierKind },
}

/// Inner radius, outer radius and wall type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfinementSpec {
    pub r_a: f64,
    pub r_b: OuterRadius,
    pub wall: Wall,
}

impl ConfinementSpec {
    pub fn free() -> Self {
        Self {
            r_a: 0.0,
            r_b: OuterRadius::Infinite,
            wall: Wall::Impenetrable,
        }
    }

    /// Hard sphere `[0, r_c]`.
    pub fn sphere(r_c: f64) -> Self {
        Self::shell(0.0, OuterRadius::Finite(r_c))
    }

    pub fn shell(r_a: f64, r_b: OuterRadius) -> Self {
        Self {
            r_a,
            r_b,
            wall: Wall::Impenetrable,
        }
    }

    pub fn barrier(r_c: f64, height: f64, kind: BarrierKind) -> Self {
        Self {
            r_a: 0.0,
            r_b: OuterRadius::Finite(r_c),
            wall: Wall::FiniteBarrier { height, kind },
        }
    }

    pub fn validate(&self, params: &GridParams) -> Result<()> {
        let r_b = self.r_b.resolve(params);
        if !(self.r_a >= 0.0 && self.r_a.is_finite()) {
            return Err(invalid(format!("R_a must be >= 0, got {}", self.r_a)));
        }
        if !(r_b > self.r_a && r_b.is_finite()) {
            return Err(invalid(format!("need R_a < R_b, got R_a={}, R_b={r_b}", self.r_a)));
        }
        if let Wall::FiniteBarrier { height, .. } = self.wall {
            if self.r_a != 0.0 {
                return Err(invalid("a finite barrier requires R_a = 0"));
            }
            if !(height > 0.0 && height.is_finite()) {
                return Err(invalid(format!("barrier height must be positive, got {height}")));
            }
            if r_b >= params.r_max {
                return Err(invalid(format!(
                    "barrier radius {r_b} must lie inside r_max = {}",
                    params.r_max
                )));
            }
        }
        Ok(())
    }

    /// Map used for this geometry: algebraic from the origin, linear on a shell.
    pub fn map(&self, params: &GridParams) -> Result<MapSpec> {
        match self.wall {
            Wall::FiniteBarrier { .. } => MapSpec::algebraic(params.alpha, params.r_max),
            Wall::Impenetrable if self.r_a == 0.0 => {
                MapSpec::algebraic(params.alpha, self.r_b.resolve(params))
            }
            Wall::Impenetrable => MapSpec::linear(self.r_a, self.r_b.resolve(params)),
        }
    }
}

/// Everything needed to produce one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialProblem {
    pub potential: PotentialSpec,
    pub ell: u32,
    pub confinement: ConfinementSpec,
    pub grid: GridParams,
}

impl RadialProblem {
    pub fn new(potential: PotentialSpec, ell: u32, confinement: ConfinementSpec) -> Self {
        Self {
            potential,
            ell,
            confinement,
            grid: GridParams::default(),
        }
    }

    pub fn with_grid(mut self, grid: GridParams) -> Self {
        self.grid = grid;
        self
    }

    /// Build the mapped grid and the effective potential (barrier attached
    /// and snapped onto the nearest collocation radius).
    pub fn discretize(&self) -> Result<(MappedGrid, PotentialSpec)> {
        self.grid.validate()?;
        self.confinement.validate(&self.grid)?;
        let grid = MappedGrid::new(lobatto_grid(self.grid.order)?, self.confinement.map(&self.grid)?);
        let potential = match self.confinement.wall {
            Wall::Impenetrable => self.potential,
            Wall::FiniteBarrier { height, kind } => {
                let r_c = self.confinement.r_b.resolve(&self.grid);
                self.potential
                    .with_barrier(Barrier::new(r_c, height, kind)?)
                    .snapped_to(&grid)
            }
        };
        Ok((grid, potential))
    }

    pub fn solve(&self) -> Result<Solution> {
        self.solve_inner(false)
    }

    pub fn solve_with_vectors(&self) -> Result<Solution> {
        self.solve_inner(true)
    }

    fn solve_inner(&self, want_vectors: bool) -> Result<Solution> {
        let (grid, potential) = self.discretize()?;
        let h = assemble(&grid, &potential, self.ell)?;
        let eig = eigen_symmetric(h.entries(), want_vectors)?;
        let provenance = Provenance {
            potential,
            confinement: self.confinement,
            grid: self.grid,
        };
        Ok(Solution {
            spectrum: Spectrum::from_sorted(eig.values, self.ell, provenance),
            vectors: eig.vectors,
            hamiltonian: h,
        })
    }

    /// Energy of state `n` in hartree.
    pub fn energy(&self, n: usize) -> Result<f64> {
        let sol = self.solve()?;
        sol.spectrum
            .energy(n)
            .ok_or_else(|| invalid(format!("state n={n} exceeds the {} computed levels", sol.spectrum.eigenvalues.len())))
    }
}

/// Inputs that produced a spectrum, with the barrier radius as actually used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Provenance {
    pub potential: PotentialSpec,
    pub confinement: ConfinementSpec,
    pub grid: GridParams,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub spectrum: Spectrum<Provenance>,
    pub vectors: Option<DMatrix<f64>>,
    pub hamiltonian: crate::hamiltonian::HamiltonianMatrix,
}

impl Solution {
    /// Samples of `u(r)` for state `n`, sign fixed so the first significant
    /// lobe is positive.
    pub fn wavefunction(&self, n: usize) -> Result<Vec<WavefunctionSample>> {
        let vectors = self
            .vectors
            .as_ref()
            .ok_or_else(|| invalid("solution was computed without eigenvectors"))?;
        if n >= vectors.ncols() {
            return Err(invalid(format!("state n={n} out of range")));
        }
        let mut v: DVector<f64> = vectors.column(n).into_owned();
        let peak = v.amax();
        if let Some(first) = v.iter().find(|c| c.abs() > 1e-6 * peak) {
            if *first < 0.0 {
                v.neg_mut();
            }
        }
        wavefunction_samples(&self.hamiltonian, &v, self.hamiltonian.grid())
    }
}
