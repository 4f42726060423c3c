//! Central potentials, the centrifugal term and the optional finite barrier.

use serde::{Deserialize, Serialize};

use crate::coordinate_map::MappedGrid;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorePotential {
    /// `k r² / 2`
    Harmonic { k: f64 },
    /// `-Z / r`
    Coulomb { z: f64 },
    /// `k r² / 2 + λ / (2 r²)`. A `B r² + A / r²` potential is `Davidson { k: 2B, lambda: 2A }`.
    Davidson { k: f64, lambda: f64 },
}

/// How the barrier modifies the potential for `r >= radius`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarrierKind {
    /// Adds `height` on top of the core potential.
    Step,
    /// Replaces the core potential by the constant `height`; the centrifugal
    /// term is kept.
    Plateau,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Barrier {
    pub radius: f64,
    pub height: f64,
    pub kind: BarrierKind,
}

impl Barrier {
    pub fn new(radius: f64, height: f64, kind: BarrierKind) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid(format!("barrier radius must be positive, got {radius}")));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(invalid(format!("barrier height must be positive, got {height}")));
        }
        Ok(Self {
            radius,
            height,
            kind,
        })
    }

    pub fn step(radius: f64, height: f64) -> Result<Self> {
        Self::new(radius, height, BarrierKind::Step)
    }

    pub fn plateau(radius: f64, height: f64) -> Result<Self> {
        Self::new(radius, height, BarrierKind::Plateau)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub core: CorePotential,
    pub barrier: Option<Barrier>,
}

impl PotentialSpec {
    pub fn harmonic(k: f64) -> Result<Self> {
        Self::new(CorePotential::Harmonic { k })
    }

    pub fn coulomb(z: f64) -> Result<Self> {
        Self::new(CorePotential::Coulomb { z })
    }

    pub fn davidson(k: f64, lambda: f64) -> Result<Self> {
        Self::new(CorePotential::Davidson { k, lambda })
    }

    pub fn new(core: CorePotential) -> Result<Self> {
        match core {
            CorePotential::Harmonic { k } if !(k > 0.0 && k.is_finite()) => {
                Err(invalid(format!("force constant must be positive, got {k}")))
            }
            CorePotential::Coulomb { z } if !(z > 0.0 && z.is_finite()) => {
                Err(invalid(format!("nuclear charge must be positive, got {z}")))
            }
            CorePotential::Davidson { k, lambda }
                if !(k > 0.0 && k.is_finite() && lambda >= 0.0 && lambda.is_finite()) =>
            {
                Err(invalid(format!(
                    "Davidson oscillator needs k > 0 and lambda >= 0, got k={k}, lambda={lambda}"
                )))
            }
            _ => Ok(Self {
                core,
                barrier: None,
            }),
        }
    }

    pub fn with_barrier(mut self, barrier: Barrier) -> Self {
        self.barrier = Some(barrier);
        self
    }

    /// Force constant of the oscillator family, `None` for Coulomb.
    pub fn force_constant(&self) -> Option<f64> {
        match self.core {
            CorePotential::Harmonic { k } | CorePotential::Davidson { k, .. } => Some(k),
            CorePotential::Coulomb { .. } => None,
        }
    }

    /// Energy unit of this potential in hartree: `√k` for oscillators, 1 for Coulomb.
    pub fn energy_unit(&self) -> f64 {
        self.force_constant().map_or(1.0, f64::sqrt)
    }

    /// Move the barrier radius onto the collocation radius closest to it.
    pub fn snapped_to(mut self, grid: &MappedGrid) -> Self {
        if let Some(b) = self.barrier.as_mut() {
            b.radius = grid.radii()[grid.nearest_interior(b.radius)];
        }
        self
    }

    /// Effective radial potential including the centrifugal term.
    pub fn evaluate(&self, ell: u32, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(invalid(format!("potential evaluated at r = {r}; r must be > 0")));
        }
        let ell = f64::from(ell);
        let centrifugal = ell * (ell + 1.0) / (2.0 * r * r);
        let core = match self.core {
            CorePotential::Harmonic { k } => 0.5 * k * r * r,
            CorePotential::Coulomb { z } => -z / r,
            CorePotential::Davidson { k, lambda } => 0.5 * k * r * r + lambda / (2.0 * r * r),
        };
        Ok(match self.barrier {
            Some(b) if r >= b.radius => match b.kind {
                BarrierKind::Step => core + centrifugal + b.height,
                BarrierKind::Plateau => b.height + centrifugal,
            },
            _ => core + centrifugal,
        })
    }
}
