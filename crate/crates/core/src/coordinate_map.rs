//! Maps from the reference interval `x ∈ [-1, 1]` onto the radial domain.

use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::spectral_basis::LobattoGrid;

/// Algebraic map `r = L (1 + x) / (1 - x + α)` with `L = α r_max / 2`.
///
/// Returns `(r, dr/dx)`.
pub fn map_algebraic(x: f64, alpha: f64, r_max: f64) -> (f64, f64) {
    let l = 0.5 * alpha * r_max;
    let denom = 1.0 - x + alpha;
    (l * (1.0 + x) / denom, l * (2.0 + alpha) / (denom * denom))
}

/// Linear map of `[-1, 1]` onto the shell `[r_a, r_b]`.
pub fn map_linear(x: f64, r_a: f64, r_b: f64) -> (f64, f64) {
    let half = 0.5 * (r_b - r_a);
    let r = if x == 1.0 {
        r_b
    } else {
        r_a + half * (1.0 + x)
    };
    (r, half)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapSpec {
    /// Nonuniform map clustering nodes near the origin; `r(-1) = 0`, `r(1) = r_max`.
    Algebraic { alpha: f64, r_max: f64 },
    /// Uniform stretch onto `[r_a, r_b]`.
    Linear { r_a: f64, r_b: f64 },
}

impl MapSpec {
    pub fn algebraic(alpha: f64, r_max: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid(format!("map alpha must be positive, got {alpha}")));
        }
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(invalid(format!("map r_max must be positive, got {r_max}")));
        }
        Ok(MapSpec::Algebraic { alpha, r_max })
    }

    pub fn linear(r_a: f64, r_b: f64) -> Result<Self> {
        if !(r_a >= 0.0 && r_a < r_b && r_b.is_finite()) {
            return Err(invalid(format!(
                "linear map needs 0 <= r_a < r_b < inf, got [{r_a}, {r_b}]"
            )));
        }
        Ok(MapSpec::Linear { r_a, r_b })
    }

    /// Length scale `L`; only meaningful for the algebraic map.
    pub fn scale_length(&self) -> Option<f64> {
        match *self {
            MapSpec::Algebraic { alpha, r_max } => Some(0.5 * alpha * r_max),
            MapSpec::Linear { .. } => None,
        }
    }

    pub fn apply(&self, x: f64) -> (f64, f64) {
        match *self {
            MapSpec::Algebraic { alpha, r_max } => map_algebraic(x, alpha, r_max),
            MapSpec::Linear { r_a, r_b } => map_linear(x, r_a, r_b),
        }
    }
}

/// Physical radii and map derivatives at every collocation node.
#[derive(Debug, Clone)]
pub struct MappedGrid {
    lobatto: Arc<LobattoGrid>,
    map: MapSpec,
    radii: Vec<f64>,
    map_deriv: Vec<f64>,
}

impl MappedGrid {
    pub fn new(lobatto: Arc<LobattoGrid>, map: MapSpec) -> Self {
        let (radii, map_deriv) = lobatto.nodes().iter().map(|&x| map.apply(x)).unzip();
        Self {
            lobatto,
            map,
            radii,
            map_deriv,
        }
    }

    pub fn lobatto(&self) -> &LobattoGrid {
        &self.lobatto
    }

    pub fn lobatto_arc(&self) -> &Arc<LobattoGrid> {
        &self.lobatto
    }

    pub fn map(&self) -> MapSpec {
        self.map
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn map_deriv(&self) -> &[f64] {
        &self.map_deriv
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Index of the interior node closest to `r`.
    pub fn nearest_interior(&self, r: f64) -> usize {
        let n = self.radii.len() - 1;
        (1..n)
            .min_by(|&a, &b| {
                (self.radii[a] - r)
                    .abs()
                    .total_cmp(&(self.radii[b] - r).abs())
            })
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn algebraic_endpoints_and_midpoint() {
        assert_eq!(map_algebraic(-1.0, 25.0, 200.0).0, 0.0);
        assert_eq!(map_algebraic(-1.0, 3.0, 7.5).0, 0.0);
        assert_relative_eq!(map_algebraic(1.0, 25.0, 200.0).0, 200.0, max_relative = 1e-15);
        let (r, _) = map_algebraic(0.0, 25.0, 200.0);
        assert_relative_eq!(r, 2500.0 / 26.0, max_relative = 1e-15);
    }

    #[test]
    fn linear_endpoints_and_midpoint() {
        assert_eq!(map_linear(-1.0, 1.22474, 200.0).0, 1.22474);
        assert_eq!(map_linear(1.0, 0.95857, 200.0).0, 200.0);
        assert_eq!(map_linear(0.0, 2.0, 6.0), (4.0, 2.0));
    }

    #[test]
    fn parameter_validation() {
        assert!(MapSpec::algebraic(0.0, 10.0).is_err());
        assert!(MapSpec::algebraic(25.0, -1.0).is_err());
        assert!(MapSpec::linear(3.0, 2.0).is_err());
        assert!(MapSpec::linear(-1.0, 2.0).is_err());
        assert_eq!(MapSpec::algebraic(25.0, 200.0).unwrap().scale_length(), Some(2500.0));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let g = Arc::new(LobattoGrid::new(60).unwrap());
        for map in [
            MapSpec::algebraic(25.0, 200.0).unwrap(),
            MapSpec::algebraic(0.7, 3.0).unwrap(),
            MapSpec::linear(1.5, 9.0).unwrap(),
        ] {
            for &x in &g.nodes()[1..60] {
                let h = 1e-6;
                let fd = (map.apply(x + h).0 - map.apply(x - h).0) / (2.0 * h);
                assert_relative_eq!(fd, map.apply(x).1, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn mapped_grid_invariants() {
        let g = Arc::new(LobattoGrid::new(300).unwrap());
        let alg = MappedGrid::new(g.clone(), MapSpec::algebraic(25.0, 200.0).unwrap());
        assert_eq!(alg.radii()[0], 0.0);
        assert!((alg.radii()[300] - 200.0).abs() < 1e-12);
        assert!(alg.radii().windows(2).all(|w| w[0] < w[1]));
        assert!(alg.map_deriv().iter().all(|&d| d > 0.0));

        let lin = MappedGrid::new(g, MapSpec::linear(0.95857, 200.0).unwrap());
        assert_eq!(lin.radii()[0], 0.95857);
        assert_eq!(lin.radii()[300], 200.0);
        assert!(lin.radii().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn algebraic_map_clusters_near_origin() {
        let g = Arc::new(LobattoGrid::new(300).unwrap());
        let alg = MappedGrid::new(g, MapSpec::algebraic(25.0, 200.0).unwrap());
        // r <= 50 exactly when x <= -0.47059 (= -1200 / 2550).
        let inner = alg.radii().iter().filter(|&&r| r <= 50.0).count();
        let expected = alg.lobatto().nodes().iter().filter(|&&x| x <= -1200.0 / 2550.0).count();
        assert_eq!(inner, expected);
        let below_five = alg.radii().iter().filter(|&&r| r <= 5.0).count();
        assert!(below_five * 10 >= alg.len(), "only {below_five} of {} nodes below r = 5", alg.len());
    }
}
