//! Solver campaigns over families of confinements: incidental degeneracy at
//! free-state nodes, the `Δℓ = 2` gap at the first node, Davidson pair
//! ordering, and finite-barrier spectra.
//!
//! Every cell is an independent solve; cells run in parallel and are returned
//! in a fixed order.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{davidson_energy, davidson_first_node, free_iho_energy, iho_nodes};
use crate::eigensolver::StateLabel;
use crate::error::{invalid, Result};
use crate::potentials::{BarrierKind, PotentialSpec};
use crate::solver::{ConfinementSpec, GridParams, OuterRadius, RadialProblem};

/// Confined state compared against a free reference level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegeneracyReport {
    pub confined_state: StateLabel,
    pub confinement: ConfinementSpec,
    /// `ħω` units.
    pub confined_energy: f64,
    pub reference_state: StateLabel,
    pub reference_energy: f64,
}

impl DegeneracyReport {
    pub fn deviation(&self) -> f64 {
        (self.confined_energy - self.reference_energy).abs()
    }
}

fn oscillator_energy(k: f64, ell: u32, conf: ConfinementSpec, n: usize, grid: GridParams) -> Result<f64> {
    let e = RadialProblem::new(PotentialSpec::harmonic(k)?, ell, conf)
        .with_grid(grid)
        .energy(n)?;
    Ok(e / k.sqrt())
}

/// Walls at each node `ρ_m` of the free `(n*, ℓ)` state: `(m-1, ℓ)` in `[0, ρ_m]`
/// and `(n*-m, ℓ)` in `[ρ_m, ∞)` should both reproduce the free `(n*, ℓ)` level.
///
/// Reports come ordered by node, inner sphere before outer shell.
pub fn incidental_degeneracy_suite(
    ell: u32,
    n_star: usize,
    k: f64,
    grid: GridParams,
) -> Result<Vec<DegeneracyReport>> {
    if n_star == 0 {
        return Err(invalid("n_star must be >= 1"));
    }
    let nodes = iho_nodes(n_star, ell, k)?.nodes;
    let reference_state = StateLabel { n: n_star, ell };
    let reference_energy = free_iho_energy(n_star, ell, k);

    let cells: Vec<(usize, ConfinementSpec)> = nodes
        .iter()
        .enumerate()
        .flat_map(|(i, &rho)| {
            let m = i + 1;
            [
                (m - 1, ConfinementSpec::sphere(rho)),
                (n_star - m, ConfinementSpec::shell(rho, OuterRadius::Infinite)),
            ]
        })
        .collect();

    cells
        .into_par_iter()
        .map(|(n, conf)| {
            Ok(DegeneracyReport {
                confined_state: StateLabel { n, ell },
                confinement: conf,
                confined_energy: oscillator_energy(k, ell, conf, n, grid)?,
                reference_state,
                reference_energy,
            })
        })
        .collect()
}

/// One `[(n+1, ℓ), (n, ℓ+2)]` pair confined at the first node of the free `(1, ℓ)` state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoublingRow {
    pub n: usize,
    pub r_c: f64,
    pub upper_state: StateLabel,
    pub upper_energy: f64,
    pub lower_state: StateLabel,
    pub lower_energy: f64,
}

impl DoublingRow {
    /// `E(n+1, ℓ) - E(n, ℓ+2)` in `ħω`.
    pub fn delta(&self) -> f64 {
        self.upper_energy - self.lower_energy
    }
}

/// Radius of the single node of the free `(1, ℓ)` oscillator state (k = 1).
pub fn first_node_radius(ell: u32) -> Result<f64> {
    Ok(iho_nodes(1, ell, 1.0)?.nodes[0])
}

/// `Δℓ = 2` pairs for each requested `n` at `R_c = √((2ℓ+3)/2)`, harmonic k = 1.
pub fn frequency_doubling_suite(ell: u32, ns: &[usize], grid: GridParams) -> Result<Vec<DoublingRow>> {
    let r_c = first_node_radius(ell)?;
    let pot = PotentialSpec::harmonic(1.0)?;
    let conf = ConfinementSpec::sphere(r_c);
    let (s, d) = rayon::join(
        || RadialProblem::new(pot, ell, conf).with_grid(grid).solve(),
        || RadialProblem::new(pot, ell + 2, conf).with_grid(grid).solve(),
    );
    let (s, d) = (s?.spectrum, d?.spectrum);
    ns.iter()
        .map(|&n| {
            let upper = s.energy(n + 1);
            let lower = d.energy(n);
            match (upper, lower) {
                (Some(upper_energy), Some(lower_energy)) => Ok(DoublingRow {
                    n,
                    r_c,
                    upper_state: StateLabel { n: n + 1, ell },
                    upper_energy,
                    lower_state: StateLabel { n, ell: ell + 2 },
                    lower_energy,
                }),
                _ => Err(invalid(format!("n={n} exceeds the resolved spectrum at order {}", grid.order))),
            }
        })
        .collect()
}

/// `ΔE(R_c) = E(n, ℓ+2) - E(n+1, ℓ)` for a hard sphere of radius `R_c`, k = 1.
pub fn delta_e(ell: u32, n: usize, r_c: f64, grid: GridParams) -> Result<f64> {
    let pot = PotentialSpec::harmonic(1.0)?;
    let conf = ConfinementSpec::sphere(r_c);
    let (d, s) = rayon::join(
        || RadialProblem::new(pot, ell + 2, conf).with_grid(grid).energy(n),
        || RadialProblem::new(pot, ell, conf).with_grid(grid).energy(n + 1),
    );
    Ok(d? - s?)
}

pub fn delta_e_scan(ell: u32, n: usize, r_values: &[f64], grid: GridParams) -> Result<Vec<(f64, f64)>> {
    if r_values.iter().any(|&r| !(r > 0.0)) {
        return Err(invalid("scan radii must be positive"));
    }
    if r_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("scan radii must be strictly ascending"));
    }
    r_values
        .par_iter()
        .map(|&r| Ok((r, delta_e(ell, n, r, grid)?)))
        .collect()
}

/// Bisection for a root of `f` inside `[lo, hi]`, to absolute width `tol`.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(invalid(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo:e}, {f_hi:e}"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Radius in `[lo, hi]` where `ΔE(R_c)` equals `level`.
pub fn delta_e_level_crossing(ell: u32, n: usize, level: f64, lo: f64, hi: f64, grid: GridParams) -> Result<f64> {
    bisect(|r| Ok(delta_e(ell, n, r, grid)? - level), lo, hi, 1e-9)
}

/// Radius in `[lo, hi]` where the `ΔE` curves of two pair indices intersect.
pub fn delta_e_curve_crossing(ell: u32, n1: usize, n2: usize, lo: f64, hi: f64, grid: GridParams) -> Result<f64> {
    bisect(
        |r| Ok(delta_e(ell, n1, r, grid)? - delta_e(ell, n2, r, grid)?),
        lo,
        hi,
        1e-9,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DavidsonRow {
    pub n: usize,
    pub s_state: StateLabel,
    pub free_s_energy: f64,
    pub s_energy: f64,
    pub d_state: StateLabel,
    pub d_energy: f64,
    pub delta: f64,
    /// `delta_n - delta_{n-1}`; absent for the first pair.
    pub delta_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DavidsonTable {
    pub lambda: f64,
    pub r_c: f64,
    pub free_ground_energy: f64,
    /// Confined `(0, 0)` energy at `R_c`.
    pub confined_ground_energy: f64,
    /// Free `(1, 0)` energy it should match.
    pub incidental_reference: f64,
    pub rows: Vec<DavidsonRow>,
}

/// Davidson oscillator (k = 1) confined at the node of its free `(1, 0)` state:
/// the incidental `(0,0)` check plus `n_pairs` pairs `[(n+1, 0), (n, 2)]`.
pub fn davidson_pair_suite(lambda: f64, n_pairs: usize, grid: GridParams) -> Result<DavidsonTable> {
    if !(lambda >= 0.0) {
        return Err(invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    let r_c = davidson_first_node(0, lambda);
    let pot = PotentialSpec::davidson(1.0, lambda)?;
    let conf = ConfinementSpec::sphere(r_c);
    let (s, d) = rayon::join(
        || RadialProblem::new(pot, 0, conf).with_grid(grid).solve(),
        || RadialProblem::new(pot, 2, conf).with_grid(grid).solve(),
    );
    let (s, d) = (s?.spectrum.eigenvalues, d?.spectrum.eigenvalues);
    if s.len() <= n_pairs || d.len() < n_pairs {
        return Err(invalid("too many pairs requested for the grid order"));
    }
    let mut rows: Vec<DavidsonRow> = Vec::with_capacity(n_pairs);
    for n in 0..n_pairs {
        let delta = s[n + 1] - d[n];
        let delta_delta = rows.last().map(|prev| delta - prev.delta);
        rows.push(DavidsonRow {
            n,
            s_state: StateLabel { n: n + 1, ell: 0 },
            free_s_energy: davidson_energy(n + 1, 0, lambda),
            s_energy: s[n + 1],
            d_state: StateLabel { n, ell: 2 },
            d_energy: d[n],
            delta,
            delta_delta,
        });
    }
    Ok(DavidsonTable {
        lambda,
        r_c,
        free_ground_energy: davidson_energy(0, 0, lambda),
        confined_ground_energy: s[0],
        incidental_reference: davidson_energy(1, 0, lambda),
        rows,
    })
}

/// Lowest s-wave levels of the k = 1 oscillator with a finite barrier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarrierCell {
    pub target_r_c: f64,
    /// Barrier radius after snapping onto the grid.
    pub r_c: f64,
    pub v_c: f64,
    pub energies: Vec<f64>,
}

/// Every `(R_c, V_c)` combination; ordered by target radius, then by height as given.
pub fn barrier_suite(
    r_c_targets: &[f64],
    v_c_values: &[f64],
    n_states: usize,
    kind: BarrierKind,
    grid: GridParams,
) -> Result<Vec<BarrierCell>> {
    if r_c_targets.iter().any(|&r| !(r > 0.0)) || v_c_values.iter().any(|&v| !(v > 0.0)) {
        return Err(invalid("barrier radii and heights must be positive"));
    }
    let cells: Vec<(f64, f64)> = r_c_targets
        .iter()
        .flat_map(|&r| v_c_values.iter().map(move |&v| (r, v)))
        .collect();
    let pot = PotentialSpec::harmonic(1.0)?;
    cells
        .into_par_iter()
        .map(|(target, v_c)| {
            let prob = RadialProblem::new(pot, 0, ConfinementSpec::barrier(target, v_c, kind)).with_grid(grid);
            let sol = prob.solve()?;
            let r_c = sol
                .spectrum
                .provenance
                .potential
                .barrier
                .map_or(target, |b| b.radius);
            let energies = sol.spectrum.eigenvalues.iter().take(n_states).copied().collect();
            Ok(BarrierCell {
                target_r_c: target,
                r_c,
                v_c,
                energies,
            })
        })
        .collect()
}

/// A pair of barrier cells whose ordering contradicts the expected monotonicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    pub n: usize,
    pub description: String,
}

/// Expected: at fixed `(n, R_c)`, E rises with `V_c`; at fixed `(n, V_c)`,
/// E falls as `R_c` grows.
pub fn barrier_monotonicity_violations(cells: &[BarrierCell]) -> Vec<MonotonicityViolation> {
    let mut out = Vec::new();
    let n_states = cells.iter().map(|c| c.energies.len()).min().unwrap_or(0);
    for a in cells {
        for b in cells {
            for n in 0..n_states {
                let (ea, eb) = (a.energies[n], b.energies[n]);
                if a.target_r_c == b.target_r_c && a.v_c > b.v_c && ea <= eb {
                    out.push(MonotonicityViolation {
                        n,
                        description: format!(
                            "R_c={}: E(V_c={})={ea} <= E(V_c={})={eb}",
                            a.target_r_c, a.v_c, b.v_c
                        ),
                    });
                }
                if a.v_c == b.v_c && a.target_r_c < b.target_r_c && ea <= eb {
                    out.push(MonotonicityViolation {
                        n,
                        description: format!(
                            "V_c={}: E(R_c={})={ea} <= E(R_c={})={eb}",
                            a.v_c, a.target_r_c, b.target_r_c
                        ),
                    });
                }
            }
        }
    }
    out
}
