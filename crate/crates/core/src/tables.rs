//! Recompute each bundled reference table and line it up against the printed values.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{free_iho_energy, iho_nodes};
use crate::degeneracy::{barrier_suite, davidson_pair_suite, frequency_doubling_suite};
use crate::error::{invalid, Result};
use crate::fixtures::{self, IncidentalRow, BARRIER_RADII};
use crate::potentials::{BarrierKind, PotentialSpec};
use crate::solver::{ConfinementSpec, GridParams, OuterRadius, RadialProblem};

/// Tables shipped with the crate.
pub const TABLE_IDS: std::ops::RangeInclusive<u8> = 1..=8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    HbarOmega,
    Hartree,
    Bohr,
}

impl Unit {
    pub fn as_str(self) -> &'static str {
        match self {
            Unit::HbarOmega => "hbar_omega",
            Unit::Hartree => "hartree",
            Unit::Bohr => "bohr",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<usize>> for Cell {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Cell::Empty, Cell::from)
    }
}

/// One printed number next to its recomputed counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    /// Values for the report's key columns, in the same order.
    pub keys: Vec<Cell>,
    pub quantity: String,
    pub unit: Unit,
    pub reference: f64,
    pub computed: f64,
    pub tolerance: f64,
    /// Printed cell judged inconsistent with its own block; shown but not scored.
    pub excluded: bool,
}

impl Comparison {
    pub fn deviation(&self) -> f64 {
        self.computed - self.reference
    }

    pub fn within_tolerance(&self) -> bool {
        self.deviation().abs() <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub table: u8,
    pub title: String,
    pub grid: GridParams,
    /// Column headers for [`Comparison::keys`], units in brackets.
    pub key_columns: Vec<String>,
    pub rows: Vec<Comparison>,
}

impl TableReport {
    fn new(table: u8, title: &str, grid: GridParams, key_columns: &[&str]) -> Self {
        Self {
            table,
            title: title.to_owned(),
            grid,
            key_columns: key_columns.iter().map(|s| (*s).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, keys: Vec<Cell>, quantity: impl Into<String>, unit: Unit, reference: f64, computed: f64, tolerance: f64) {
        self.rows.push(Comparison {
            keys,
            quantity: quantity.into(),
            unit,
            reference,
            computed,
            tolerance,
            excluded: false,
        });
    }

    /// Scored rows that miss their tolerance.
    pub fn failures(&self) -> impl Iterator<Item = &Comparison> {
        self.rows.iter().filter(|r| !r.excluded && !r.within_tolerance())
    }

    pub fn max_abs_deviation(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| !r.excluded)
            .map(|r| r.deviation().abs())
            .fold(0.0, f64::max)
    }
}

/// Options that only some tables use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub grid: GridParams,
    pub barrier_kind: BarrierKind,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            grid: GridParams::default(),
            barrier_kind: BarrierKind::Plateau,
        }
    }
}

pub fn reproduce(table: u8, opts: TableOptions) -> Result<TableReport> {
    match table {
        1 => table1(opts.grid),
        2 => table2(opts.grid),
        3 => table3(opts.grid),
        4 => table4(opts.grid),
        5 => table5(opts.grid),
        6 => table6(opts.grid),
        7 => table7(opts.grid),
        8 => table8(opts.grid, opts.barrier_kind),
        other => Err(invalid(format!("unknown table {other}; expected 1..=8"))),
    }
}

/// Full spectra for each distinct `(ℓ, confinement)` in `cells`, returned per cell.
fn spectra_for(potential: PotentialSpec, grid: GridParams, cells: &[(u32, ConfinementSpec)]) -> Result<Vec<Vec<f64>>> {
    let mut unique: Vec<(u32, ConfinementSpec)> = Vec::new();
    for c in cells {
        if !unique.contains(c) {
            unique.push(*c);
        }
    }
    let solved: Vec<Vec<f64>> = unique
        .par_iter()
        .map(|&(ell, conf)| {
            RadialProblem::new(potential, ell, conf)
                .with_grid(grid)
                .solve()
                .map(|s| s.spectrum.eigenvalues)
        })
        .collect::<Result<_>>()?;
    Ok(cells
        .iter()
        .map(|c| solved[unique.iter().position(|u| u == c).expect("cell registered above")].clone())
        .collect())
}

fn level(spectrum: &[f64], n: usize) -> Result<f64> {
    spectrum
        .get(n)
        .copied()
        .ok_or_else(|| invalid(format!("state n={n} beyond the {} computed levels", spectrum.len())))
}

fn confined_levels(
    table: u8,
    title: &str,
    rows: Vec<fixtures::ConfinedLevel>,
    potential: PotentialSpec,
    unit: Unit,
    tolerance: f64,
    grid: GridParams,
) -> Result<TableReport> {
    let cells: Vec<_> = rows.iter().map(|r| (r.ell, ConfinementSpec::sphere(r.r_c))).collect();
    let spectra = spectra_for(potential, grid, &cells)?;
    let scale = potential.energy_unit();
    let mut report = TableReport::new(table, title, grid, &["n", "ell", "state", "r_c [bohr]"]);
    for (row, spectrum) in rows.iter().zip(&spectra) {
        report.push(
            vec![row.n.into(), row.ell.into(), Cell::Text(row.label.clone()), row.r_c.into()],
            "E",
            unit,
            row.energy,
            level(spectrum, row.n)? / scale,
            tolerance,
        );
    }
    Ok(report)
}

pub fn table1(grid: GridParams) -> Result<TableReport> {
    confined_levels(
        1,
        "Confined harmonic oscillator, k = 1",
        fixtures::table1()?,
        PotentialSpec::harmonic(1.0)?,
        Unit::HbarOmega,
        1e-9,
        grid,
    )
}

pub fn table2(grid: GridParams) -> Result<TableReport> {
    confined_levels(
        2,
        "Confined hydrogen atom, Z = 1",
        fixtures::table2()?,
        PotentialSpec::coulomb(1.0)?,
        Unit::Hartree,
        1e-8,
        grid,
    )
}

pub fn table3(grid: GridParams) -> Result<TableReport> {
    let mut report = TableReport::new(3, "Radial nodes of free oscillator states, k = 1", grid, &["n", "ell", "state", "node"]);
    for row in fixtures::table3()? {
        let nodes = iho_nodes(row.n, row.ell, 1.0)?.nodes;
        let printed = row.nodes();
        if printed.len() != nodes.len() {
            return Err(invalid(format!("state ({},{}) has {} nodes, fixture lists {}", row.n, row.ell, nodes.len(), printed.len())));
        }
        for (i, (p, c)) in printed.iter().zip(&nodes).enumerate() {
            report.push(
                vec![row.n.into(), row.ell.into(), Cell::Text(row.label.clone()), (i + 1).into()],
                "r_node",
                Unit::Bohr,
                *p,
                *c,
                1e-6,
            );
        }
    }
    Ok(report)
}

/// Exact node closest to a radius printed to five decimals.
fn resolve_node(printed: f64, ell: u32) -> Result<f64> {
    let mut best: Option<f64> = None;
    for n_star in 1..=3 {
        for node in iho_nodes(n_star, ell, 1.0)?.nodes {
            if best.is_none_or(|b| (node - printed).abs() < (b - printed).abs()) {
                best = Some(node);
            }
        }
    }
    match best {
        Some(b) if (b - printed).abs() < 1e-4 => Ok(b),
        _ => Err(invalid(format!("radius {printed} is not a free-state node for ell={ell}"))),
    }
}

/// Confinement for an incidental-degeneracy row; a printed 200 is the open outer boundary.
fn incidental_confinement(row: &IncidentalRow) -> Result<ConfinementSpec> {
    const OPEN: f64 = 200.0;
    let r_b = if row.r_b == OPEN {
        OuterRadius::Infinite
    } else {
        OuterRadius::Finite(resolve_node(row.r_b, row.ell)?)
    };
    let r_a = if row.r_a == 0.0 { 0.0 } else { resolve_node(row.r_a, row.ell)? };
    Ok(ConfinementSpec::shell(r_a, r_b))
}

fn incidental(table: u8, title: &str, rows: Vec<IncidentalRow>, grid: GridParams) -> Result<TableReport> {
    let cells = rows
        .iter()
        .map(|r| Ok((r.ell, incidental_confinement(r)?)))
        .collect::<Result<Vec<_>>>()?;
    let spectra = spectra_for(PotentialSpec::harmonic(1.0)?, grid, &cells)?;
    let mut report = TableReport::new(table, title, grid, &["n", "ell", "r_a [bohr]", "r_b [bohr]", "free_n"]);
    for ((row, (_, conf)), spectrum) in rows.iter().zip(&cells).zip(&spectra) {
        let keys = vec![
            row.n.into(),
            row.ell.into(),
            conf.r_a.into(),
            conf.r_b.resolve(&grid).into(),
            row.free_n.into(),
        ];
        let computed = level(spectrum, row.n)?;
        match (row.starred, row.free_n) {
            (true, Some(free_n)) => {
                report.push(keys, "E*", Unit::HbarOmega, free_iho_energy(free_n, row.ell, 1.0), computed, 1e-5)
            }
            (true, None) => return Err(invalid("starred fixture row without its free state")),
            (false, _) => report.push(keys, "E", Unit::HbarOmega, row.energy, computed, 1e-4),
        }
    }
    Ok(report)
}

pub fn table4(grid: GridParams) -> Result<TableReport> {
    incidental(4, "Incidental degeneracy, ell = 0, k = 1", fixtures::table4()?, grid)
}

pub fn table5(grid: GridParams) -> Result<TableReport> {
    incidental(5, "Incidental degeneracy, ell = 3, k = 1", fixtures::table5()?, grid)
}

pub fn table6(grid: GridParams) -> Result<TableReport> {
    let rows = fixtures::table6()?;
    let mut ells: Vec<u32> = rows.iter().map(|r| r.ell).collect();
    ells.dedup();
    let mut report = TableReport::new(6, "Delta-ell = 2 pairs at the first free node, k = 1", grid, &["n", "ell", "r_b [bohr]"]);
    for ell in ells {
        let subset: Vec<_> = rows.iter().filter(|r| r.ell == ell).collect();
        let ns: Vec<usize> = subset.iter().map(|r| r.n).collect();
        let pairs = frequency_doubling_suite(ell, &ns, grid)?;
        for (fix, pair) in subset.iter().zip(&pairs) {
            let deep = pair.n > 9;
            let keys = || vec![pair.n.into(), ell.into(), pair.r_c.into()];
            let (hi, lo) = (fix.first.max(fix.second), fix.first.min(fix.second));
            let (e_tol, d_tol) = if deep { (1e-2, 1e-3) } else { (1e-4, 1e-5) };
            let upper = format!("E({},{})", pair.upper_state.n, pair.upper_state.ell);
            let lower = format!("E({},{})", pair.lower_state.n, pair.lower_state.ell);
            report.push(keys(), upper.clone(), Unit::HbarOmega, hi, pair.upper_energy, e_tol);
            report.push(keys(), lower.clone(), Unit::HbarOmega, lo, pair.lower_energy, e_tol);
            report.push(keys(), format!("{upper} - {lower}"), Unit::HbarOmega, hi - lo, pair.delta(), d_tol);
        }
    }
    Ok(report)
}

/// Coupling strength used by the bundled Davidson table.
pub const TABLE7_LAMBDA: f64 = 1.0;

pub fn table7(grid: GridParams) -> Result<TableReport> {
    let rows = fixtures::table7()?;
    let pairs: Vec<_> = rows.iter().filter(|r| r.kind == fixtures::DavidsonRowKind::Pair).collect();
    let ground = rows
        .iter()
        .find(|r| r.kind == fixtures::DavidsonRowKind::Ground)
        .ok_or_else(|| invalid("table7 fixture lacks its ground row"))?;
    let suite = davidson_pair_suite(TABLE7_LAMBDA, pairs.len(), grid)?;
    let mut report = TableReport::new(7, "Davidson oscillator, lambda = 1, k = 1", grid, &["n", "s_state", "d_state"]);
    let none = || vec![Cell::Empty, Cell::Empty, Cell::Empty];
    report.push(none(), "r_c", Unit::Bohr, ground.r_c, suite.r_c, 1e-5);
    report.push(none(), "E_free(0,0)", Unit::HbarOmega, ground.free_energy, suite.free_ground_energy, 1e-5);
    report.push(none(), "E(0,0)*", Unit::HbarOmega, ground.s_energy, suite.confined_ground_energy, 1e-5);
    for (fix, row) in pairs.iter().zip(&suite.rows) {
        let keys = || {
            vec![
                row.n.into(),
                Cell::Text(format!("({},{})", row.s_state.n, row.s_state.ell)),
                Cell::Text(format!("({},{})", row.d_state.n, row.d_state.ell)),
            ]
        };
        report.push(keys(), "E_free(n+1,0)", Unit::HbarOmega, fix.free_energy, row.free_s_energy, 1e-5);
        report.push(keys(), "E(n+1,0)", Unit::HbarOmega, fix.s_energy, row.s_energy, 1e-4);
        if let Some(d) = fix.d_energy {
            report.push(keys(), "E(n,2)", Unit::HbarOmega, d, row.d_energy, 1e-4);
        }
        if let Some(d) = fix.delta {
            report.push(keys(), "delta", Unit::HbarOmega, d, row.delta, 1e-5);
        }
        if let (Some(d), Some(c)) = (fix.delta_delta, row.delta_delta) {
            report.push(keys(), "delta_delta", Unit::HbarOmega, d, c, 1e-5);
        }
    }
    Ok(report)
}

/// Barrier heights in the order the bundled table lists them.
pub const TABLE8_HEIGHTS: [f64; 4] = [100.0, 50.0, 10.0, 5.0];

pub fn table8(grid: GridParams, kind: BarrierKind) -> Result<TableReport> {
    let rows = fixtures::table8()?;
    let n_states = rows.iter().map(|r| r.n + 1).max().unwrap_or(0);
    let cells = barrier_suite(&BARRIER_RADII, &TABLE8_HEIGHTS, n_states, kind, grid)?;
    let title = match kind {
        BarrierKind::Step => "Oscillator with a finite barrier added beyond r_c, k = 1",
        BarrierKind::Plateau => "Oscillator levelled off at v_c beyond r_c, k = 1",
    };
    let mut report = TableReport::new(
        8,
        title,
        grid,
        &["n", "v_c [hartree]", "printed v_c [hartree]", "printed r_c [bohr]", "r_c used [bohr]"],
    );
    for row in &rows {
        for (col, (&target, &printed)) in BARRIER_RADII.iter().zip(&row.energies()).enumerate() {
            let cell = cells
                .iter()
                .find(|c| c.target_r_c == target && c.v_c == row.v_c)
                .ok_or_else(|| invalid(format!("no barrier cell for v_c={}", row.v_c)))?;
            report.push(
                vec![
                    row.n.into(),
                    row.v_c.into(),
                    row.printed_v_c.into(),
                    target.into(),
                    cell.r_c.into(),
                ],
                "E",
                Unit::Hartree,
                printed,
                level(&cell.energies, row.n)?,
                1e-4,
            );
            report.rows.last_mut().expect("just pushed").excluded = row.is_excluded(col);
        }
    }
    Ok(report)
}
