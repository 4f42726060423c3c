//! Command-line front end.
//!
//! All flags are flat and may also come from a `key = value` file given with
//! `--config`; flags on the command line override the file.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::json;

use crate::analytic::{effective_ell, oscillator_nodes};
use crate::degeneracy::delta_e_scan;
use crate::error::{invalid, Error, Result};
use crate::output::{Report, Value};
use crate::potentials::{BarrierKind, PotentialSpec};
use crate::solver::{ConfinementSpec, GridParams, OuterRadius, RadialProblem, Wall, DEFAULT_ALPHA, DEFAULT_ORDER, DEFAULT_R_MAX};
use crate::tables::{reproduce, TableOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Energy levels for one potential, ℓ and confinement.
    Solve,
    /// Radial nodes of a free oscillator state.
    Nodes,
    /// Recompute a bundled reference table (1 to 8).
    Table,
    /// E(n, ℓ+2) - E(n+1, ℓ) across hard-sphere radii.
    Scan,
    /// Radial function and density of one state.
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Harmonic,
    Coulomb,
    Davidson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BarrierArg {
    Step,
    Plateau,
}

impl From<BarrierArg> for BarrierKind {
    fn from(b: BarrierArg) -> Self {
        match b {
            BarrierArg::Step => BarrierKind::Step,
            BarrierArg::Plateau => BarrierKind::Plateau,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn parse_outer(s: &str) -> std::result::Result<OuterRadius, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(OuterRadius::Infinite);
    }
    s.parse::<f64>()
        .map(OuterRadius::Finite)
        .map_err(|e| format!("expected a radius or `inf`: {e}"))
}

#[derive(Debug, Clone, Parser)]
#[command(name = "confined-gps", version, about = "Pseudospectral radial eigensolver for confined central potentials")]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Table number for `table`.
    pub table: Option<u8>,

    /// Flat `key = value` file; keys are flag names, plus `command` and `table`.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = PotentialKind::Harmonic)]
    pub potential: PotentialKind,

    /// Force constant for harmonic and Davidson potentials.
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,

    /// Nuclear charge for the Coulomb potential.
    #[arg(long, default_value_t = 1.0)]
    pub z: f64,

    /// Davidson coupling λ in `λ / 2r²`.
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,

    #[arg(long, default_value_t = 0)]
    pub ell: u32,

    /// State index for `nodes`, `scan` and `density`.
    #[arg(long)]
    pub n: Option<usize>,

    /// Number of levels printed by `solve`.
    #[arg(long, default_value_t = 10)]
    pub states: usize,

    /// Inner wall radius.
    #[arg(long, default_value_t = 0.0)]
    pub ra: f64,

    /// Outer wall radius, or `inf`; radii at or beyond `--r-max` count as `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_outer)]
    pub rb: OuterRadius,

    /// Turns the outer wall at `--rb` into a finite barrier of this height.
    #[arg(long)]
    pub barrier_height: Option<f64>,

    #[arg(long, value_enum, default_value_t = BarrierArg::Plateau)]
    pub barrier_kind: BarrierArg,

    /// Polynomial order N of the Lobatto grid.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,

    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,

    #[arg(long, default_value_t = DEFAULT_R_MAX)]
    pub r_max: f64,

    /// Explicit scan radii, comma separated and ascending.
    #[arg(long, value_delimiter = ',')]
    pub r_values: Vec<f64>,

    #[arg(long, default_value_t = 0.8)]
    pub r_from: f64,

    #[arg(long, default_value_t = 2.0)]
    pub r_to: f64,

    #[arg(long, default_value_t = 25)]
    pub r_steps: usize,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Decimal places for floating-point output.
    #[arg(long, default_value_t = 12)]
    pub digits: usize,
}

/// `key = value` lines turned into arguments; positional keys are returned separately.
fn config_args(path: &Path) -> Result<(Vec<OsString>, Vec<OsString>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut flags = Vec::new();
    let mut positional = vec![None, None];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_owned();
        match key.as_str() {
            "command" => positional[0] = Some(value),
            "table" => positional[1] = Some(value),
            "config" => return Err(invalid("config files cannot include other config files")),
            _ => {
                flags.push(OsString::from(format!("--{key}")));
                flags.push(OsString::from(value));
            }
        }
    }
    Ok((positional.into_iter().flatten().map(OsString::from).collect(), flags))
}

/// Parse arguments (program name first), merging any `--config` file.
pub fn parse_args<I, T>(args: I) -> std::result::Result<Cli, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let mut config: Option<PathBuf> = None;
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            config = it.next().map(PathBuf::from);
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        }
    }
    let Some(path) = config else {
        return Cli::try_parse_from(&args).map_err(CliError::Usage);
    };
    let (positional, flags) = config_args(&path).map_err(CliError::Run)?;
    let user_has_command = args
        .iter()
        .skip(1)
        .any(|a| Command::from_str(&a.to_string_lossy(), false).is_ok());
    let mut merged = vec![args[0].clone()];
    if !user_has_command {
        merged.extend(positional);
    }
    merged.extend(flags);
    merged.extend(args.into_iter().skip(1));
    Cli::try_parse_from(merged).map_err(CliError::Usage)
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Run(Error),
}

impl Cli {
    pub fn grid(&self) -> Result<GridParams> {
        let g = GridParams {
            order: self.order,
            alpha: self.alpha,
            r_max: self.r_max,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec> {
        match self.potential {
            PotentialKind::Harmonic => PotentialSpec::harmonic(self.k),
            PotentialKind::Coulomb => PotentialSpec::coulomb(self.z),
            PotentialKind::Davidson => PotentialSpec::davidson(self.k, self.lambda),
        }
    }

    pub fn confinement(&self) -> Result<ConfinementSpec> {
        let r_b = match self.rb {
            OuterRadius::Finite(r) if r >= self.r_max => OuterRadius::Infinite,
            other => other,
        };
        let conf = match self.barrier_height {
            Some(height) => {
                let OuterRadius::Finite(r_c) = r_b else {
                    return Err(invalid("a barrier needs a finite --rb inside --r-max"));
                };
                if self.ra != 0.0 {
                    return Err(invalid("a barrier requires --ra 0"));
                }
                ConfinementSpec::barrier(r_c, height, self.barrier_kind.into())
            }
            None => ConfinementSpec::shell(self.ra, r_b),
        };
        conf.validate(&self.grid()?)?;
        Ok(conf)
    }

    fn problem(&self) -> Result<RadialProblem> {
        Ok(RadialProblem::new(self.potential_spec()?, self.ell, self.confinement()?).with_grid(self.grid()?))
    }

    fn energy_unit(&self) -> (f64, &'static str) {
        match self.potential {
            PotentialKind::Coulomb => (1.0, "hartree"),
            _ => (self.k.sqrt(), "hbar_omega"),
        }
    }

    fn scan_radii(&self) -> Result<Vec<f64>> {
        if !self.r_values.is_empty() {
            return Ok(self.r_values.clone());
        }
        if self.r_steps < 2 || !(self.r_from > 0.0 && self.r_to > self.r_from) {
            return Err(invalid("scan needs 0 < --r-from < --r-to and --r-steps >= 2"));
        }
        let h = (self.r_to - self.r_from) / (self.r_steps - 1) as f64;
        Ok((0..self.r_steps).map(|i| self.r_from + h * i as f64).collect())
    }

    fn base_metadata(&self, report: &mut Report) -> Result<()> {
        let g = self.grid()?;
        report
            .meta("program", concat!("confined-gps ", env!("CARGO_PKG_VERSION")))
            .meta("command", format!("{:?}", self.command).to_lowercase())
            .meta("grid", json!({"order": g.order, "alpha": g.alpha, "r_max": g.r_max}))
            .meta("digits", self.digits);
        Ok(())
    }

    fn potential_metadata(&self, report: &mut Report) -> Result<()> {
        report.meta("potential", serde_json::to_value(self.potential_spec()?.core)?);
        Ok(())
    }

    /// Build the output table for this invocation.
    pub fn execute(&self) -> Result<Report> {
        let mut report = match self.command {
            Command::Solve => self.run_solve()?,
            Command::Nodes => self.run_nodes()?,
            Command::Table => self.run_table()?,
            Command::Scan => self.run_scan()?,
            Command::Density => self.run_density()?,
        };
        self.base_metadata(&mut report)?;
        Ok(report)
    }

    fn run_solve(&self) -> Result<Report> {
        let prob = self.problem()?;
        let sol = prob.solve()?;
        let (scale, unit) = self.energy_unit();
        let grid = prob.grid;
        let r_b = match prob.confinement.wall {
            Wall::Impenetrable => prob.confinement.r_b.resolve(&grid),
            Wall::FiniteBarrier { .. } => grid.r_max,
        };
        let mut report = Report::new(&["n", "ell", "r_a [bohr]", "r_b [bohr]", "energy", "unit"]);
        self.potential_metadata(&mut report)?;
        if let Some(b) = sol.spectrum.provenance.potential.barrier {
            report.meta("barrier", serde_json::to_value(b)?);
        }
        for (n, e) in sol.spectrum.eigenvalues.iter().take(self.states).enumerate() {
            report.push(vec![
                n.into(),
                self.ell.into(),
                prob.confinement.r_a.into(),
                r_b.into(),
                (e / scale).into(),
                unit.into(),
            ])?;
        }
        Ok(report)
    }

    fn run_nodes(&self) -> Result<Report> {
        let n = self.n.ok_or_else(|| invalid("nodes needs --n"))?;
        if n == 0 {
            return Err(invalid("the n = 0 state has no radial nodes; need --n >= 1"));
        }
        let ell_eff = match self.potential {
            PotentialKind::Harmonic => f64::from(self.ell),
            PotentialKind::Davidson => effective_ell(self.ell, self.lambda),
            PotentialKind::Coulomb => return Err(invalid("nodes supports harmonic and davidson potentials")),
        };
        self.potential_spec()?;
        let nodes = oscillator_nodes(n, ell_eff, self.k)?;
        let mut report = Report::new(&["n", "ell", "node", "r_node [bohr]", "unit"]);
        self.potential_metadata(&mut report)?;
        for (i, r) in nodes.into_iter().enumerate() {
            report.push(vec![n.into(), self.ell.into(), (i + 1).into(), r.into(), "bohr".into()])?;
        }
        Ok(report)
    }

    fn run_table(&self) -> Result<Report> {
        let id = self.table.ok_or_else(|| invalid("table needs a table number, e.g. `table 1`"))?;
        let t = reproduce(
            id,
            TableOptions {
                grid: self.grid()?,
                barrier_kind: self.barrier_kind.into(),
            },
        )?;
        let mut columns: Vec<&str> = t.key_columns.iter().map(String::as_str).collect();
        columns.extend(["quantity", "unit", "reference", "computed", "deviation", "tolerance", "within_tolerance", "excluded"]);
        let mut report = Report::new(&columns);
        report
            .meta("table", t.table)
            .meta("title", t.title.as_str())
            .meta("max_abs_deviation", t.max_abs_deviation())
            .meta("failures", t.failures().count());
        if id == 8 {
            report.meta("barrier_kind", format!("{:?}", self.barrier_kind).to_lowercase());
        }
        for row in t.rows {
            let mut cells: Vec<Value> = row.keys.iter().cloned().map(Value::from).collect();
            cells.extend([
                Value::Text(row.quantity.clone()),
                row.unit.as_str().into(),
                row.reference.into(),
                row.computed.into(),
                row.deviation().into(),
                row.tolerance.into(),
                row.within_tolerance().into(),
                row.excluded.into(),
            ]);
            report.push(cells)?;
        }
        Ok(report)
    }

    fn run_scan(&self) -> Result<Report> {
        if self.potential != PotentialKind::Harmonic || self.k != 1.0 {
            return Err(invalid("scan is defined for the harmonic potential with k = 1"));
        }
        let n = self.n.unwrap_or(1);
        let radii = self.scan_radii()?;
        let rows = delta_e_scan(self.ell, n, &radii, self.grid()?)?;
        let mut report = Report::new(&["n", "ell", "r_c [bohr]", "delta_e", "unit"]);
        report.meta(
            "delta_e",
            format!("E({n},{}) - E({},{})", self.ell + 2, n + 1, self.ell),
        );
        for (r, d) in rows {
            report.push(vec![n.into(), self.ell.into(), r.into(), d.into(), "hbar_omega".into()])?;
        }
        Ok(report)
    }

    fn run_density(&self) -> Result<Report> {
        let n = self.n.unwrap_or(0);
        let prob = self.problem()?;
        let sol = prob.solve_with_vectors()?;
        let samples = sol.wavefunction(n)?;
        let (scale, unit) = self.energy_unit();
        let energy = sol.spectrum.energy(n).ok_or_else(|| invalid("state out of range"))? / scale;
        let mut report = Report::new(&["r [bohr]", "u", "radial_density"]);
        self.potential_metadata(&mut report)?;
        report
            .meta("state", json!({"n": n, "ell": self.ell}))
            .meta("energy", json!({"value": energy, "unit": unit}))
            .meta("u", "r R(r), normalized so that the integral of u^2 dr is 1")
            .meta("radial_density", "4 pi r^2 |psi|^2 = u^2");
        for s in samples {
            report.push(vec![s.r.into(), s.psi.into(), s.density.into()])?;
        }
        Ok(report)
    }

    /// Run and write the output; returns the rendered text.
    pub fn run(&self) -> Result<String> {
        let report = self.execute()?;
        let text = match self.format {
            Format::Csv => report.to_csv(self.digits)?,
            Format::Json => report.to_json(self.digits)?,
        };
        if let Some(path) = &self.output {
            fs::write(path, &text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(text)
    }
}
