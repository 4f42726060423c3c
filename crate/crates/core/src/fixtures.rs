//! Published reference tables bundled with the crate as CSV.

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};

const TABLE1: &str = include_str!("../data/table1.csv");
const TABLE2: &str = include_str!("../data/table2.csv");
const TABLE3: &str = include_str!("../data/table3.csv");
const TABLE4: &str = include_str!("../data/table4.csv");
const TABLE5: &str = include_str!("../data/table5.csv");
const TABLE6: &str = include_str!("../data/table6.csv");
const TABLE7: &str = include_str!("../data/table7.csv");
const TABLE8: &str = include_str!("../data/table8.csv");

#[derive(Debug, Clone, Deserialize)]
pub struct ConfinedLevel {
    pub n: usize,
    pub ell: u32,
    pub label: String,
    pub r_c: f64,
    pub energy: f64,
    /// Independent earlier estimate printed alongside.
    pub independent: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NodeRow {
    pub n: usize,
    pub ell: u32,
    pub label: String,
    pub node1: Option<f64>,
    pub node2: Option<f64>,
    pub node3: Option<f64>,
}

impl NodeRow {
    pub fn nodes(&self) -> Vec<f64> {
        [self.node1, self.node2, self.node3].into_iter().flatten().collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct IncidentalRow {
    pub n: usize,
    pub ell: u32,
    pub r_a: f64,
    pub r_b: f64,
    pub free_n: Option<usize>,
    pub energy: f64,
    #[serde(deserialize_with = "flag")]
    pub starred: bool,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PairRow {
    pub n: usize,
    pub ell: u32,
    pub r_b: f64,
    pub first: f64,
    pub second: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DavidsonRowKind {
    Ground,
    Pair,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DavidsonFixture {
    pub kind: DavidsonRowKind,
    pub n: usize,
    pub free_energy: f64,
    pub r_c: f64,
    pub s_energy: f64,
    pub d_energy: Option<f64>,
    pub delta: Option<f64>,
    pub delta_delta: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BarrierRow {
    pub n: usize,
    pub v_c: f64,
    pub printed_v_c: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    #[serde(default)]
    pub excluded: Option<String>,
}

/// Printed barrier radii, in the column order `e1`, `e2`, `e3`.
pub const BARRIER_RADII: [f64; 3] = [1.22511, 1.99975, 4.00052];

impl BarrierRow {
    pub fn energies(&self) -> [f64; 3] {
        [self.e1, self.e2, self.e3]
    }

    pub fn is_excluded(&self, column: usize) -> bool {
        let name = format!("e{}", column + 1);
        self.excluded
            .as_deref()
            .is_some_and(|s| s.split(';').any(|c| c.trim() == name))
    }
}

fn flag<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<bool, D::Error> {
    match u8::deserialize(d)? {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(serde::de::Error::custom(format!("expected 0 or 1, got {other}"))),
    }
}

fn parse<T: DeserializeOwned>(name: &str, text: &str) -> Result<Vec<T>> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Fixture(format!("{name}: {e}")))
}

pub fn table1() -> Result<Vec<ConfinedLevel>> {
    parse("table1", TABLE1)
}

pub fn table2() -> Result<Vec<ConfinedLevel>> {
    parse("table2", TABLE2)
}

pub fn table3() -> Result<Vec<NodeRow>> {
    parse("table3", TABLE3)
}

pub fn table4() -> Result<Vec<IncidentalRow>> {
    parse("table4", TABLE4)
}

pub fn table5() -> Result<Vec<IncidentalRow>> {
    parse("table5", TABLE5)
}

pub fn table6() -> Result<Vec<PairRow>> {
    parse("table6", TABLE6)
}

pub fn table7() -> Result<Vec<DavidsonFixture>> {
    parse("table7", TABLE7)
}

pub fn table8() -> Result<Vec<BarrierRow>> {
    parse("table8", TABLE8)
}
