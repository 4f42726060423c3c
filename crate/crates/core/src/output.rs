//! Row tables rendered as CSV or JSON with a fixed number of decimal places.

use serde_json::{Map, Value as Json};

use crate::error::{invalid, Result};

/// Largest accepted `digits`; beyond this `f64` has nothing left to show.
pub const MAX_DIGITS: usize = 17;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<crate::tables::Cell> for Value {
    fn from(c: crate::tables::Cell) -> Self {
        use crate::tables::Cell;
        match c {
            Cell::Int(i) => Value::Int(i),
            Cell::Float(f) => Value::Float(f),
            Cell::Text(s) => Value::Text(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v.into())
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub metadata: Map<String, Json>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

fn format_float(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.digits$}");
    // Avoid "-0.000" for values that round to zero.
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_owned()
    } else {
        s
    }
}

/// `v` rounded to `digits` decimal places, as the nearest `f64`.
pub fn round_to(v: f64, digits: usize) -> f64 {
    if v.is_finite() {
        format_float(v, digits).parse().unwrap_or(v)
    } else {
        v
    }
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Map::new(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Json>) -> &mut Self {
        self.metadata.insert(key.to_owned(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Value>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(invalid(format!("row has {} cells for {} columns", row.len(), self.columns.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    fn check_digits(digits: usize) -> Result<()> {
        if digits > MAX_DIGITS {
            return Err(invalid(format!("digits must be <= {MAX_DIGITS}, got {digits}")));
        }
        Ok(())
    }

    /// RFC 4180 CSV: one header row, then the data rows.
    pub fn to_csv(&self, digits: usize) -> Result<String> {
        Self::check_digits(digits)?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Value::Int(i) => i.to_string(),
                Value::Float(f) => format_float(*f, digits),
                Value::Text(s) => s.clone(),
                Value::Bool(b) => b.to_string(),
                Value::Null => String::new(),
            }))?;
        }
        let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| invalid(e.to_string()))
    }

    /// One object: `metadata`, `columns`, and `rows` as objects keyed by column.
    pub fn to_json(&self, digits: usize) -> Result<String> {
        Self::check_digits(digits)?;
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| {
                        let j = match v {
                            Value::Int(i) => Json::from(*i),
                            Value::Float(f) => serde_json::Number::from_f64(round_to(*f, digits))
                                .map_or(Json::Null, Json::Number),
                            Value::Text(s) => Json::from(s.as_str()),
                            Value::Bool(b) => Json::from(*b),
                            Value::Null => Json::Null,
                        };
                        (c.clone(), j)
                    })
                    .collect();
                Json::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("metadata".into(), Json::Object(self.metadata.clone()));
        top.insert("columns".into(), Json::from(self.columns.clone()));
        top.insert("rows".into(), Json::Array(rows));
        let mut s = serde_json::to_string_pretty(&Json::Object(top))?;
        s.push('\n');
        Ok(s)
    }
}
