//! Rectangular result tables with enough metadata to rerun them.

use std::collections::BTreeMap;

use condenlab::exact::{self, Exact};
use rust_decimal::prelude::ToPrimitive;
use rust_decimal::Decimal;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
    /// Exact decimal, written as its shortest decimal string.
    Dec(Decimal),
    /// Exact rational, written as `p/q` (or `p` when whole).
    Ratio(Exact),
}

impl Cell {
    /// Value for plotting; text and flags have none.
    pub fn numeric(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Num(v) => Some(*v),
            Cell::Dec(v) => v.to_f64(),
            Cell::Ratio(v) => Some(exact::to_f64(v)),
            Cell::Bool(_) | Cell::Text(_) => None,
        }
    }

    /// Text written into a CSV cell. Floats use the shortest string that
    /// reads back to the same value.
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Dec(v) => v.normalize().to_string(),
            Cell::Ratio(v) => v.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(_) | Cell::Dec(_) | Cell::Ratio(_) => Value::String(self.to_csv()),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(i64::try_from(v).unwrap_or(i64::MAX))
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::from(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Decimal> for Cell {
    fn from(v: Decimal) -> Self {
        Cell::Dec(v)
    }
}

impl From<Exact> for Cell {
    fn from(v: Exact) -> Self {
        Cell::Ratio(v)
    }
}

impl From<&Exact> for Cell {
    fn from(v: &Exact) -> Self {
        Cell::Ratio(v.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub scenario: String,
    pub seed: u64,
    pub params: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<String>,
    pub tool_version: String,
    /// Headline results that do not fit the table.
    pub summary: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    pub metadata: Metadata,
}

impl Trajectory {
    pub fn new(columns: &[&str], metadata: Metadata) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn with_columns(columns: Vec<String>, metadata: Metadata) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            metadata,
        }
    }

    /// Appends a row.
    ///
    /// # Panics
    /// If the row length differs from the column count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match {} columns",
            self.columns.len()
        );
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.summary.insert(key.to_string(), value.into());
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": self
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_render_exactly() {
        assert_eq!(Cell::Num(0.1).to_csv(), "0.1");
        assert_eq!(Cell::Num(1e-20).to_csv().parse::<f64>().unwrap(), 1e-20);
        assert_eq!(Cell::Dec(Decimal::new(3000, 4)).to_csv(), "0.3");
        assert_eq!(Cell::Ratio(exact::ratio(4, 3)).to_csv(), "4/3");
        assert_eq!(Cell::Ratio(exact::int(2)).to_csv(), "2");
        assert_eq!(Cell::Num(f64::NAN).to_json(), Value::Null);
    }
}
