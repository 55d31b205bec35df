//! Column-oriented result tables with CSV output and a JSON provenance sidecar.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: &'static str,
    /// Empty for dimensionless or textual columns.
    pub unit: &'static str,
}

impl Column {
    pub fn header(&self) -> String {
        if self.unit.is_empty() {
            self.name.to_string()
        } else {
            format!("{} [{}]", self.name, self.unit)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl Cell {
    /// Floats use the shortest round-tripping exponent form so tables are
    /// byte-reproducible.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => format!("{v:e}"),
            Cell::Float(_) | Cell::Missing => String::new(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) if v.is_finite() => Some(*v),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
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

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    /// Fits and counts derived from the rows; goes to the sidecar.
    pub summary: Map<String, Json>,
}

impl ResultTable {
    pub fn new(name: impl Into<String>, columns: &[(&'static str, &'static str)]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|&(name, unit)| Column { name, unit }).collect(),
            rows: Vec::new(),
            summary: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of a numeric column; non-numeric cells come back as `None`.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.summary
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Json::Null));
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidConfig(format!("csv: {e}"));
        w.write_record(self.columns.iter().map(Column::header)).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidConfig(format!("csv: {e}")))
    }

    pub fn sidecar(&self, config: &impl Serialize, kind: &str) -> Json {
        let wall = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        json!({
            "table": self.name,
            "experiment": kind,
            "columns": self.columns.iter().map(|c| json!({"name": c.name, "unit": c.unit})).collect::<Vec<_>>(),
            "rows": self.rows.len(),
            "summary": self.summary,
            "config": config,
            "library": {"name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION")},
            "generated_unix_s": wall,
        })
    }
}

/// Writes `<name>.csv` and `<name>.json` for every table; returns the CSV paths.
pub fn write_tables(dir: &Path, tables: &[ResultTable], config: &impl Serialize, kind: &str) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for t in tables {
        let csv_path = dir.join(format!("{}.csv", t.name));
        let csv = t.to_csv().map_err(|e| std::io::Error::other(e.to_string()))?;
        std::fs::write(&csv_path, csv)?;
        let side = serde_json::to_string_pretty(&t.sidecar(config, kind)).map_err(std::io::Error::other)?;
        std::fs::write(dir.join(format!("{}.json", t.name)), side + "\n")?;
        written.push(csv_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_units_and_quoting() {
        let mut t = ResultTable::new("t", &[("n_atoms", ""), ("rate", "Gamma_1D"), ("status", "")]);
        t.push(vec![3usize.into(), 1.5e-3.into(), "a, b".into()]);
        t.push(vec![4usize.into(), Cell::Missing, "ok".into()]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv, "n_atoms,rate [Gamma_1D],status\n3,1.5e-3,\"a, b\"\n4,,ok\n");
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6.02e23, -2.5e-300] {
            let s = Cell::Float(v).render();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sidecar_carries_provenance() {
        let mut t = ResultTable::new("t", &[("x", "lambda")]);
        t.note("exponent", 3.0);
        let j = t.sidecar(&json!({"a": 1}), "shift");
        assert_eq!(j["summary"]["exponent"], 3.0);
        assert_eq!(j["columns"][0]["unit"], "lambda");
        assert_eq!(j["config"]["a"], 1);
    }
}
