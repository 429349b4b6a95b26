//! Tables for CSV/JSON emission. Reals are written with 17 significant
//! digits so that reading a file back reproduces the values exactly.

use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
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

/// 17 significant digits in exponent form; non-finite values as `NaN`,
/// `inf`, `-inf`.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) if v.is_finite() => format_real(*v),
            Cell::Real(_) => "null".into(),
            Cell::Text(s) => Value::String(s.clone()).to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

/// A table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), got: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Evaluation(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv_text)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Evaluation(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Evaluation(e.to_string()))
    }

    /// `{"columns": [...], "rows": [[...], ...]}`, one row per line.
    pub fn to_json(&self) -> String {
        let cols = Value::from(self.columns.clone()).to_string();
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(Cell::json_text).collect::<Vec<_>>().join(",")))
            .collect();
        if rows.is_empty() {
            format!("{{\"columns\":{cols},\"rows\":[]}}\n")
        } else {
            format!("{{\"columns\":{cols},\"rows\":[\n{}\n]}}\n", rows.join(",\n"))
        }
    }

    pub fn render(&self, format: TableFormat) -> Result<String> {
        match format {
            TableFormat::Csv => self.to_csv(),
            TableFormat::Json => Ok(self.to_json()),
        }
    }

    /// Reads a CSV file written by [`Table::to_csv`]; cells come back as
    /// integers, reals, booleans or text by their spelling.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let io = |e: csv::Error| Error::Parse(format!("csv: {e}"));
        let columns = r.headers().map_err(io)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec.map_err(io)?.iter().map(parse_cell).collect());
        }
        Ok(Self { columns, rows })
    }
}

fn parse_cell(s: &str) -> Cell {
    if let Ok(v) = s.parse::<i128>() {
        return Cell::Int(v);
    }
    match s {
        "true" => return Cell::Bool(true),
        "false" => return Cell::Bool(false),
        _ => {}
    }
    match s.parse::<f64>() {
        Ok(v) => Cell::Real(v),
        Err(_) => Cell::Text(s.to_string()),
    }
}

/// Writes `contents` to `path` through a sibling temporary file, so a failed
/// run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Evaluation(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

pub fn emit_table(table: &Table, format: TableFormat, path: &Path) -> Result<()> {
    write_atomic(path, &table.render(format)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new(&["n", "value", "label", "ok"]);
        let x = 0.1 + 0.2;
        t.push(vec![3u64.into(), x.into(), "a,b".into(), true.into()]).unwrap();
        t.push(vec![(-4i64).into(), (1.0 / 3.0).into(), "plain".into(), false.into()]).unwrap();
        let back = Table::from_csv(&t.to_csv().unwrap()).unwrap();
        assert_eq!(back, t);
        assert!(t.push(vec![1u64.into()]).is_err());
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["q", "max_abs"]);
        assert_eq!(t.to_csv().unwrap(), "q,max_abs\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"], Value::Array(vec![]));
    }

    #[test]
    fn json_reals_round_trip() {
        let mut t = Table::new(&["x"]);
        t.push(vec![std::f64::consts::PI.into()]).unwrap();
        t.push(vec![f64::NAN.into()]).unwrap();
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0][0].as_f64().unwrap(), std::f64::consts::PI);
        assert!(v["rows"][1][0].is_null());
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
    }
}
