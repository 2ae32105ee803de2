//! Report records and their CSV/JSON rendering.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::error::CliError;

/// Significant digits kept for every floating value.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
    /// Structured value, compact JSON inside CSV.
    Json(Value),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl From<&[i64]> for Cell {
    fn from(v: &[i64]) -> Self {
        Cell::Json(Value::from(v.to_vec()))
    }
}

/// One output row; CSV keeps insertion order, JSON sorts the keys.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record(pub Vec<(String, Cell)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    fn keys(&self) -> Vec<&str> {
        self.0.iter().map(|(k, _)| k.as_str()).collect()
    }
}

/// Rows of one command plus the number of failed checks among them.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub rows: Vec<Record>,
    pub failed: usize,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), rows: Vec::new(), failed: 0 }
    }

    pub fn push(&mut self, row: Record) {
        self.rows.push(row);
    }

    /// Appends a check row with a `pass` column, counting failures.
    pub fn push_check(&mut self, row: Record, pass: bool) {
        if !pass {
            self.failed += 1;
        }
        self.rows.push(row.with("pass", pass));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    /// CSV rows without the header line.
    Row,
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest text of the rounded value; positional for moderate magnitudes.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_significant(x);
    if r == 0.0 {
        return "0".into();
    }
    if (1e-6..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn csv_text(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => format_float(*v),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
        Cell::Null => String::new(),
        Cell::Json(v) => v.to_string(),
    }
}

fn json_value(cell: &Cell) -> Value {
    match cell {
        Cell::Int(v) => match i64::try_from(*v) {
            Ok(v) => Value::from(v),
            Err(_) => Value::String(v.to_string()),
        },
        Cell::Float(v) => Number::from_f64(round_significant(*v)).map_or_else(|| Value::String(format_float(*v)), Value::Number),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Null => Value::Null,
        Cell::Json(v) => v.clone(),
    }
}

/// Renders the report; fails on empty results or ragged rows.
pub fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    let Some(first) = report.rows.first() else {
        return Err(CliError::failure(format!("{}: no results to report", report.command)));
    };
    let header = first.keys();
    if let Some(bad) = report.rows.iter().find(|r| r.keys() != header) {
        return Err(CliError::failure(format!("{}: row columns {:?} differ from {:?}", report.command, bad.keys(), header)));
    }
    match format {
        Format::Csv | Format::Row => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            let io = |e: csv::Error| CliError::failure(format!("csv: {e}"));
            if format == Format::Csv {
                w.write_record(&header).map_err(io)?;
            }
            for row in &report.rows {
                w.write_record(row.0.iter().map(|(_, c)| csv_text(c))).map_err(io)?;
            }
            w.into_inner().map_err(|e| CliError::failure(format!("csv: {e}")))
        }
        Format::Json => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| Value::Object(r.0.iter().map(|(k, c)| (k.clone(), json_value(c))).collect::<Map<_, _>>()))
                .collect();
            let mut top = Map::new();
            top.insert("command".into(), Value::String(report.command.clone()));
            top.insert("failed".into(), Value::from(report.failed));
            top.insert("rows".into(), Value::Array(rows));
            let mut bytes = serde_json::to_vec_pretty(&Value::Object(top)).map_err(|e| CliError::failure(format!("json: {e}")))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let bytes = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, &bytes).map_err(|e| CliError::failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes).and_then(|_| out.flush()).map_err(|e| CliError::failure(format!("stdout: {e}")))
        }
    }
}
