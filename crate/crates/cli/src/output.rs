//! Row-at-a-time table output. Every row is flushed as soon as it is
//! written, so an interrupted scan leaves a usable prefix.

use crate::config::Format;
use serde_json::Value;
use std::io::{self, Write};

/// One cell. Floats are written in shortest round-trip form, so equal inputs
/// give byte-identical files.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // JSON has no NaN; failed cells become null.
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

pub struct Table<W: Write> {
    out: W,
    format: Format,
    columns: Vec<&'static str>,
    rows: usize,
}

impl<W: Write> Table<W> {
    pub fn new(mut out: W, format: Format, columns: &[&'static str]) -> io::Result<Self> {
        if format == Format::Json {
            out.write_all(b"[")?;
            out.flush()?;
        }
        let mut table = Table { out, format, columns: columns.to_vec(), rows: 0 };
        if format == Format::Csv {
            table.write_csv_record(columns.iter().map(|c| c.to_string()).collect())?;
        }
        Ok(table)
    }

    fn write_csv_record(&mut self, fields: Vec<String>) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&fields)?;
        let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
        self.out.write_all(&bytes)?;
        self.out.flush()
    }

    pub fn row(&mut self, cells: Vec<Cell>) -> io::Result<()> {
        assert_eq!(cells.len(), self.columns.len(), "row width does not match the header");
        match self.format {
            Format::Csv => self.write_csv_record(cells.iter().map(Cell::csv).collect())?,
            Format::Json => {
                let fields: Vec<String> = self
                    .columns
                    .iter()
                    .zip(&cells)
                    .map(|(k, v)| format!("{}:{}", Value::String(k.to_string()), v.json()))
                    .collect();
                let sep = if self.rows == 0 { "\n" } else { ",\n" };
                write!(self.out, "{sep}{{{}}}", fields.join(","))?;
                self.out.flush()?;
            }
        }
        self.rows += 1;
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<W> {
        if self.format == Format::Json {
            self.out.write_all(if self.rows == 0 { b"]\n" } else { b"\n]\n" })?;
        }
        self.out.flush()?;
        Ok(self.out)
    }
}
