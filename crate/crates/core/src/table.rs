//! Tabular output in CSV or JSON.
//!
//! Floats are written with 17 significant digits so every value parses back to
//! the same `f64`. CSV is comma-separated with a header row and LF endings;
//! JSON is an array of objects keyed by the header names.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::domain(format!("unknown output format {other:?}"))),
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Seventeen significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_owned()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{v:.16e}")
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => f.write_str(&format_number(*v)),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; panics if its width differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.header.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn cell(&self, row: usize, name: &str) -> Option<&Cell> {
        self.rows.get(row)?.get(self.column(name)?)
    }

    pub fn num(&self, row: usize, name: &str) -> Option<f64> {
        match self.cell(row, name)? {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| csv_field(&c.to_string())).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (name, cell)) in self.header.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let value = match cell {
                    Cell::Num(v) if v.is_finite() => format_number(*v),
                    Cell::Int(v) => v.to_string(),
                    Cell::Empty => "null".to_owned(),
                    other => Value::String(other.to_string()).to_string(),
                };
                let _ = write!(out, "{}: {value}", Value::String(name.clone()));
            }
            out.push('}');
        }
        out.push_str(if self.rows.is_empty() { "]\n" } else { "\n]\n" });
        out
    }

    /// Parses the output of [`to_csv`](Self::to_csv).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::domain("empty CSV"))?
            .split(',')
            .map(str::to_owned)
            .collect::<Vec<_>>();
        let mut table = OutputTable::new(header);
        for line in lines {
            let row: Vec<Cell> = split_csv_line(line)
                .into_iter()
                .map(|f| parse_cell(&f))
                .collect();
            if row.len() != table.header.len() {
                return Err(Error::domain(format!("CSV row has {} fields", row.len())));
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    /// Parses the output of [`to_json`](Self::to_json).
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::domain(format!("bad JSON: {e}")))?;
        let rows = value
            .as_array()
            .ok_or_else(|| Error::domain("JSON table must be an array"))?;
        let mut table = OutputTable::default();
        for (i, obj) in rows.iter().enumerate() {
            let obj = obj
                .as_object()
                .ok_or_else(|| Error::domain("JSON rows must be objects"))?;
            if i == 0 {
                table.header = obj.keys().cloned().collect();
            }
            let row = table
                .header
                .iter()
                .map(|k| match obj.get(k) {
                    Some(Value::Number(n)) => Ok(match n.as_i64() {
                        Some(i) => Cell::Int(i),
                        None => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
                    }),
                    Some(Value::String(s)) => Ok(parse_cell(s)),
                    Some(Value::Null) => Ok(Cell::Empty),
                    _ => Err(Error::domain(format!("JSON row {i} lacks column {k:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            table.rows.push(row);
        }
        Ok(table)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

fn parse_cell(s: &str) -> Cell {
    if s.is_empty() {
        Cell::Empty
    } else if let Ok(i) = s.parse::<i64>() {
        Cell::Int(i)
    } else if let Ok(v) = s.parse::<f64>() {
        Cell::Num(v)
    } else {
        match s {
            "NaN" => Cell::Num(f64::NAN),
            "inf" => Cell::Num(f64::INFINITY),
            "-inf" => Cell::Num(f64::NEG_INFINITY),
            _ => Cell::Text(s.to_owned()),
        }
    }
}
