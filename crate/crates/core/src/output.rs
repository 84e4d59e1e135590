//! Tables rendered as CSV, aligned text or a versioned JSON envelope.
//!
//! CSV numbers carry 30 significant digits, JSON numbers the full working
//! precision as decimal strings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::QcError;
use crate::numerics::HPReal;

pub const SCHEMA_VERSION: &str = "1.0";
pub const CSV_DIGITS: usize = 30;
const TEXT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Text,
}

impl FromStr for Format {
    type Err = QcError;
    fn from_str(s: &str) -> Result<Self, QcError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            other => Err(QcError::Parse(format!("unknown output format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Text => "text",
        })
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(HPReal),
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<HPReal> for Cell {
    fn from(v: HPReal) -> Self {
        Cell::Num(v)
    }
}
impl From<&HPReal> for Cell {
    fn from(v: &HPReal) -> Self {
        Cell::Num(v.clone())
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
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
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
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn render(&self, digits: usize) -> String {
        match self {
            Cell::Num(v) => v.to_sci_string(digits),
            Cell::Float(v) => format!("{v}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => Value::String(v.to_full_string()),
            Cell::Float(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Number formatted for CSV output.
pub fn csv_number(v: &HPReal) -> String {
    v.to_sci_string(CSV_DIGITS)
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| csv_escape(&c.render(CSV_DIGITS))).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| c.render(TEXT_DIGITS)).collect()).collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let fmt_row = |row: &[String]| {
            let parts: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = fmt_row(&self.columns);
        out.push('\n');
        for row in &cells {
            out.push_str(&fmt_row(row));
            out.push('\n');
        }
        out
    }

    pub fn json_rows(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
                Value::Object(obj)
            })
            .collect()
    }
}

/// `{schema_version, config, header?, rows}`.
pub fn envelope(config: Value, header: Option<Value>, rows: Vec<Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
    obj.insert("config".into(), config);
    if let Some(h) = header {
        obj.insert("header".into(), h);
    }
    obj.insert("rows".into(), Value::Array(rows));
    Value::Object(obj)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;

    fn table() -> Table {
        let mut t = Table::new(["a", "b", "note"]);
        t.push(vec![HPReal::lit("0.5", Precision::default()).into(), true.into(), "x, y".into()]);
        t.push(vec![Cell::Empty, false.into(), "plain".into()]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = table().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "a,b,note");
        assert!(lines[1].starts_with("5.00000000000000000000000000000e-1,true,\"x, y\""));
        assert_eq!(lines[2], ",false,plain");
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }

    #[test]
    fn csv_number_has_thirty_digits() {
        let third = HPReal::one(Precision::default()) / 3;
        let s = csv_number(&third);
        let digits = s.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
        assert_eq!(digits, 30);
    }

    #[test]
    fn json_rows_keep_full_precision() {
        let rows = table().json_rows();
        let a = rows[0]["a"].as_str().unwrap();
        assert_eq!(a.split('e').next().unwrap().len(), 81);
        assert!(rows[1]["a"].is_null());
        let env = envelope(json!({}), None, rows);
        assert_eq!(env["schema_version"], SCHEMA_VERSION);
    }

    #[test]
    fn text_is_aligned() {
        let t = table().to_text();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0].find('b'), lines[1].find("true"));
    }

    #[test]
    fn format_names() {
        for f in [Format::Csv, Format::Json, Format::Text] {
            assert_eq!(f.to_string().parse::<Format>().unwrap(), f);
        }
        assert!("xml".parse::<Format>().is_err());
    }
}
