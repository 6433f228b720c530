//! Report values and their table, JSON and CSV renderings.
//!
//! Rendering is deterministic: fields keep their insertion order and reals
//! are printed with 9 significant digits.

use std::fmt::Write as _;
use std::str::FromStr;

use augtor::growth::format_real;
use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

/// Output format selected by `--format`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!(
                "unknown format `{other}` (expected table, json or csv)"
            )),
        }
    }
}

/// One value in a report.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Real(f64),
    Text(String),
    Bool(bool),
    List(Vec<Cell>),
    Null,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<BigInt> for Cell {
    fn from(v: BigInt) -> Self {
        Cell::Int(v)
    }
}

impl From<&BigInt> for Cell {
    fn from(v: &BigInt) -> Self {
        Cell::Int(v.clone())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(n) => {
                Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
            }
            Cell::Real(x) if x.is_finite() => {
                Value::Number(Number::from_str(&format_real(*x)).expect("real literal"))
            }
            Cell::Real(_) | Cell::Null => Value::Null,
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::List(v) => Value::Array(v.iter().map(Cell::to_json).collect()),
        }
    }

    fn to_text(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Real(x) => format_real(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::List(v) => v.iter().map(Cell::to_text).collect::<Vec<_>>().join(","),
            Cell::Null => "-".into(),
        }
    }

    fn to_csv(&self) -> String {
        let s = match self {
            Cell::Null => String::new(),
            Cell::List(v) => v.iter().map(Cell::to_text).collect::<Vec<_>>().join(" "),
            other => other.to_text(),
        };
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s
        }
    }
}

/// A command's result: summary fields followed by a table of rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Append a summary field.
    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    /// Append a row; its length must match the column count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Index of a named column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.to_table(),
            Format::Json => self.to_json_string(),
            Format::Csv => self.to_csv(),
        }
    }

    /// JSON object with `command`, the summary fields and a `rows` array.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::String(self.command.clone()));
        for (k, v) in &self.meta {
            obj.insert(k.clone(), v.to_json());
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut r = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    r.insert(c.clone(), v.to_json());
                }
                Value::Object(r)
            })
            .collect();
        obj.insert("rows".into(), Value::Array(rows));
        Value::Object(obj)
    }

    fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    /// Header line then one line per row; summary fields are omitted.
    fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_csv).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    fn to_table(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "{k}: {}", v.to_text());
        }
        if self.rows.is_empty() {
            return s;
        }
        if !self.meta.is_empty() {
            s.push('\n');
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::to_text).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([self.columns[j].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        // Text columns are left-aligned, everything else right-aligned.
        let left: Vec<bool> = self.rows[0]
            .iter()
            .map(|c| matches!(c, Cell::Text(_)))
            .collect();
        let line = |items: &[String]| {
            let padded: Vec<String> = items
                .iter()
                .zip(&widths)
                .zip(&left)
                .map(|((c, w), &l)| {
                    if l {
                        format!("{c:<w$}")
                    } else {
                        format!("{c:>w$}")
                    }
                })
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let _ = writeln!(s, "{}", line(&self.columns));
        for r in &cells {
            let _ = writeln!(s, "{}", line(r));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("torsion", &["r", "betti", "torsion", "method"]);
        r.meta("poly", "t^2-3t+1");
        r.push(vec![
            1u64.into(),
            0u64.into(),
            BigInt::from(1).into(),
            "extended".into(),
        ]);
        r.push(vec![
            2u64.into(),
            0u64.into(),
            BigInt::from(5).into(),
            "extended".into(),
        ]);
        r
    }

    #[test]
    fn csv_layout() {
        assert_eq!(
            sample().render(Format::Csv),
            "r,betti,torsion,method\n1,0,1,extended\n2,0,5,extended\n"
        );
    }

    #[test]
    fn json_keeps_field_order_and_big_integers() {
        let mut r = sample();
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        r.push(vec![3u64.into(), 0u64.into(), big.into(), "snf".into()]);
        let s = r.render(Format::Json);
        assert!(s.find("\"command\"").unwrap() < s.find("\"poly\"").unwrap());
        assert!(s.find("\"betti\":").unwrap() < s.find("\"torsion\":").unwrap());
        assert!(s.contains("\"torsion\": 123456789012345678901234567890"));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["rows"][1]["method"], "extended");
    }

    #[test]
    fn reals_and_nulls() {
        let mut r = Report::new("growth", &["r", "sample"]);
        r.push(vec![1u64.into(), std::f64::consts::PI.into()]);
        r.push(vec![2u64.into(), Cell::Null]);
        assert!(r.render(Format::Json).contains("\"sample\": 3.14159265"));
        assert_eq!(r.render(Format::Csv), "r,sample\n1,3.14159265\n2,\n");
    }

    #[test]
    fn csv_quotes_separators() {
        let mut r = Report::new("catalog", &["name", "provenance"]);
        r.push(vec!["x".into(), "a, \"b\"".into()]);
        assert_eq!(
            r.render(Format::Csv),
            "name,provenance\nx,\"a, \"\"b\"\"\"\n"
        );
    }

    #[test]
    fn table_aligns_columns() {
        let t = sample().render(Format::Table);
        assert_eq!(
            t,
            "poly: t^2-3t+1\n\nr  betti  torsion  method\n1      0        1  extended\n2      0        5  extended\n"
        );
    }
}
