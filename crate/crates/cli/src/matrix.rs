//! Presentation matrices from JSON files.
//!
//! ```json
//! {"rows": 1, "cols": 2, "entries": [["2*(t^2-3t+1)", "(t-1)*(t^2-3t+1)"]]}
//! ```
//!
//! `rows` and `cols` are optional and checked when present.  Entries are
//! polynomial strings or bare integers.

use std::path::Path;

use augtor::parse::parse_poly;
use augtor::{LaurentPoly, PresentationMatrix};
use serde::Deserialize;
use serde_json::Value;

/// Why a matrix file could not be loaded.  Rows and columns are 1-based.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed matrix file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix has no rows")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("declared {what} = {declared}, found {found}")]
    Declared {
        what: &'static str,
        declared: usize,
        found: usize,
    },
    #[error("row {row}, column {col}: {message}")]
    Entry {
        row: usize,
        col: usize,
        message: String,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: Option<usize>,
    cols: Option<usize>,
    entries: Vec<Vec<Value>>,
}

/// Read and parse a matrix file.
pub fn load_presentation(path: &Path) -> Result<PresentationMatrix, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_presentation(&text)
}

/// Parse the JSON text of a matrix file.  Zero columns are adjoined when
/// there are fewer columns than rows.
pub fn parse_presentation(text: &str) -> Result<PresentationMatrix, LoadError> {
    let file: MatrixFile = serde_json::from_str(text)?;
    let n = file.entries.len();
    let first = file.entries.first().ok_or(LoadError::Empty)?.len();
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != first {
            return Err(LoadError::RowLength {
                row: i + 1,
                found: row.len(),
                expected: first,
            });
        }
    }
    for (what, declared, found) in [("rows", file.rows, n), ("cols", file.cols, first)] {
        if let Some(declared) = declared {
            if declared != found {
                return Err(LoadError::Declared {
                    what,
                    declared,
                    found,
                });
            }
        }
    }
    if first == 0 {
        return Err(LoadError::Entry {
            row: 1,
            col: 1,
            message: "rows are empty".into(),
        });
    }
    let rows = file
        .entries
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| {
                    entry(v).map_err(|message| LoadError::Entry {
                        row: i + 1,
                        col: j + 1,
                        message,
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    PresentationMatrix::new(rows).map_err(|e| LoadError::Entry {
        row: 1,
        col: 1,
        message: e.to_string(),
    })
}

fn entry(v: &Value) -> Result<LaurentPoly, String> {
    match v {
        Value::String(s) => parse_poly(s).map_err(|e| e.to_string()),
        Value::Number(n) => {
            let s = n.to_string();
            if s.bytes().all(|b| b.is_ascii_digit() || b == b'-') {
                parse_poly(&s).map_err(|e| e.to_string())
            } else {
                Err(format!("`{s}` is not an integer"))
            }
        }
        other => Err(format!(
            "expected a polynomial string or integer, found {other}"
        )),
    }
}
