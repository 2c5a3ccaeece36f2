//! The line-oriented input format.
//!
//! ```text
//! # local P^2
//! dim = 2
//! points = [[1,0],[0,1],[0,0],[-1,-1]]
//! cells = [[0,1,2],[1,2,3],[0,2,3]]
//! base_cell = 0
//! grading = [1]          # optional
//! ```
//!
//! Each value is a JSON integer or nested integer array. Blank lines and
//! text after `#` are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use slabcy_core::{GeomError, PolytopeInput};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid polytope: {0}")]
    Validation(#[from] GeomError),
}

/// A parsed input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInput {
    pub polytope: PolytopeInput,
    pub grading: Option<Vec<i64>>,
}

const KEYS: [&str; 5] = ["dim", "points", "cells", "base_cell", "grading"];

/// Reads and validates an input file.
pub fn parse_input(path: &Path) -> Result<ParsedInput, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_text(&text)
}

/// Parses and validates input text.
pub fn parse_text(text: &str) -> Result<ParsedInput, InputError> {
    let mut values: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(InputError::Parse {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
        };
        let key = key.trim();
        let Some(&known) = KEYS.iter().find(|&&k| k == key) else {
            return Err(InputError::Parse {
                line,
                message: format!("unknown key `{key}`"),
            });
        };
        if let Some((first, _)) = values.insert(known, (line, value.trim())) {
            return Err(InputError::Parse {
                line,
                message: format!("`{key}` already set on line {first}"),
            });
        }
    }

    let end = text.lines().count() + 1;
    let polytope = PolytopeInput {
        dim: required(&values, "dim", end)?,
        points: required(&values, "points", end)?,
        cells: required(&values, "cells", end)?,
        base_cell: required(&values, "base_cell", end)?,
    };
    let grading = values
        .get("grading")
        .map(|&(line, v)| value(line, "grading", v))
        .transpose()?;
    polytope.validate()?;
    Ok(ParsedInput { polytope, grading })
}

fn required<T: DeserializeOwned>(
    values: &BTreeMap<&str, (usize, &str)>,
    key: &str,
    end: usize,
) -> Result<T, InputError> {
    match values.get(key) {
        Some(&(line, v)) => value(line, key, v),
        None => Err(InputError::Parse {
            line: end,
            message: format!("missing key `{key}`"),
        }),
    }
}

fn value<T: DeserializeOwned>(line: usize, key: &str, text: &str) -> Result<T, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Parse {
        line,
        message: format!("bad value for `{key}`: {e}"),
    })
}

/// Parses a grading override such as `[1,3]` or `1,3`.
pub fn parse_grading(text: &str) -> Result<Vec<i64>, InputError> {
    let trimmed = text.trim();
    let json = if trimmed.starts_with('[') {
        trimmed.to_string()
    } else {
        format!("[{trimmed}]")
    };
    value(0, "grading", &json)
}
