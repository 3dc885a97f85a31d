//! Loaders for the case-study datasets, each applying a fixed Boolean or
//! categorical encoding and recording how every column was derived.

mod acute;
mod lendingclub;
mod spect;
mod tictactoe;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

pub use acute::load_acute_inflammations;
pub use lendingclub::{load_lendingclub, load_lendingclub_with, LendingClubSchema};
pub use spect::{load_spect, load_spect_file};
pub use tictactoe::load_tictactoe;

/// How one column was derived from the raw file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnNote {
    pub name: String,
    pub description: String,
    /// Raw field the column was read from.
    pub source: String,
    /// Encoding applied to the raw field.
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl ColumnNote {
    fn new(name: &str, description: &str, source: &str, rule: &str) -> Self {
        ColumnNote {
            name: name.to_string(),
            description: description.to_string(),
            source: source.to_string(),
            rule: rule.to_string(),
            threshold: None,
        }
    }

    fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self
    }
}

/// A loaded dataset with per-column notes (inputs first, then outputs) and
/// any non-fatal warnings raised while loading.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset {
    pub data: Dataset,
    pub columns: Vec<ColumnNote>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct NotesDoc<'a> {
    rows: usize,
    columns: &'a [ColumnNote],
    warnings: &'a [String],
}

impl LabeledDataset {
    fn new(data: Dataset, columns: Vec<ColumnNote>, warnings: Vec<String>) -> Result<Self> {
        let names: Vec<&String> = data
            .input_names()
            .iter()
            .chain(data.output_names())
            .collect();
        if names.len() != columns.len() || names.iter().zip(&columns).any(|(a, c)| **a != c.name) {
            return Err(Error::invalid(
                "column notes do not match the dataset columns",
            ));
        }
        Ok(LabeledDataset {
            data,
            columns,
            warnings,
        })
    }

    /// Column notes and warnings as pretty-printed JSON.
    pub fn notes_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&NotesDoc {
            rows: self.data.rows(),
            columns: &self.columns,
            warnings: &self.warnings,
        })?)
    }
}

/// Reads a text file, decoding UTF-16 when a byte order mark says so.
fn read_text(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    let utf16 = |be: bool| -> Result<String> {
        let units: Vec<u16> = bytes[2..]
            .chunks_exact(2)
            .map(|c| {
                if be {
                    u16::from_be_bytes([c[0], c[1]])
                } else {
                    u16::from_le_bytes([c[0], c[1]])
                }
            })
            .collect();
        String::from_utf16(&units).map_err(|e| parse_error(path, 0, e.to_string()))
    };
    match bytes.as_slice() {
        [0xff, 0xfe, ..] => utf16(false),
        [0xfe, 0xff, ..] => utf16(true),
        [0xef, 0xbb, 0xbf, rest @ ..] => {
            String::from_utf8(rest.to_vec()).map_err(|e| parse_error(path, 0, e.to_string()))
        }
        _ => String::from_utf8(bytes).map_err(|e| parse_error(path, 0, e.to_string())),
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Non-blank lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("{prefix}{j}")).collect()
}
