//! The standardized sample matrix: `T` rows of `n` categorical inputs paired
//! with `l` Boolean outputs.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest alphabet a categorical column may use.
pub const MAX_ALPHABET: usize = 255;

/// Selects one column of a [`Dataset`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Column {
    Input(usize),
    Output(usize),
}

/// Column-major store of input symbols and output bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    rows: usize,
    inputs: Vec<Vec<u8>>,
    alphabets: Vec<usize>,
    outputs: Vec<Vec<u8>>,
    input_names: Vec<String>,
    output_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from columns. Alphabet sizes default to
    /// `max(2, largest symbol + 1)`.
    pub fn from_columns(
        inputs: Vec<Vec<u8>>,
        outputs: Vec<Vec<u8>>,
        alphabets: Option<Vec<usize>>,
    ) -> Result<Self> {
        let rows = inputs
            .first()
            .or(outputs.first())
            .map(Vec::len)
            .ok_or_else(|| Error::invalid("a dataset needs at least one column"))?;
        if rows == 0 {
            return Err(Error::EmptyDataset);
        }
        if inputs.iter().chain(&outputs).any(|c| c.len() != rows) {
            return Err(Error::invalid("columns differ in length"));
        }
        let alphabets = match alphabets {
            Some(a) => a,
            None => inputs
                .iter()
                .map(|c| (usize::from(c.iter().copied().max().unwrap_or(0)) + 1).max(2))
                .collect(),
        };
        if alphabets.len() != inputs.len() {
            return Err(Error::invalid(
                "one alphabet size per input column is required",
            ));
        }
        for (j, (col, &a)) in inputs.iter().zip(&alphabets).enumerate() {
            if a == 0 || a > MAX_ALPHABET {
                return Err(Error::invalid(format!(
                    "input {j}: alphabet size {a} outside 1..={MAX_ALPHABET}"
                )));
            }
            if let Some(&s) = col.iter().find(|&&s| usize::from(s) >= a) {
                return Err(Error::invalid(format!(
                    "input {j}: symbol {s} outside alphabet of size {a}"
                )));
            }
        }
        for (i, col) in outputs.iter().enumerate() {
            if col.iter().any(|&b| b > 1) {
                return Err(Error::invalid(format!("output {i} is not Boolean")));
            }
        }
        let input_names = (1..=inputs.len()).map(|j| format!("X{j}")).collect();
        let output_names = if outputs.len() == 1 {
            vec!["Y".to_string()]
        } else {
            (1..=outputs.len()).map(|i| format!("Y{i}")).collect()
        };
        Ok(Dataset {
            rows,
            inputs,
            alphabets,
            outputs,
            input_names,
            output_names,
        })
    }

    /// Builds a dataset from rows of input symbols and rows of output bits.
    pub fn from_rows(
        inputs: &[Vec<u8>],
        outputs: &[Vec<u8>],
        alphabets: Option<Vec<usize>>,
    ) -> Result<Self> {
        if inputs.len() != outputs.len() {
            return Err(Error::invalid("input and output row counts differ"));
        }
        let n = inputs.first().map_or(0, Vec::len);
        let l = outputs.first().map_or(0, Vec::len);
        if inputs.iter().any(|r| r.len() != n) || outputs.iter().any(|r| r.len() != l) {
            return Err(Error::invalid("rows differ in length"));
        }
        if inputs.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let cols = |rows: &[Vec<u8>], width: usize| -> Vec<Vec<u8>> {
            (0..width)
                .map(|j| rows.iter().map(|r| r[j]).collect())
                .collect()
        };
        Self::from_columns(cols(inputs, n), cols(outputs, l), alphabets)
    }

    /// Input/output pairs `(x(t), x(t+1))` of a Boolean time series.
    pub fn from_time_series(series: &[Vec<bool>]) -> Result<Self> {
        if series.len() < 2 {
            return Err(Error::invalid("a time series needs at least two states"));
        }
        let n = series[0].len();
        if series.iter().any(|s| s.len() != n) {
            return Err(Error::invalid("states differ in length"));
        }
        let col = |range: std::ops::Range<usize>, j: usize| -> Vec<u8> {
            series[range].iter().map(|s| u8::from(s[j])).collect()
        };
        let t = series.len();
        let inputs = (0..n).map(|j| col(0..t - 1, j)).collect();
        let outputs = (0..n).map(|j| col(1..t, j)).collect();
        Self::from_columns(inputs, outputs, Some(vec![2; n]))
    }

    pub fn with_names(mut self, inputs: Vec<String>, outputs: Vec<String>) -> Result<Self> {
        if inputs.len() != self.inputs.len() || outputs.len() != self.outputs.len() {
            return Err(Error::invalid("one name per column is required"));
        }
        self.input_names = inputs;
        self.output_names = outputs;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn input(&self, j: usize) -> &[u8] {
        &self.inputs[j]
    }

    pub fn output(&self, i: usize) -> &[u8] {
        &self.outputs[i]
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn check(&self, column: Column) -> Result<()> {
        let ok = match column {
            Column::Input(j) => j < self.inputs.len(),
            Column::Output(i) => i < self.outputs.len(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidColumn(format!("{column:?}")))
        }
    }

    /// Symbols of `column`. Panics on an invalid selector; see [`check`](Self::check).
    pub fn column(&self, column: Column) -> &[u8] {
        match column {
            Column::Input(j) => &self.inputs[j],
            Column::Output(i) => &self.outputs[i],
        }
    }

    pub fn alphabet(&self, column: Column) -> usize {
        match column {
            Column::Input(j) => self.alphabets[j],
            Column::Output(_) => 2,
        }
    }

    pub fn name(&self, column: Column) -> &str {
        match column {
            Column::Input(j) => &self.input_names[j],
            Column::Output(i) => &self.output_names[i],
        }
    }

    pub fn output_index(&self, name: &str) -> Option<usize> {
        self.output_names.iter().position(|n| n == name)
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.input_names.iter().position(|n| n == name)
    }

    /// The rows listed in `rows`, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let Some(&r) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(Error::invalid(format!("row {r} out of range")));
        }
        let pick = |c: &Vec<u8>| rows.iter().map(|&r| c[r]).collect();
        Ok(Dataset {
            rows: rows.len(),
            inputs: self.inputs.iter().map(pick).collect(),
            alphabets: self.alphabets.clone(),
            outputs: self.outputs.iter().map(pick).collect(),
            input_names: self.input_names.clone(),
            output_names: self.output_names.clone(),
        })
    }

    /// The first `rows` rows.
    pub fn head(&self, rows: usize) -> Result<Self> {
        let idx: Vec<usize> = (0..rows.min(self.rows)).collect();
        self.select_rows(&idx)
    }

    /// Writes the canonical text form: one JSON header line, then one line
    /// per sample holding the input symbols and, after a space, the output
    /// bits. Symbols are single base-36 digits when every alphabet fits,
    /// otherwise two hex digits each.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let width = symbol_width(&self.alphabets);
        let header = Header {
            format: FORMAT_TAG.to_string(),
            version: 1,
            rows: self.rows,
            symbol_width: width,
            inputs: self
                .input_names
                .iter()
                .zip(&self.alphabets)
                .map(|(name, &alphabet)| InputDoc {
                    name: name.clone(),
                    alphabet,
                })
                .collect(),
            outputs: self.output_names.clone(),
        };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        let mut line = String::new();
        for t in 0..self.rows {
            line.clear();
            for col in &self.inputs {
                push_symbol(&mut line, col[t], width);
            }
            line.push(' ');
            for col in &self.outputs {
                line.push(if col[t] == 1 { '1' } else { '0' });
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("dataset text is ASCII")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Format("empty dataset file".into()))??;
        let header: Header = serde_json::from_str(&header_line)?;
        if header.format != FORMAT_TAG {
            return Err(Error::Format(format!(
                "unknown format tag {:?}",
                header.format
            )));
        }
        if header.symbol_width != 1 && header.symbol_width != 2 {
            return Err(Error::Format("symbol_width must be 1 or 2".into()));
        }
        let n = header.inputs.len();
        let l = header.outputs.len();
        let mut inputs = vec![Vec::with_capacity(header.rows); n];
        let mut outputs = vec![Vec::with_capacity(header.rows); l];
        for (t, line) in lines.enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Format(format!("sample {}: {msg}", t + 1));
            let (xs, ys) = line
                .split_once(' ')
                .ok_or_else(|| bad("missing separator"))?;
            if xs.len() != n * header.symbol_width || ys.len() != l {
                return Err(bad("wrong number of symbols"));
            }
            for (j, col) in inputs.iter_mut().enumerate() {
                let s = &xs[j * header.symbol_width..(j + 1) * header.symbol_width];
                col.push(parse_symbol(s, header.symbol_width).ok_or_else(|| bad("bad symbol"))?);
            }
            for (col, c) in outputs.iter_mut().zip(ys.chars()) {
                col.push(match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(bad("output is not a bit")),
                });
            }
        }
        if inputs.first().or(outputs.first()).map_or(0, Vec::len) != header.rows {
            return Err(Error::Format(format!(
                "header declares {} rows but the body differs",
                header.rows
            )));
        }
        let alphabets = header.inputs.iter().map(|i| i.alphabet).collect();
        let names = header.inputs.into_iter().map(|i| i.name).collect();
        Self::from_columns(inputs, outputs, Some(alphabets))?.with_names(names, header.outputs)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let f = fs::File::open(path)?;
        Self::read_from(BufReader::new(f))
    }
}

const FORMAT_TAG: &str = "bocse-dataset";

#[derive(Serialize, Deserialize)]
struct InputDoc {
    name: String,
    alphabet: usize,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    rows: usize,
    symbol_width: usize,
    inputs: Vec<InputDoc>,
    outputs: Vec<String>,
}

fn symbol_width(alphabets: &[usize]) -> usize {
    if alphabets.iter().all(|&a| a <= 36) {
        1
    } else {
        2
    }
}

fn push_symbol(s: &mut String, symbol: u8, width: usize) {
    if width == 1 {
        s.push(char::from_digit(u32::from(symbol), 36).expect("symbol below 36"));
    } else {
        s.push_str(&format!("{symbol:02x}"));
    }
}

fn parse_symbol(s: &str, width: usize) -> Option<u8> {
    let radix = if width == 1 { 36 } else { 16 };
    u8::from_str_radix(s, radix).ok()
}
