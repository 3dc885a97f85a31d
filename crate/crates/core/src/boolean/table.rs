use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported table arity. 2^24 cells is already far beyond what any
/// dataset in this crate can populate.
pub const MAX_ARITY: usize = 24;

/// What to do when a truth table is evaluated on a pattern that was never
/// observed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NaPolicy {
    #[default]
    Error,
    Default0,
    Default1,
}

impl NaPolicy {
    fn resolve(self, pattern: usize) -> Result<bool> {
        match self {
            NaPolicy::Error => Err(Error::UnobservedPattern { pattern }),
            NaPolicy::Default0 => Ok(false),
            NaPolicy::Default1 => Ok(true),
        }
    }
}

/// Index of an input bit string: bit `j` of the index is input `j`.
pub fn pattern_index(input: &[bool]) -> usize {
    input
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | (usize::from(b) << j))
}

/// Inverse of [`pattern_index`].
pub fn pattern_bits(index: usize, arity: usize) -> Vec<bool> {
    (0..arity).map(|j| index >> j & 1 == 1).collect()
}

/// A k-ary truth table with per-pattern observation statistics.
///
/// Cell `i` holds the output for the input pattern whose bit `j` is input
/// `j`. A cell is `None` (N/A) exactly when the pattern has no observations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "TableDoc", try_from = "TableDoc")]
pub struct BooleanTable {
    arity: usize,
    entries: Vec<Option<bool>>,
    counts: Vec<u64>,
    fractions: Vec<Option<f64>>,
}

impl BooleanTable {
    /// A fully specified table; every cell carries one nominal observation.
    pub fn from_outputs(arity: usize, outputs: Vec<bool>) -> Result<Self> {
        check_arity(arity)?;
        if outputs.len() != 1 << arity {
            return Err(Error::invalid(format!(
                "a table of arity {arity} needs {} outputs, got {}",
                1usize << arity,
                outputs.len()
            )));
        }
        Ok(BooleanTable {
            arity,
            counts: vec![1; outputs.len()],
            fractions: outputs
                .iter()
                .map(|&b| Some(if b { 1.0 } else { 0.0 }))
                .collect(),
            entries: outputs.into_iter().map(Some).collect(),
        })
    }

    /// A table from a rule over the input bits.
    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        check_arity(arity)?;
        let outputs = (0..1usize << arity)
            .map(|i| f(&pattern_bits(i, arity)))
            .collect();
        Self::from_outputs(arity, outputs)
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    /// A table whose cells are independent fair coins.
    pub fn random<R: Rng + ?Sized>(arity: usize, rng: &mut R) -> Result<Self> {
        check_arity(arity)?;
        let outputs = (0..1usize << arity).map(|_| rng.random::<bool>()).collect();
        Self::from_outputs(arity, outputs)
    }

    /// Builds a table from per-pattern observation counts and the number of
    /// ones among them. Output is the majority vote, ties going to 1.
    pub fn from_observations(arity: usize, counts: Vec<u64>, ones: &[u64]) -> Result<Self> {
        check_arity(arity)?;
        if counts.len() != 1 << arity || ones.len() != counts.len() {
            return Err(Error::invalid("observation vectors do not match the arity"));
        }
        let mut entries = Vec::with_capacity(counts.len());
        let mut fractions = Vec::with_capacity(counts.len());
        for (&c, &o) in counts.iter().zip(ones) {
            if o > c {
                return Err(Error::invalid("more ones than observations"));
            }
            if c == 0 {
                entries.push(None);
                fractions.push(None);
            } else {
                let g = o as f64 / c as f64;
                // 2*o >= c avoids the rounding of g >= 0.5
                entries.push(Some(2 * o >= c));
                fractions.push(Some(g));
            }
        }
        Ok(BooleanTable {
            arity,
            entries,
            counts,
            fractions,
        })
    }

    /// Parses the `'0'`/`'1'`/`'-'` cell string used by the JSON format.
    pub fn from_entry_string(arity: usize, cells: &str) -> Result<Self> {
        check_arity(arity)?;
        let entries = cells
            .chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '-' => Ok(None),
                other => Err(Error::Format(format!("bad truth table cell {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != 1 << arity {
            return Err(Error::Format(format!(
                "a table of arity {arity} needs {} cells, got {}",
                1usize << arity,
                entries.len()
            )));
        }
        Ok(BooleanTable {
            arity,
            counts: entries.iter().map(|e| u64::from(e.is_some())).collect(),
            fractions: entries
                .iter()
                .map(|e| e.map(|b| if b { 1.0 } else { 0.0 }))
                .collect(),
            entries,
        })
    }

    pub fn entry_string(&self) -> String {
        self.entries
            .iter()
            .map(|e| match e {
                Some(false) => '0',
                Some(true) => '1',
                None => '-',
            })
            .collect()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Option<bool>] {
        &self.entries
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Fraction of ones among the observations of each pattern.
    pub fn fractions(&self) -> &[Option<f64>] {
        &self.fractions
    }

    pub fn entry(&self, pattern: usize) -> Option<bool> {
        self.entries.get(pattern).copied().flatten()
    }

    pub fn has_na(&self) -> bool {
        self.entries.iter().any(Option::is_none)
    }

    /// Output for `input`, with `na` deciding unobserved patterns.
    pub fn eval(&self, input: &[bool], na: NaPolicy) -> Result<bool> {
        if input.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: input.len(),
            });
        }
        self.eval_index(pattern_index(input), na)
    }

    pub fn eval_index(&self, pattern: usize, na: NaPolicy) -> Result<bool> {
        match self.entries.get(pattern) {
            Some(Some(b)) => Ok(*b),
            Some(None) => na.resolve(pattern),
            None => Err(Error::invalid(format!(
                "pattern {pattern} out of range for arity {}",
                self.arity
            ))),
        }
    }

    /// Output for `input` XOR a Bernoulli(`q`) flip drawn from `rng`.
    ///
    /// Exactly one `f64` is drawn per call, whatever `q` is.
    pub fn eval_stochastic<R: Rng + ?Sized>(
        &self,
        input: &[bool],
        q: f64,
        na: NaPolicy,
        rng: &mut R,
    ) -> Result<bool> {
        check_noise(q)?;
        let out = self.eval(input, na)?;
        Ok(out ^ flip(q, rng))
    }

    /// Positions of the inputs the table depends on: input `j` is essential
    /// iff flipping it changes the output for some pattern.
    pub fn essential_inputs(&self) -> Result<Vec<usize>> {
        if let Some(pattern) = self.entries.iter().position(Option::is_none) {
            return Err(Error::UnobservedPattern { pattern });
        }
        Ok((0..self.arity)
            .filter(|&j| (0..self.len()).any(|i| self.entries[i] != self.entries[i ^ (1 << j)]))
            .collect())
    }

    /// The same function with inputs reordered: new input `s` is old input
    /// `order[s]`. `order` must be a permutation of `0..arity`.
    pub fn permute_inputs(&self, order: &[usize]) -> BooleanTable {
        assert_eq!(order.len(), self.arity, "order must list every input once");
        let old_index = |new: usize| {
            order
                .iter()
                .enumerate()
                .fold(0usize, |acc, (s, &o)| acc | ((new >> s & 1) << o))
        };
        let map: Vec<usize> = (0..self.len()).map(old_index).collect();
        BooleanTable {
            arity: self.arity,
            entries: map.iter().map(|&o| self.entries[o]).collect(),
            counts: map.iter().map(|&o| self.counts[o]).collect(),
            fractions: map.iter().map(|&o| self.fractions[o]).collect(),
        }
    }

    /// Aligned text rendering: one row per pattern in lexicographic order of
    /// the inputs (first input most significant), as a truth table is
    /// usually printed.
    pub fn render(&self, input_names: &[String], output_name: &str) -> String {
        let names: Vec<String> = (0..self.arity)
            .map(|j| {
                input_names
                    .get(j)
                    .cloned()
                    .unwrap_or_else(|| format!("x{}", j + 1))
            })
            .collect();
        let widths: Vec<usize> = names.iter().map(|n| n.len().max(1)).collect();
        let out_w = output_name.len().max(3);
        let mut s = String::new();
        let header: Vec<String> = names
            .iter()
            .zip(&widths)
            .map(|(n, w)| format!("{n:>w$}"))
            .collect();
        s.push_str(&format!("{} | {output_name:>out_w$}\n", header.join(" ")));
        for row in 0..self.len() {
            let pattern = lexicographic_to_index(row, self.arity);
            let bits: Vec<String> = (0..self.arity)
                .zip(&widths)
                .map(|(j, w)| format!("{:>w$}", u8::from(pattern >> j & 1 == 1)))
                .collect();
            let out = match self.entries[pattern] {
                Some(b) => u8::from(b).to_string(),
                None => "N/A".to_string(),
            };
            s.push_str(&format!("{} | {out:>out_w$}\n", bits.join(" ")));
        }
        s
    }
}

/// Serialized form: the cell string plus observation statistics.
#[derive(Serialize, Deserialize)]
struct TableDoc {
    arity: usize,
    entries: String,
    counts: Vec<u64>,
    fractions: Vec<Option<f64>>,
}

impl From<BooleanTable> for TableDoc {
    fn from(t: BooleanTable) -> Self {
        TableDoc {
            arity: t.arity,
            entries: t.entry_string(),
            counts: t.counts,
            fractions: t.fractions,
        }
    }
}

impl TryFrom<TableDoc> for BooleanTable {
    type Error = Error;

    fn try_from(doc: TableDoc) -> Result<Self> {
        let mut t = BooleanTable::from_entry_string(doc.arity, &doc.entries)?;
        if doc.counts.len() != t.len() || doc.fractions.len() != t.len() {
            return Err(Error::Format(
                "table statistics do not match the arity".into(),
            ));
        }
        for i in 0..t.len() {
            let observed = doc.counts[i] > 0;
            if observed != t.entries[i].is_some() || observed != doc.fractions[i].is_some() {
                return Err(Error::Format(format!(
                    "table cell {i}: N/A marker disagrees with its count"
                )));
            }
            if let Some(g) = doc.fractions[i] {
                if !(0.0..=1.0).contains(&g) {
                    return Err(Error::Format(format!(
                        "table cell {i}: fraction {g} outside [0, 1]"
                    )));
                }
            }
        }
        t.counts = doc.counts;
        t.fractions = doc.fractions;
        Ok(t)
    }
}

impl fmt::Display for BooleanTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[], "y"))
    }
}

/// Maps the row number of a lexicographic listing (first input most
/// significant) to the pattern index (first input least significant).
pub(crate) fn lexicographic_to_index(row: usize, arity: usize) -> usize {
    (0..arity).fold(0, |acc, j| acc | ((row >> (arity - 1 - j) & 1) << j))
}

pub(crate) fn flip<R: Rng + ?Sized>(q: f64, rng: &mut R) -> bool {
    rng.random::<f64>() < q
}

pub(crate) fn check_noise(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::invalid(format!("noise level {q} is not in [0, 1]")))
    }
}

fn check_arity(arity: usize) -> Result<()> {
    if arity > MAX_ARITY {
        return Err(Error::invalid(format!(
            "arity {arity} exceeds the supported maximum of {MAX_ARITY}"
        )));
    }
    Ok(())
}
