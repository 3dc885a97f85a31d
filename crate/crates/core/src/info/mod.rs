//! Plug-in (empirical frequency) estimators of entropy, mutual information
//! and conditional mutual information over discrete columns, in bits.
//!
//! Two routes compute the same quantities:
//!
//! - [`entropy`], [`conditional_entropy`], [`mutual_information`] and
//!   [`conditional_mutual_information`] build [`PatternCounts`] over
//!   [`ColumnSet`]s and combine joint entropies. They are the reference
//!   estimators.
//! - [`CmiContext`] is the counting kernel used by the search: it fixes the
//!   target and the conditioning set once and evaluates `I(X; Y | Z)` for
//!   many candidate (or shuffled) `X` columns with dense count arrays.
//!
//! Values are returned unclamped; plug-in MI and CMI are non-negative up to
//! floating-point rounding.

mod counts;
mod kernel;

pub use counts::{encode, Encoded, PatternCounts};
pub use kernel::{CmiContext, NullScratch, NullTable, Scratch, XLogX};

use crate::{Column, Dataset, Error, Result};

/// A list of columns of one dataset, treated as a single joint variable.
/// The empty set is the trivial variable with a single outcome.
#[derive(Clone, Debug)]
pub struct ColumnSet<'a> {
    data: &'a Dataset,
    columns: Vec<Column>,
}

impl<'a> ColumnSet<'a> {
    pub fn new(data: &'a Dataset, columns: Vec<Column>) -> Result<Self> {
        for &c in &columns {
            data.check(c)?;
        }
        Ok(ColumnSet { data, columns })
    }

    pub fn empty(data: &'a Dataset) -> Self {
        ColumnSet {
            data,
            columns: Vec::new(),
        }
    }

    pub fn inputs(data: &'a Dataset, inputs: &[usize]) -> Result<Self> {
        Self::new(data, inputs.iter().map(|&j| Column::Input(j)).collect())
    }

    pub fn output(data: &'a Dataset, i: usize) -> Result<Self> {
        Self::new(data, vec![Column::Output(i)])
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.data.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Concatenation of the two column lists.
    pub fn union(&self, other: &ColumnSet<'_>) -> Result<ColumnSet<'a>> {
        same_dataset(self, other)?;
        let mut columns = self.columns.clone();
        columns.extend_from_slice(&other.columns);
        Ok(ColumnSet {
            data: self.data,
            columns,
        })
    }
}

fn same_dataset(a: &ColumnSet<'_>, b: &ColumnSet<'_>) -> Result<()> {
    if std::ptr::eq(a.data, b.data) {
        Ok(())
    } else {
        Err(Error::DatasetMismatch)
    }
}

/// Joint entropy `H(cols)`; zero for the empty set.
pub fn entropy(cols: &ColumnSet<'_>) -> Result<f64> {
    if cols.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(PatternCounts::from_columns(cols).entropy())
}

/// `H(Y | X) = H(X, Y) - H(X)`.
pub fn conditional_entropy(y: &ColumnSet<'_>, x: &ColumnSet<'_>) -> Result<f64> {
    let xy = x.union(y)?;
    Ok(entropy(&xy)? - entropy(x)?)
}

/// `I(X; Y) = H(X) + H(Y) - H(X, Y)`.
pub fn mutual_information(x: &ColumnSet<'_>, y: &ColumnSet<'_>) -> Result<f64> {
    let xy = x.union(y)?;
    Ok(entropy(x)? + entropy(y)? - entropy(&xy)?)
}

/// `I(X; Y | Z) = H(X, Z) + H(Y, Z) - H(X, Y, Z) - H(Z)`.
pub fn conditional_mutual_information(
    x: &ColumnSet<'_>,
    y: &ColumnSet<'_>,
    z: &ColumnSet<'_>,
) -> Result<f64> {
    let xz = x.union(z)?;
    let yz = y.union(z)?;
    let xyz = x.union(&yz)?;
    Ok(entropy(&xz)? + entropy(&yz)? - entropy(&xyz)? - entropy(z)?)
}
