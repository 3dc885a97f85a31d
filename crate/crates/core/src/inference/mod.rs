//! Causation-entropy search for the inputs and truth table of each Boolean
//! output.
//!
//! For one output the search runs three stages:
//!
//! 1. [`forward_select`] greedily adds the input carrying the most
//!    conditional mutual information with the output, while a shuffle test
//!    says that information is non-zero.
//! 2. [`backward_eliminate`] drops selected inputs whose conditional mutual
//!    information given the rest is indistinguishable from zero.
//! 3. [`fit_truth_table`] assigns each observed input pattern its majority
//!    output.
//!
//! [`infer_network`] repeats this independently for every output of a
//! time-series dataset and assembles the adjacency matrix.

mod fit;
mod search;
mod significance;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use fit::fit_truth_table;
pub use search::{backward_eliminate, forward_select, BackwardStep, ForwardStep};
pub use significance::{
    permutation_test, permutation_test_on_stream, CmiTestResult, NullSampler, SignificanceConfig,
    TIE_TOLERANCE,
};

use crate::boolean::table::lexicographic_to_index;
use crate::info::{conditional_entropy, ColumnSet};
use crate::{AdjacencyMatrix, BooleanTable, Dataset, Error, NaPolicy, Result};

/// Everything learned about one output column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InferenceResult {
    /// Output column index.
    pub target: usize,
    pub target_name: String,
    /// Accepted forward steps, in selection order.
    pub forward: Vec<ForwardStep>,
    /// Backward tests, in the order performed.
    pub backward: Vec<BackwardStep>,
    /// Final input columns, ascending; table input `j` is `parents[j]`.
    pub parents: Vec<usize>,
    pub parent_names: Vec<String>,
    pub table: BooleanTable,
    /// Fraction of rows showing each table pattern (same indexing as the
    /// table).
    pub occurrences: Vec<f64>,
    /// `H(Y | parents)` in bits.
    pub residual_uncertainty: f64,
    /// Majority output over the training rows (ties to 1).
    pub majority: bool,
    pub rows: usize,
}

impl InferenceResult {
    /// Forward-selected columns in selection order.
    pub fn forward_order(&self) -> Vec<usize> {
        self.forward.iter().map(|s| s.column).collect()
    }

    /// Predicted output for a full input row.
    pub fn predict(&self, row: &[u8], na: NaPolicy) -> Result<bool> {
        let pattern = self
            .parents
            .iter()
            .enumerate()
            .try_fold(0usize, |acc, (b, &j)| {
                row.get(j)
                    .map(|&s| acc | (usize::from(s == 1) << b))
                    .ok_or_else(|| Error::InvalidColumn(format!("input {j}")))
            })?;
        self.table.eval_index(pattern, na)
    }

    /// Text table in the usual layout: parent columns, output, occurrence.
    pub fn report(&self) -> String {
        let mut headers: Vec<String> = self.parent_names.clone();
        headers.push(self.target_name.clone());
        headers.push("Occurrence".to_string());
        let widths: Vec<usize> = headers
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let min = if i == self.parents.len() { 3 } else { 1 };
                h.len().max(min)
            })
            .collect();
        let occ_w = widths[widths.len() - 1].max(7);
        let k = self.parents.len();
        let mut s = String::new();
        let mut header_cells: Vec<String> = headers[..=k]
            .iter()
            .zip(&widths)
            .map(|(h, w)| format!("{h:>w$}"))
            .collect();
        header_cells.push(format!("{:>occ_w$}", headers[k + 1]));
        s.push_str(&header_cells.join(" | "));
        s.push('\n');
        for row in 0..self.table.len() {
            let pattern = lexicographic_to_index(row, k);
            let mut cells: Vec<String> = (0..k)
                .map(|j| format!("{:>w$}", pattern >> j & 1, w = widths[j]))
                .collect();
            let out = match self.table.entries()[pattern] {
                Some(b) => u8::from(b).to_string(),
                None => "N/A".to_string(),
            };
            cells.push(format!("{out:>w$}", w = widths[k]));
            let occ = format!("{:.2}%", 100.0 * self.occurrences[pattern]);
            cells.push(format!("{occ:>occ_w$}"));
            s.push_str(&cells.join(" | "));
            s.push('\n');
        }
        s
    }
}

/// Forward selection, backward elimination and truth-table fitting for one
/// output column.
pub fn infer_function(
    data: &Dataset,
    target: usize,
    cfg: &SignificanceConfig,
) -> Result<InferenceResult> {
    let forward = forward_select(data, target, cfg)?;
    let order: Vec<usize> = forward.iter().map(|s| s.column).collect();
    let (parents, backward) = backward_eliminate(data, target, &order, cfg)?;
    let (table, occurrences) = fit_truth_table(data, target, &parents)?;
    let residual_uncertainty = conditional_entropy(
        &ColumnSet::output(data, target)?,
        &ColumnSet::inputs(data, &parents)?,
    )?;
    let ones = data.output(target).iter().filter(|&&b| b == 1).count();
    Ok(InferenceResult {
        target,
        target_name: data.output_names()[target].clone(),
        forward,
        backward,
        parent_names: parents
            .iter()
            .map(|&j| data.input_names()[j].clone())
            .collect(),
        parents,
        table,
        occurrences,
        residual_uncertainty: residual_uncertainty.max(0.0),
        majority: 2 * ones >= data.rows(),
        rows: data.rows(),
    })
}

/// Per-node results and the inferred adjacency matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkInferenceResult {
    pub nodes: Vec<InferenceResult>,
    pub adjacency: AdjacencyMatrix,
}

impl NetworkInferenceResult {
    pub fn parents(&self) -> Vec<Vec<usize>> {
        self.nodes.iter().map(|r| r.parents.clone()).collect()
    }
}

/// Infers every output of a dataset whose outputs are the next states of
/// its inputs. Nodes are processed in parallel; each has its own seeded
/// streams so the result does not depend on scheduling.
pub fn infer_network(data: &Dataset, cfg: &SignificanceConfig) -> Result<NetworkInferenceResult> {
    let n = data.n_inputs();
    if data.n_outputs() != n {
        return Err(Error::invalid(format!(
            "network inference needs one output per input, got {} inputs and {} outputs",
            n,
            data.n_outputs()
        )));
    }
    cfg.validate()?;
    let nodes = (0..n)
        .into_par_iter()
        .map(|i| infer_function(data, i, cfg))
        .collect::<Result<Vec<_>>>()?;
    let parents: Vec<Vec<usize>> = nodes.iter().map(|r| r.parents.clone()).collect();
    let adjacency = AdjacencyMatrix::from_neighbors(n, &parents)?;
    Ok(NetworkInferenceResult { nodes, adjacency })
}
