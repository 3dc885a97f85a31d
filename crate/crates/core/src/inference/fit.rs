use crate::boolean::MAX_ARITY;
use crate::{BooleanTable, Dataset, Error, Result};

/// Fits a truth table of `target` over the input columns `parents` (in the
/// given order, parent `j` on bit `j`). Each observed pattern gets the
/// majority output of its rows (ties to 1); unobserved patterns are N/A.
/// Also returns the fraction of rows showing each pattern.
pub fn fit_truth_table(
    data: &Dataset,
    target: usize,
    parents: &[usize],
) -> Result<(BooleanTable, Vec<f64>)> {
    if data.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if target >= data.n_outputs() {
        return Err(Error::InvalidColumn(format!("output {target}")));
    }
    if parents.len() > MAX_ARITY {
        return Err(Error::invalid(format!(
            "{} parents exceed the table limit",
            parents.len()
        )));
    }
    for (a, &j) in parents.iter().enumerate() {
        if j >= data.n_inputs() {
            return Err(Error::InvalidColumn(format!("input {j}")));
        }
        if parents[..a].contains(&j) {
            return Err(Error::invalid(format!("input {j} listed twice")));
        }
        let alphabet = data.alphabets()[j];
        if alphabet > 2 {
            return Err(Error::NonBoolean {
                column: data.input_names()[j].clone(),
                alphabet,
            });
        }
    }
    let cells = 1usize << parents.len();
    let mut counts = vec![0u64; cells];
    let mut ones = vec![0u64; cells];
    let y = data.output(target);
    for (t, &label) in y.iter().enumerate() {
        let pattern = parents.iter().enumerate().fold(0usize, |acc, (b, &j)| {
            acc | (usize::from(data.input(j)[t]) << b)
        });
        counts[pattern] += 1;
        ones[pattern] += u64::from(label);
    }
    let rows = data.rows() as f64;
    let occurrences = counts.iter().map(|&c| c as f64 / rows).collect();
    Ok((
        BooleanTable::from_observations(parents.len(), counts, &ones)?,
        occurrences,
    ))
}
