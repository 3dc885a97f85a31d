//! Brute-force baselines for small instances.
//!
//! [`exhaustive_minimal_subset`] enumerates every input subset up to a size
//! bound and keeps the smallest ones carrying all the information the inputs
//! have about the target. [`exact_support`] reads the true dependencies off a
//! network's tables.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolean::BooleanNetwork;
use crate::data::{Column, Dataset};
use crate::error::{Error, Result};
use crate::inference::TIE_TOLERANCE;
use crate::info::{encode, mutual_information, CmiContext, ColumnSet, Encoded, Scratch};

/// Upper bound on the number of subsets [`exhaustive_minimal_subset`] will
/// enumerate.
pub const SUBSET_BUDGET: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// All minimum-cardinality subsets (sorted input indices) attaining
    /// `max_mi`, in lexicographic order.
    pub minimal_sets: Vec<Vec<usize>>,
    /// Largest `I(X_K; Y)` over the enumerated subsets, in bits.
    pub max_mi: f64,
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Enumerates all input subsets of size `0..=kmax` and returns the smallest
/// ones whose mutual information with output `target` is maximal.
pub fn exhaustive_minimal_subset(
    data: &Dataset,
    target: usize,
    kmax: usize,
) -> Result<OracleResult> {
    data.check(Column::Output(target))?;
    let n = data.n_inputs();
    if kmax > n {
        return Err(Error::invalid(format!("kmax = {kmax} exceeds {n} inputs")));
    }
    let subsets: u128 = (0..=kmax).map(|k| binomial(n, k)).sum();
    if subsets > SUBSET_BUDGET {
        return Err(Error::BudgetExceeded {
            subsets,
            budget: SUBSET_BUDGET,
        });
    }

    // I(X_K; Y) = I(Z; Y | empty) with Z the joint code of X_K.
    let y = data.output(target);
    let y_alphabet = data.alphabet(Column::Output(target));
    let ctx = CmiContext::new(y, y_alphabet, Encoded::trivial(data.rows()));
    let mi = |set: &[usize]| -> Result<f64> {
        let x = ColumnSet::inputs(data, set)?;
        let z = encode(&x);
        // Joint codes wider than a byte go through the pattern counter.
        if z.cardinality > 256 {
            return mutual_information(&x, &ColumnSet::output(data, target)?);
        }
        let codes: Vec<u8> = z.codes.iter().map(|&c| c as u8).collect();
        Ok(ctx.cmi(&codes, z.cardinality.max(1), &mut Scratch::default()))
    };

    let mut per_size: Vec<Vec<(Vec<usize>, f64)>> = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let sets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let scored = sets
            .into_par_iter()
            .map(|s| mi(&s).map(|v| (s, v)))
            .collect::<Result<Vec<_>>>()?;
        per_size.push(scored);
    }
    let max_mi = per_size
        .iter()
        .flatten()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let minimal_sets = per_size
        .into_iter()
        .map(|level| {
            level
                .into_iter()
                .filter(|(_, v)| *v >= max_mi - TIE_TOLERANCE)
                .map(|(s, _)| s)
                .collect::<Vec<_>>()
        })
        .find(|level| !level.is_empty())
        .unwrap_or_default();
    Ok(OracleResult {
        minimal_sets,
        max_mi,
    })
}

/// The parents of `node` its table truly depends on, as sorted node ids.
///
/// Fails if the table has unobserved (NA) entries.
pub fn exact_support(net: &BooleanNetwork, node: usize) -> Result<Vec<usize>> {
    net.essential_support(node)
}
