//! Forward selection and backward elimination over input columns.

use serde::{Deserialize, Serialize};

use super::significance::{clamp, shuffle_test, SignificanceConfig, TIE_TOLERANCE};
use crate::info::{CmiContext, Encoded, Scratch};
use crate::{Dataset, Error, Result};

const STAGE_FORWARD: u64 = 0;
const STAGE_BACKWARD: u64 = 1;

/// One accepted forward step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForwardStep {
    /// Input column index.
    pub column: usize,
    /// `I(X_column; Y | previously selected)` in bits.
    pub gain: f64,
    pub threshold: f64,
    pub p_value: f64,
}

/// One backward test: the weakest remaining column and whether it was
/// dropped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackwardStep {
    pub column: usize,
    /// `I(X_column; Y | the other remaining columns)` in bits.
    pub estimate: f64,
    pub threshold: f64,
    pub p_value: f64,
    pub removed: bool,
}

fn check_target(data: &Dataset, target: usize) -> Result<()> {
    if data.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if target >= data.n_outputs() {
        return Err(Error::InvalidColumn(format!("output {target}")));
    }
    Ok(())
}

fn encode_inputs(data: &Dataset, columns: &[usize]) -> Encoded {
    columns
        .iter()
        .fold(Encoded::trivial(data.rows()), |enc, &j| {
            enc.refine(data.input(j), data.alphabets()[j])
        })
}

/// Greedy forward selection: repeatedly adds the input with the largest
/// conditional mutual information with the target given the inputs chosen
/// so far, as long as that maximum passes the shuffle test. Ties go to the
/// lowest column index.
pub fn forward_select(
    data: &Dataset,
    target: usize,
    cfg: &SignificanceConfig,
) -> Result<Vec<ForwardStep>> {
    check_target(data, target)?;
    cfg.validate()?;
    let y = data.output(target);
    let limit = cfg.max_parents.unwrap_or(usize::MAX).min(data.n_inputs());
    let mut selected: Vec<ForwardStep> = Vec::new();
    let mut chosen = vec![false; data.n_inputs()];
    let mut z = Encoded::trivial(data.rows());
    let mut scratch = Scratch::default();
    while selected.len() < limit {
        let ctx = CmiContext::new(y, 2, z);
        let mut best: Option<(usize, f64)> = None;
        for j in (0..data.n_inputs()).filter(|&j| !chosen[j]) {
            let gain = clamp(ctx.cmi(data.input(j), data.alphabets()[j], &mut scratch));
            if best.is_none_or(|(_, g)| gain > g + TIE_TOLERANCE) {
                best = Some((j, gain));
            }
        }
        let Some((k, gain)) = best else { break };
        // a zero estimate can never exceed a non-negative threshold
        if gain <= TIE_TOLERANCE {
            break;
        }
        let test = shuffle_test(
            &ctx,
            data.input(k),
            data.alphabets()[k],
            gain,
            cfg.alpha,
            cfg,
            &[target as u64, STAGE_FORWARD, selected.len() as u64],
        );
        if !test.significant {
            break;
        }
        selected.push(ForwardStep {
            column: k,
            gain,
            threshold: test.threshold,
            p_value: test.p_value,
        });
        chosen[k] = true;
        z = ctx
            .conditioning()
            .refine(data.input(k), data.alphabets()[k]);
    }
    Ok(selected)
}

/// Backward elimination: repeatedly finds the candidate with the smallest
/// conditional mutual information with the target given the other
/// candidates (ties to the lowest column index) and drops it unless that
/// value passes the shuffle test. Returns the surviving columns ascending
/// together with the tests performed.
pub fn backward_eliminate(
    data: &Dataset,
    target: usize,
    candidates: &[usize],
    cfg: &SignificanceConfig,
) -> Result<(Vec<usize>, Vec<BackwardStep>)> {
    check_target(data, target)?;
    cfg.validate()?;
    let mut kept: Vec<usize> = candidates.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&j) = kept.iter().find(|&&j| j >= data.n_inputs()) {
        return Err(Error::InvalidColumn(format!("input {j}")));
    }
    let y = data.output(target);
    let mut steps = Vec::new();
    let mut scratch = Scratch::default();
    while !kept.is_empty() {
        let mut weakest: Option<(usize, f64, CmiContext<'_>)> = None;
        for (pos, &j) in kept.iter().enumerate() {
            let others: Vec<usize> = kept
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &c)| c)
                .collect();
            let ctx = CmiContext::new(y, 2, encode_inputs(data, &others));
            let v = clamp(ctx.cmi(data.input(j), data.alphabets()[j], &mut scratch));
            if weakest
                .as_ref()
                .is_none_or(|(_, w, _)| v < w - TIE_TOLERANCE)
            {
                weakest = Some((pos, v, ctx));
            }
        }
        let (pos, estimate, ctx) = weakest.expect("kept is not empty");
        let column = kept[pos];
        let test = shuffle_test(
            &ctx,
            data.input(column),
            data.alphabets()[column],
            estimate,
            cfg.backward_level(),
            cfg,
            &[target as u64, STAGE_BACKWARD, steps.len() as u64],
        );
        let removed = !test.significant;
        steps.push(BackwardStep {
            column,
            estimate,
            threshold: test.threshold,
            p_value: test.p_value,
            removed,
        });
        if !removed {
            break;
        }
        kept.remove(pos);
    }
    Ok((kept, steps))
}
