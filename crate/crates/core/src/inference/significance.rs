//! Permutation tests for whether an estimated conditional mutual
//! information is distinguishable from zero.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::info::{encode, CmiContext, ColumnSet, NullScratch, Scratch};
use crate::{seed, Column, Error, Result};

/// Estimates within this distance of each other, or of zero, are treated as
/// equal.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// How null samples of the shuffle test are produced. Both draw from the
/// same distribution, the one induced by a uniform random permutation of
/// the rows of `X`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullSampler {
    /// Permute the `X` column and recount.
    Shuffle,
    /// Draw the contingency table of the permuted column directly (see
    /// [`crate::info::NullTable`]); cost independent of the row count.
    #[default]
    Table,
}

/// Parameters of the shuffle test and of the search that uses it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignificanceConfig {
    /// Test level of the forward stage.
    pub alpha: f64,
    /// Test level of the backward stage; `None` reuses `alpha`.
    #[serde(default)]
    pub backward_alpha: Option<f64>,
    /// Number of shuffles forming the null distribution.
    pub permutations: usize,
    pub master_seed: u64,
    /// Upper bound on the forward selection size; `None` is unlimited.
    #[serde(default)]
    pub max_parents: Option<usize>,
    #[serde(default)]
    pub null_sampler: NullSampler,
}

impl Default for SignificanceConfig {
    fn default() -> Self {
        SignificanceConfig {
            alpha: 0.05,
            backward_alpha: None,
            permutations: 1000,
            master_seed: 0,
            max_parents: None,
            null_sampler: NullSampler::default(),
        }
    }
}

impl SignificanceConfig {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_permutations(mut self, permutations: usize) -> Self {
        self.permutations = permutations;
        self
    }

    pub fn with_null_sampler(mut self, null_sampler: NullSampler) -> Self {
        self.null_sampler = null_sampler;
        self
    }

    pub fn backward_level(&self) -> f64 {
        self.backward_alpha.unwrap_or(self.alpha)
    }

    pub fn validate(&self) -> Result<()> {
        for a in [self.alpha, self.backward_level()] {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::invalid(format!("alpha {a} must lie in (0, 1)")));
            }
        }
        if self.permutations == 0 {
            return Err(Error::invalid("at least one permutation is required"));
        }
        Ok(())
    }
}

/// Outcome of one shuffle test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmiTestResult {
    pub estimate: f64,
    pub null_samples: Vec<f64>,
    /// The `ceil((1 - alpha) N)`-th smallest null sample.
    pub threshold: f64,
    /// `(1 + #{null >= estimate}) / (1 + N)`.
    pub p_value: f64,
    pub significant: bool,
}

/// Rounding below zero is noise; plug-in CMI is non-negative.
pub(crate) fn clamp(v: f64) -> f64 {
    v.max(0.0)
}

/// `I(X; Y | Z)` against `permutations` shuffles of the rows of `x`, with
/// `Y` and `Z` held in place.
pub fn permutation_test(
    x: Column,
    y: Column,
    z: &ColumnSet<'_>,
    cfg: &SignificanceConfig,
) -> Result<CmiTestResult> {
    permutation_test_on_stream(x, y, z, cfg, &[])
}

/// As [`permutation_test`], drawing shuffles from the stream `path` under
/// the configured master seed.
pub fn permutation_test_on_stream(
    x: Column,
    y: Column,
    z: &ColumnSet<'_>,
    cfg: &SignificanceConfig,
    path: &[u64],
) -> Result<CmiTestResult> {
    cfg.validate()?;
    let data = z.data();
    data.check(x)?;
    data.check(y)?;
    if data.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    let ctx = CmiContext::new(data.column(y), data.alphabet(y), encode(z));
    let estimate = clamp(ctx.cmi(data.column(x), data.alphabet(x), &mut Scratch::default()));
    Ok(shuffle_test(
        &ctx,
        data.column(x),
        data.alphabet(x),
        estimate,
        cfg.alpha,
        cfg,
        path,
    ))
}

/// Null samples are computed in parallel, each replicate on its own seeded
/// stream, and collected in replicate order.
pub(crate) fn shuffle_test(
    ctx: &CmiContext<'_>,
    x: &[u8],
    x_alphabet: usize,
    estimate: f64,
    alpha: f64,
    cfg: &SignificanceConfig,
    path: &[u64],
) -> CmiTestResult {
    let rng = |r: usize| {
        let mut full_path = path.to_vec();
        full_path.push(r as u64);
        seed::stream(cfg.master_seed, &full_path)
    };
    let replicates = (0..cfg.permutations).into_par_iter();
    let null_samples: Vec<f64> = match cfg.null_sampler {
        NullSampler::Shuffle => replicates
            .map_init(
                || (x.to_vec(), Scratch::default()),
                |(buf, scratch), r| {
                    buf.copy_from_slice(x);
                    buf.shuffle(&mut rng(r));
                    clamp(ctx.cmi(buf, x_alphabet, scratch))
                },
            )
            .collect(),
        NullSampler::Table => {
            let table = ctx.null_table(x, x_alphabet);
            replicates
                .map_init(NullScratch::default, |scratch, r| {
                    clamp(table.sample(&mut rng(r), scratch))
                })
                .collect()
        }
    };
    summarize(estimate, null_samples, alpha)
}

pub(crate) fn summarize(estimate: f64, null_samples: Vec<f64>, alpha: f64) -> CmiTestResult {
    let n = null_samples.len();
    let mut sorted = null_samples.clone();
    sorted.sort_by(f64::total_cmp);
    let rank = order_statistic_rank(alpha, n);
    let threshold = sorted[rank - 1];
    let exceed = null_samples
        .iter()
        .filter(|&&v| v >= estimate - TIE_TOLERANCE)
        .count();
    CmiTestResult {
        estimate,
        threshold,
        p_value: (1 + exceed) as f64 / (1 + n) as f64,
        significant: estimate > threshold + TIE_TOLERANCE,
        null_samples,
    }
}

/// 1-based rank `ceil((1 - alpha) n)`, clamped to `1..=n`.
pub(crate) fn order_statistic_rank(alpha: f64, n: usize) -> usize {
    // the small offset keeps e.g. 0.95 * 1000 from rounding up to 951
    let r = ((1.0 - alpha) * n as f64 - 1e-9).ceil();
    (r.max(1.0) as usize).min(n)
}
