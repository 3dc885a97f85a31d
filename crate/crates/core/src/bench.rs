//! Seeded experiment harness: random-network benchmarks, down-sampling
//! stability, held-out evaluation and uncertainty curves.
//!
//! Every realization draws from its own rng stream derived from the master
//! seed, so results do not depend on the number of threads.

use std::collections::HashSet;
use std::io::Write;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolean::{random_network, BooleanNetwork};
use crate::data::{Column, Dataset};
use crate::error::{Error, Result};
use crate::inference::{infer_function, infer_network, InferenceResult, SignificanceConfig};
use crate::info::{conditional_entropy, ColumnSet};
use crate::oracle::exact_support;
use crate::seed::{derive, stream};
use crate::{AdjacencyMatrix, NaPolicy};

const MIN_SAMPLES: u64 = 1;
const ERROR_RATIOS: u64 = 2;
const DOWNSAMPLE: u64 = 3;

/// Mean and sample standard deviation of one metric at one grid point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub stdev: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        if values.is_empty() {
            return Summary {
                mean: f64::NAN,
                stdev: f64::NAN,
            };
        }
        let mean = values.iter().sum::<f64>() / n;
        let stdev = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Summary { mean, stdev }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchPoint {
    /// Values of the grid parameters, aligned with
    /// [`BenchResult::parameter_names`].
    pub parameters: Vec<f64>,
    /// Aligned with [`BenchResult::metric_names`].
    pub metrics: Vec<Summary>,
    /// Realizations whose outcome was cut off by the grid.
    pub censored: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub benchmark: String,
    pub parameter_names: Vec<String>,
    pub metric_names: Vec<String>,
    pub points: Vec<BenchPoint>,
    pub realizations: usize,
    pub master_seed: u64,
}

impl BenchResult {
    /// Means of the named metric, one per grid point.
    pub fn means(&self, metric: &str) -> Option<Vec<f64>> {
        let m = self.metric_names.iter().position(|n| n == metric)?;
        Some(self.points.iter().map(|p| p.metrics[m].mean).collect())
    }

    /// One CSV row per grid point: parameters, then `<metric>_mean` and
    /// `<metric>_sd` columns, then `censored` and `realizations`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = self.parameter_names.clone();
        for m in &self.metric_names {
            header.push(format!("{m}_mean"));
            header.push(format!("{m}_sd"));
        }
        header.push("censored".into());
        header.push("realizations".into());
        out.write_record(&header)?;
        for p in &self.points {
            let mut row: Vec<String> = p.parameters.iter().map(f64::to_string).collect();
            for s in &p.metrics {
                row.push(s.mean.to_string());
                row.push(s.stdev.to_string());
            }
            row.push(p.censored.to_string());
            row.push(self.realizations.to_string());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

/// How transitions are drawn from a simulated network.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// One trajectory from a random initial state.
    Trajectory,
    /// A trajectory that jumps to a fresh random state whenever it revisits
    /// a state it has already passed through, so the data keep growing in
    /// content after the dynamics settle on an attractor.
    #[default]
    Restart,
}

/// Random-network benchmark settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkBenchConfig {
    /// In-degree `K` of every node.
    pub degree: usize,
    pub include_self: bool,
    /// Per-node flip probability applied to the generated networks.
    pub noise: f64,
    pub sampling: Sampling,
    pub significance: SignificanceConfig,
    pub seed: u64,
}

impl Default for NetworkBenchConfig {
    fn default() -> Self {
        NetworkBenchConfig {
            degree: 3,
            include_self: false,
            noise: 0.0,
            sampling: Sampling::default(),
            significance: SignificanceConfig::default(),
            seed: 0,
        }
    }
}

/// `transitions` input/output state pairs generated by `net`.
pub fn sample_transitions<R: Rng + ?Sized>(
    net: &BooleanNetwork,
    transitions: usize,
    sampling: Sampling,
    rng: &mut R,
) -> Result<Dataset> {
    let n = net.len();
    let random_state = |rng: &mut R| -> Vec<bool> { (0..n).map(|_| rng.random()).collect() };
    let mut inputs: Vec<Vec<u8>> = vec![Vec::with_capacity(transitions); n];
    let mut outputs: Vec<Vec<u8>> = vec![Vec::with_capacity(transitions); n];
    let mut state = random_state(rng);
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    for _ in 0..transitions {
        let next = net.step(&state, rng)?;
        for j in 0..n {
            inputs[j].push(u8::from(state[j]));
            outputs[j].push(u8::from(next[j]));
        }
        state = match sampling {
            Sampling::Trajectory => next,
            Sampling::Restart => {
                seen.insert(std::mem::take(&mut state));
                if seen.contains(&next) {
                    seen.clear();
                    random_state(rng)
                } else {
                    next
                }
            }
        };
    }
    Dataset::from_columns(inputs, outputs, Some(vec![2; n]))
}

/// Edge errors of an inferred adjacency against the true supports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeErrors {
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_edges: usize,
    /// `|missed| / |true edges|` (0 when there are no true edges).
    pub fnr: f64,
    /// `|spurious| / |true non-edges|`; self-pairs are not counted as
    /// non-edges unless self-loops are allowed, but spurious self-edges are
    /// still counted as errors.
    pub fpr: f64,
}

pub fn edge_errors(
    truth: &[Vec<usize>],
    inferred: &AdjacencyMatrix,
    include_self: bool,
) -> EdgeErrors {
    let n = truth.len();
    let mut true_edges = 0;
    let mut fp = 0;
    let mut fn_ = 0;
    for (i, parents) in truth.iter().enumerate() {
        true_edges += parents.len();
        for j in 0..n {
            match (parents.contains(&j), inferred.get(i, j)) {
                (true, false) => fn_ += 1,
                (false, true) => fp += 1,
                _ => {}
            }
        }
    }
    let pairs = if include_self {
        n * n
    } else {
        n * n.saturating_sub(1)
    };
    let non_edges = pairs.saturating_sub(true_edges);
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    EdgeErrors {
        false_positives: fp,
        false_negatives: fn_,
        true_edges,
        fnr: ratio(fn_, true_edges),
        fpr: ratio(fp, non_edges),
    }
}

struct Realization {
    truth: Vec<Vec<usize>>,
    data: Dataset,
    significance: SignificanceConfig,
}

fn realize(n: usize, t_max: usize, cfg: &NetworkBenchConfig, path: &[u64]) -> Result<Realization> {
    let mut rng = stream(cfg.seed, path);
    let mut net = random_network(n, cfg.degree, cfg.include_self, &mut rng)?;
    if cfg.noise > 0.0 {
        net = net.with_noise(vec![cfg.noise; n])?;
    }
    let truth = (0..n)
        .map(|i| exact_support(&net, i))
        .collect::<Result<Vec<_>>>()?;
    let data = sample_transitions(&net, t_max, cfg.sampling, &mut rng)?;
    let mut with_tag = path.to_vec();
    with_tag.push(u64::MAX);
    let significance = cfg
        .significance
        .clone()
        .with_seed(derive(cfg.seed, &with_tag));
    Ok(Realization {
        truth,
        data,
        significance,
    })
}

fn check_grid(name: &str, grid: &[usize]) -> Result<()> {
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!(
            "{name} must be a non-empty ascending list of positive values"
        )));
    }
    Ok(())
}

fn check_reps(reps: usize) -> Result<()> {
    if reps == 0 {
        return Err(Error::invalid("at least one realization is required"));
    }
    Ok(())
}

/// For each network size in `n_grid`, the smallest number of transitions in
/// `t_grid` at which the inferred adjacency matches the true supports
/// exactly, averaged over `reps` random networks. Realizations that never
/// match are recorded at the largest grid value and counted as censored.
pub fn bench_min_samples(
    n_grid: &[usize],
    reps: usize,
    t_grid: &[usize],
    cfg: &NetworkBenchConfig,
) -> Result<BenchResult> {
    check_reps(reps)?;
    check_grid("n grid", n_grid)?;
    check_grid("T grid", t_grid)?;
    cfg.significance.validate()?;
    let t_max = *t_grid.last().unwrap();
    let mut points = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let runs = (0..reps)
            .into_par_iter()
            .map(|r| -> Result<(usize, bool)> {
                let real = realize(n, t_max, cfg, &[MIN_SAMPLES, n as u64, r as u64])?;
                for &t in t_grid {
                    let head = real.data.head(t)?;
                    let inferred = infer_network(&head, &real.significance)?;
                    if edge_errors(&real.truth, &inferred.adjacency, cfg.include_self)
                        == exact(&real.truth)
                    {
                        return Ok((t, false));
                    }
                }
                Ok((t_max, true))
            })
            .collect::<Result<Vec<_>>>()?;
        let values: Vec<f64> = runs.iter().map(|&(t, _)| t as f64).collect();
        let censored = runs.iter().filter(|r| r.1).count();
        points.push(BenchPoint {
            parameters: vec![n as f64],
            metrics: vec![
                Summary::of(&values),
                Summary::of(&[censored as f64 / reps as f64]),
            ],
            censored,
        });
    }
    Ok(BenchResult {
        benchmark: "min-samples".into(),
        parameter_names: vec!["n".into()],
        metric_names: vec!["min_t".into(), "censored_fraction".into()],
        points,
        realizations: reps,
        master_seed: cfg.seed,
    })
}

fn exact(truth: &[Vec<usize>]) -> EdgeErrors {
    EdgeErrors {
        false_positives: 0,
        false_negatives: 0,
        true_edges: truth.iter().map(Vec::len).sum(),
        fnr: 0.0,
        fpr: 0.0,
    }
}

/// Mean false-negative and false-positive edge ratios of `n`-node random
/// networks at each data length in `t_grid`, over `reps` networks. Each
/// network's data are nested: the first `T` transitions are used at grid
/// point `T`.
pub fn bench_error_ratios(
    n: usize,
    t_grid: &[usize],
    reps: usize,
    cfg: &NetworkBenchConfig,
) -> Result<BenchResult> {
    check_reps(reps)?;
    check_grid("T grid", t_grid)?;
    cfg.significance.validate()?;
    let t_max = *t_grid.last().unwrap();
    let runs = (0..reps)
        .into_par_iter()
        .map(|r| -> Result<Vec<EdgeErrors>> {
            let real = realize(n, t_max, cfg, &[ERROR_RATIOS, n as u64, r as u64])?;
            t_grid
                .iter()
                .map(|&t| {
                    let inferred = infer_network(&real.data.head(t)?, &real.significance)?;
                    Ok(edge_errors(
                        &real.truth,
                        &inferred.adjacency,
                        cfg.include_self,
                    ))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let points = t_grid
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let column =
                |f: fn(&EdgeErrors) -> f64| -> Vec<f64> { runs.iter().map(|r| f(&r[k])).collect() };
            BenchPoint {
                parameters: vec![t as f64],
                metrics: vec![
                    Summary::of(&column(|e| e.fpr)),
                    Summary::of(&column(|e| e.fnr)),
                    Summary::of(&column(|e| e.false_positives as f64)),
                    Summary::of(&column(|e| e.false_negatives as f64)),
                    Summary::of(&column(|e| {
                        u8::from(e.false_positives + e.false_negatives == 0) as f64
                    })),
                ],
                censored: 0,
            }
        })
        .collect();
    Ok(BenchResult {
        benchmark: "error-ratios".into(),
        parameter_names: vec!["t".into()],
        metric_names: vec![
            "fpr".into(),
            "fnr".into(),
            "fp".into(),
            "fn".into(),
            "exact".into(),
        ],
        points,
        realizations: reps,
        master_seed: cfg.seed,
    })
}

/// False positives and negatives of inference on random subsamples of
/// `data`, relative to the parents inferred from all rows. Subsamples are
/// drawn without replacement.
pub fn downsample_stability(
    data: &Dataset,
    target: usize,
    sizes: &[usize],
    reps: usize,
    cfg: &SignificanceConfig,
    seed: u64,
) -> Result<BenchResult> {
    check_reps(reps)?;
    data.check(Column::Output(target))?;
    if let Some(&s) = sizes.iter().find(|&&s| s == 0 || s > data.rows()) {
        return Err(Error::invalid(format!(
            "subsample size {s} outside 1..={}",
            data.rows()
        )));
    }
    let full = infer_function(data, target, cfg)?.parents;
    let mut points = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let runs = (0..reps)
            .into_par_iter()
            .map(|r| -> Result<(f64, f64)> {
                let path = [DOWNSAMPLE, target as u64, size as u64, r as u64];
                let mut rng = stream(seed, &path);
                let mut rows = index::sample(&mut rng, data.rows(), size).into_vec();
                rows.sort_unstable();
                let sub = data.select_rows(&rows)?;
                let c = cfg.clone().with_seed(derive(
                    seed,
                    &[DOWNSAMPLE, target as u64, size as u64, r as u64, u64::MAX],
                ));
                let got = infer_function(&sub, target, &c)?.parents;
                let fp = got.iter().filter(|p| !full.contains(p)).count();
                let fn_ = full.iter().filter(|p| !got.contains(p)).count();
                Ok((fp as f64, fn_ as f64))
            })
            .collect::<Result<Vec<_>>>()?;
        let fps: Vec<f64> = runs.iter().map(|r| r.0).collect();
        let fns: Vec<f64> = runs.iter().map(|r| r.1).collect();
        points.push(BenchPoint {
            parameters: vec![size as f64],
            metrics: vec![Summary::of(&fps), Summary::of(&fns)],
            censored: 0,
        });
    }
    Ok(BenchResult {
        benchmark: "downsample".into(),
        parameter_names: vec!["size".into()],
        metric_names: vec!["fp".into(), "fn".into()],
        points,
        realizations: reps,
        master_seed: seed,
    })
}

/// Prediction quality on held-out rows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub rows: usize,
    pub accuracy: f64,
    /// Fraction of `Y = 0` rows predicted 1.
    pub fpr: f64,
    /// Fraction of `Y = 1` rows predicted 0.
    pub fnr: f64,
    /// Rows whose parent pattern was never seen in training.
    pub unseen: usize,
}

/// Scores `model` on `test`, matching parent and target columns by name.
/// Unseen patterns follow `na`, or the training majority class when `na`
/// is `None`.
pub fn eval_accuracy(
    model: &InferenceResult,
    test: &Dataset,
    na: Option<NaPolicy>,
) -> Result<Evaluation> {
    let cols = model
        .parent_names
        .iter()
        .map(|name| {
            test.input_index(name)
                .ok_or_else(|| Error::InvalidColumn(name.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let target = test
        .output_index(&model.target_name)
        .ok_or_else(|| Error::InvalidColumn(model.target_name.clone()))?;
    if let Some(j) = cols.iter().find(|&&j| test.alphabet(Column::Input(j)) > 2) {
        return Err(Error::NonBoolean {
            column: test.name(Column::Input(*j)).to_string(),
            alphabet: test.alphabet(Column::Input(*j)),
        });
    }
    let y = test.output(target);
    let (mut correct, mut fp, mut fn_, mut neg, mut unseen) = (0, 0, 0, 0, 0);
    for (t, &label) in y.iter().enumerate() {
        let bits: Vec<bool> = cols.iter().map(|&j| test.input(j)[t] == 1).collect();
        let entry = model.table.entry(crate::boolean::pattern_index(&bits));
        let predicted = match (entry, na) {
            (Some(v), _) => v,
            (None, policy) => {
                unseen += 1;
                match policy {
                    None => model.majority,
                    Some(p) => model.table.eval(&bits, p)?,
                }
            }
        };
        let actual = label == 1;
        neg += usize::from(!actual);
        correct += usize::from(predicted == actual);
        fp += usize::from(predicted && !actual);
        fn_ += usize::from(!predicted && actual);
    }
    let pos = test.rows() - neg;
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Ok(Evaluation {
        rows: test.rows(),
        accuracy: ratio(correct, test.rows()),
        fpr: ratio(fp, neg),
        fnr: ratio(fn_, pos),
        unseen,
    })
}

/// `[H(Y), H(Y | X_o1), H(Y | X_o1, X_o2), ...]` for input columns `order`.
pub fn uncertainty_curve(data: &Dataset, target: usize, order: &[usize]) -> Result<Vec<f64>> {
    let y = ColumnSet::output(data, target)?;
    (0..=order.len())
        .map(|k| conditional_entropy(&y, &ColumnSet::inputs(data, &order[..k])?))
        .collect()
}
