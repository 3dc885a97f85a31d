use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bocse::bench::{
    bench_error_ratios, bench_min_samples, downsample_stability, eval_accuracy, uncertainty_curve,
    NetworkBenchConfig, Sampling,
};
use bocse::boolean::random_network;
use bocse::datasets::{
    load_acute_inflammations, load_lendingclub_with, load_spect_file, load_tictactoe,
    LabeledDataset, LendingClubSchema,
};
use bocse::inference::{forward_select, infer_function, infer_network, NullSampler};
use bocse::{seed, BooleanNetwork, Column, Dataset, InferenceResult, NaPolicy, SignificanceConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;

/// Boolean network inference by causation-entropy search.
///
/// Column arguments accept a column name or a 1-based position.
#[derive(Parser, Debug)]
#[command(name = "bocse", version, about)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Infer parents and truth tables from a dataset file
    Infer(InferArgs),
    /// Simulate a network from a JSON file
    Simulate(SimulateArgs),
    /// Generate a random K-in-degree network
    Generate(GenerateArgs),
    /// Run a benchmark
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Score a fitted model on held-out data
    Eval(EvalArgs),
    /// Conditional entropy of an output along an ordered list of inputs
    Curve(CurveArgs),
    /// Convert a raw case-study file to the dataset format
    Convert(ConvertArgs),
}

#[derive(Args, Debug, Clone)]
struct TestArgs {
    /// Significance level of the forward stage
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Significance level of the backward stage (default: --alpha)
    #[arg(long)]
    backward_alpha: Option<f64>,
    /// Shuffles per significance test
    #[arg(long, default_value_t = 1000)]
    permutations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    max_parents: Option<usize>,
    #[arg(long, value_enum, default_value_t = NullArg::Table)]
    null_sampler: NullArg,
}

impl TestArgs {
    fn config(&self) -> SignificanceConfig {
        SignificanceConfig {
            alpha: self.alpha,
            backward_alpha: self.backward_alpha,
            permutations: self.permutations,
            master_seed: self.seed,
            max_parents: self.max_parents,
            null_sampler: match self.null_sampler {
                NullArg::Table => NullSampler::Table,
                NullArg::Shuffle => NullSampler::Shuffle,
            },
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NullArg {
    Table,
    Shuffle,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum InferFormat {
    Json,
    Report,
}

#[derive(Args, Debug)]
struct InferArgs {
    #[arg(long)]
    data: PathBuf,
    /// Output columns to infer; all when omitted
    #[arg(long, value_delimiter = ',')]
    target: Vec<String>,
    /// Treat the file as state transitions and assemble a network
    #[arg(long, conflicts_with = "target")]
    network: bool,
    /// Only run forward selection (allows non-Boolean inputs)
    #[arg(long, conflicts_with = "network")]
    forward_only: bool,
    #[command(flatten)]
    test: TestArgs,
    #[arg(long, value_enum, default_value_t = InferFormat::Json)]
    format: InferFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Network JSON as written by `generate`
    #[arg(long)]
    net: PathBuf,
    /// Initial state as a bit string, or "random"
    #[arg(long, default_value = "random")]
    init: String,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// csv: one state per line; dataset: transition pairs for `infer`
    #[arg(long, value_enum, default_value_t = SeriesFormat::Csv)]
    format: SeriesFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SeriesFormat {
    Csv,
    Dataset,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    allow_self_loops: bool,
    /// Per-node flip probability
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct NetworkBenchArgs {
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[arg(long)]
    allow_self_loops: bool,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, value_enum, default_value_t = SamplingArg::Restart)]
    sampling: SamplingArg,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    t_grid: Vec<usize>,
    #[command(flatten)]
    test: TestArgs,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl NetworkBenchArgs {
    fn config(&self) -> NetworkBenchConfig {
        NetworkBenchConfig {
            degree: self.degree,
            include_self: self.allow_self_loops,
            noise: self.noise,
            sampling: match self.sampling {
                SamplingArg::Restart => Sampling::Restart,
                SamplingArg::Trajectory => Sampling::Trajectory,
            },
            significance: self.test.config(),
            seed: self.test.seed,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SamplingArg {
    Restart,
    Trajectory,
}

#[derive(Subcommand, Debug)]
enum BenchCommand {
    /// Smallest data length that recovers the exact network, per size
    MinSamples {
        #[arg(long, value_delimiter = ',', required = true)]
        n_grid: Vec<usize>,
        #[command(flatten)]
        common: NetworkBenchArgs,
    },
    /// False positive and negative edge ratios against data length
    ErrorRatios {
        #[arg(long)]
        nodes: usize,
        #[command(flatten)]
        common: NetworkBenchArgs,
    },
    /// Stability of one output's parents under row subsampling
    Downsample {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[command(flatten)]
        test: TestArgs,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NaArg {
    /// Predict the training majority class
    Majority,
    /// Fail on the first unseen pattern
    Error,
    Zero,
    One,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Single-output result JSON written by `infer --target`
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long, value_enum, default_value_t = NaArg::Majority)]
    na_policy: NaArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    target: String,
    /// Input columns in order; the forward-selection order when omitted
    #[arg(long, value_delimiter = ',')]
    order: Vec<String>,
    #[command(flatten)]
    test: TestArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Source {
    Acute,
    Spect,
    Tictactoe,
    Lendingclub,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    source: Source,
    /// Raw input file
    #[arg(long)]
    input: PathBuf,
    /// LendingClub loan-to-income threshold (default: median ratio)
    #[arg(long)]
    threshold: Option<f64>,
    /// LendingClub column mapping JSON
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Column notes JSON (default: stderr)
    #[arg(long)]
    notes: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(bocse::Error),
}

impl From<bocse::Error> for Failure {
    fn from(e: bocse::Error) -> Self {
        Failure::Data(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Data(e.into())
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Infer(args) => infer(args),
        Command::Simulate(args) => simulate(args),
        Command::Generate(args) => generate(args),
        Command::Bench(cmd) => bench(cmd),
        Command::Eval(args) => eval(args),
        Command::Curve(args) => curve(args),
        Command::Convert(args) => convert(args),
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn with_path(path: &Path, e: bocse::Error) -> Failure {
    match e {
        bocse::Error::Io(io) => {
            Failure::Data(bocse::Error::Format(format!("{}: {io}", path.display())))
        }
        other => Failure::Data(other),
    }
}

fn load(path: &Path) -> CliResult<Dataset> {
    Dataset::load(path).map_err(|e| with_path(path, e))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| with_path(path, e.into()))
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// A column given by name, or by 1-based position.
fn resolve(names: &[String], given: &str, kind: &str) -> CliResult<usize> {
    if let Some(i) = names.iter().position(|n| n == given) {
        return Ok(i);
    }
    match given.parse::<usize>() {
        Ok(k) if (1..=names.len()).contains(&k) => Ok(k - 1),
        _ => Err(Failure::Data(bocse::Error::InvalidColumn(format!(
            "{kind} {given}"
        )))),
    }
}

fn targets(data: &Dataset, given: &[String]) -> CliResult<Vec<usize>> {
    if given.is_empty() {
        return Ok((0..data.n_outputs()).collect());
    }
    given
        .iter()
        .map(|g| resolve(data.output_names(), g, "output"))
        .collect()
}

#[derive(Serialize)]
struct ForwardOnly {
    target: usize,
    target_name: String,
    forward: Vec<bocse::inference::ForwardStep>,
    selected_names: Vec<String>,
}

fn infer(args: InferArgs) -> CliResult {
    let data = load(&args.data)?;
    let cfg = args.test.config();
    cfg.validate()?;
    let out = args.out.as_deref();
    if args.network {
        let result = infer_network(&data, &cfg)?;
        let text = match args.format {
            InferFormat::Json => json(&result)?,
            InferFormat::Report => result.nodes.iter().map(|r| report(&data, r)).collect(),
        };
        return emit(out, &text);
    }
    let targets = targets(&data, &args.target)?;
    if args.forward_only {
        let results = targets
            .iter()
            .map(|&t| {
                let forward = forward_select(&data, t, &cfg)?;
                Ok(ForwardOnly {
                    target: t,
                    target_name: data.output_names()[t].clone(),
                    selected_names: forward
                        .iter()
                        .map(|s| data.input_names()[s.column].clone())
                        .collect(),
                    forward,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        return emit(out, &one_or_many(&results)?);
    }
    let results = targets
        .iter()
        .map(|&t| infer_function(&data, t, &cfg))
        .collect::<bocse::Result<Vec<_>>>()?;
    let text = match args.format {
        InferFormat::Json => one_or_many(&results)?,
        InferFormat::Report => results.iter().map(|r| report(&data, r)).collect(),
    };
    emit(out, &text)
}

fn one_or_many<T: Serialize>(items: &[T]) -> CliResult<String> {
    match items {
        [one] => json(one),
        many => json(&many),
    }
}

fn report(data: &Dataset, r: &InferenceResult) -> String {
    let mut s = format!("{}: parents [{}]", r.target_name, r.parent_names.join(", "));
    s.push_str(&format!(
        ", H(Y|parents) = {:.6} bits\n",
        r.residual_uncertainty
    ));
    for step in &r.forward {
        s.push_str(&format!(
            "  + {:<8} gain {:.6}  p {:.4}\n",
            data.input_names()[step.column],
            step.gain,
            step.p_value
        ));
    }
    s.push_str(&r.report());
    s.push('\n');
    s
}

fn parse_bits(s: &str, n: usize) -> CliResult<Vec<bool>> {
    let bits: Option<Vec<bool>> = s
        .chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect();
    match bits {
        Some(b) if b.len() == n => Ok(b),
        _ => Err(Failure::Usage(format!(
            "--init must be \"random\" or a string of {n} bits, got {s:?}"
        ))),
    }
}

fn simulate(args: SimulateArgs) -> CliResult {
    let net = BooleanNetwork::from_json(&read(&args.net)?)?;
    let mut rng = seed::stream(args.seed, &[]);
    let init = if args.init == "random" {
        (0..net.len()).map(|_| rng.random()).collect()
    } else {
        parse_bits(&args.init, net.len())?
    };
    let series = net.simulate(&init, args.steps, &mut rng)?;
    let text = match args.format {
        SeriesFormat::Dataset => Dataset::from_time_series(&series)?.to_text(),
        SeriesFormat::Csv => {
            let mut s = String::from("t");
            for i in 1..=net.len() {
                s.push_str(&format!(",x{i}"));
            }
            s.push('\n');
            for (t, state) in series.iter().enumerate() {
                s.push_str(&t.to_string());
                for &b in state {
                    s.push_str(if b { ",1" } else { ",0" });
                }
                s.push('\n');
            }
            s
        }
    };
    emit(args.out.as_deref(), &text)
}

fn generate(args: GenerateArgs) -> CliResult {
    let mut rng = seed::stream(args.seed, &[]);
    let net = random_network(args.nodes, args.degree, args.allow_self_loops, &mut rng)?;
    let net = if args.noise > 0.0 {
        net.with_noise(vec![args.noise; args.nodes])?
    } else {
        net
    };
    let mut text = net.to_json()?;
    text.push('\n');
    emit(args.out.as_deref(), &text)
}

fn write_bench(
    result: &bocse::bench::BenchResult,
    format: TableFormat,
    out: Option<&Path>,
) -> CliResult {
    let text = match format {
        TableFormat::Csv => result.to_csv()?,
        TableFormat::Json => json(result)?,
    };
    emit(out, &text)
}

fn bench(cmd: BenchCommand) -> CliResult {
    match cmd {
        BenchCommand::MinSamples { n_grid, common } => {
            let result = bench_min_samples(&n_grid, common.reps, &common.t_grid, &common.config())?;
            write_bench(&result, common.format, common.out.as_deref())
        }
        BenchCommand::ErrorRatios { nodes, common } => {
            let result = bench_error_ratios(nodes, &common.t_grid, common.reps, &common.config())?;
            write_bench(&result, common.format, common.out.as_deref())
        }
        BenchCommand::Downsample {
            data,
            target,
            sizes,
            reps,
            test,
            format,
            out,
        } => {
            let data = load(&data)?;
            let target = resolve(data.output_names(), &target, "output")?;
            let result =
                downsample_stability(&data, target, &sizes, reps, &test.config(), test.seed)?;
            write_bench(&result, format, out.as_deref())
        }
    }
}

fn eval(args: EvalArgs) -> CliResult {
    let model: InferenceResult = serde_json::from_str(&read(&args.model)?)?;
    let test = load(&args.test)?;
    let na = match args.na_policy {
        NaArg::Majority => None,
        NaArg::Error => Some(NaPolicy::Error),
        NaArg::Zero => Some(NaPolicy::Default0),
        NaArg::One => Some(NaPolicy::Default1),
    };
    let evaluation = eval_accuracy(&model, &test, na)?;
    emit(args.out.as_deref(), &json(&evaluation)?)
}

fn curve(args: CurveArgs) -> CliResult {
    let data = load(&args.data)?;
    let target = resolve(data.output_names(), &args.target, "output")?;
    let order = if args.order.is_empty() {
        forward_select(&data, target, &args.test.config())?
            .iter()
            .map(|s| s.column)
            .collect()
    } else {
        args.order
            .iter()
            .map(|g| resolve(data.input_names(), g, "input"))
            .collect::<CliResult<Vec<_>>>()?
    };
    let values = uncertainty_curve(&data, target, &order)?;
    let mut s = String::from("k,added,entropy_bits\n");
    for (k, h) in values.iter().enumerate() {
        let added = if k == 0 {
            ""
        } else {
            data.name(Column::Input(order[k - 1]))
        };
        s.push_str(&format!("{k},{added},{h:.12}\n"));
    }
    emit(args.out.as_deref(), &s)
}

fn convert(args: ConvertArgs) -> CliResult {
    if args.schema.is_some() && !matches!(args.source, Source::Lendingclub) {
        return Err(Failure::Usage(
            "--schema only applies to lendingclub".into(),
        ));
    }
    let schema = match &args.schema {
        Some(p) => LendingClubSchema::from_json(&read(p)?)?,
        None => LendingClubSchema::default(),
    };
    let input = &args.input;
    let labeled: LabeledDataset = match args.source {
        Source::Acute => load_acute_inflammations(input),
        Source::Tictactoe => load_tictactoe(input),
        Source::Spect => load_spect_file(input),
        Source::Lendingclub => load_lendingclub_with(input, args.threshold, &schema),
    }
    .map_err(|e| with_path(input, e))?;
    for w in &labeled.warnings {
        eprintln!("warning: {w}");
    }
    let notes = labeled.notes_json()?;
    match &args.notes {
        Some(p) => fs::write(p, notes + "\n")?,
        None => eprintln!("{notes}"),
    }
    emit(args.out.as_deref(), &labeled.data.to_text())
}
