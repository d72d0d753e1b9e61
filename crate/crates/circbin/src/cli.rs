//! The `circbin` command line.
//!
//! Exit codes: 0 success, 1 a validation gate failed, 2 invalid arguments,
//! 3 I/O or file-format failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use circbin_core::geometry::coherence;
use circbin_core::validation::{
    check_sufficient_condition, pair_distortions, sweep, ConditionCheck, ConditionConstants, PairDistortion,
};
use circbin_core::{BinaryCode, Operator, OperatorKind, PointSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::gates::{run_gates, GateResult, GateSizes};
use crate::io::{self, csv, generate_pointset, GenerateParams, IoError, Loaded, PointSetKind, ResultDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GATES_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
}

impl From<circbin_core::Error> for CliError {
    fn from(e: circbin_core::Error) -> Self {
        IoError::Core(e).into()
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Io(IoError::Core(circbin_core::Error::InvalidArgument(_))) => EXIT_USAGE,
            Self::Io(_) => EXIT_IO,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Everything that determines a run.
#[derive(Debug, Parser)]
#[command(
    name = "circbin",
    version,
    about = "Binary embeddings with structured random projections"
)]
pub struct RunConfig {
    /// Worker threads (default: all available cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic point set.
    Gen(GenArgs),
    /// Embed a point set into binary codes.
    Embed(EmbedArgs),
    /// All-pairs distortion of a set of codes.
    Eval(EvalArgs),
    /// Distortion experiments over a grid of k and δ.
    Sweep(SweepArgs),
    /// Run the frozen property gates.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// JSON copy of the result document.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    /// uniform_sphere, flat_signs, spiky or clustered_pairs.
    #[arg(long)]
    pub kind: PointSetKind,
    /// Dimension.
    #[arg(long)]
    pub n: usize,
    /// Number of points.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Angular distance inside clustered pairs, in units of π.
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,
    /// Noise scale of spiky points.
    #[arg(long, default_value_t = 0.01)]
    pub noise: f64,
    /// PSET1 file, or CSV when the name ends in `.csv`.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct OperatorArgs {
    /// gaussian, circulant or randomized.
    #[arg(long, default_value = "randomized")]
    pub kind: OperatorKind,
    /// Code length.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct EmbedArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub operator: OperatorArgs,
    /// Codes CSV, one ±1 row per point.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
    /// Serialized operator (default: `<out>.beop`).
    #[arg(long)]
    #[serde(skip)]
    pub operator_out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Codes CSV; without it codes are recomputed from the operator.
    #[arg(long)]
    pub codes: Option<PathBuf>,
    /// Operator sidecar written by `embed`; overrides the operator flags.
    #[arg(long)]
    pub operator: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: OperatorArgs,
    /// Target distortion reported against.
    #[arg(long, default_value_t = 0.15)]
    pub delta: f64,
    /// Format of --out (or standard output).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct PointSource {
    /// Point-set file; otherwise one is generated from --points, --n, --N, --seed.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Family of the generated point set.
    #[arg(long, default_value = "uniform_sphere")]
    pub points: PointSetKind,
    /// Dimension of the generated point set.
    #[arg(long)]
    pub n: Option<usize>,
    /// Size of the generated point set.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub count: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: PointSource,
    /// gaussian, circulant or randomized.
    #[arg(long, default_value = "randomized")]
    pub kind: OperatorKind,
    /// Code lengths, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
    /// Target distortions, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub delta: Vec<f64>,
    /// Operators drawn per cell.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Constant of the sample-size clause `k > c1 δ⁻³ ln N`.
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    /// Constant of the conditioning clause `c2 δ k ρ ln n < 1`.
    #[arg(long, default_value_t = 1.0)]
    pub c2: f64,
    /// Constant of the distortion clause `δ ≥ c3 k ρ`.
    #[arg(long, default_value_t = 1.0)]
    pub c3: f64,
    /// Format of --out.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reduced problem sizes.
    #[arg(long)]
    pub quick: bool,
    /// Format of --out (or standard output).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed configuration inside a pool of `--threads` workers.
pub fn execute(config: &RunConfig) -> Result<i32> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| match &config.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate(args) => cmd_validate(args),
    })
}

fn write_summary(output: &OutputArgs, doc: &ResultDocument) -> Result<()> {
    if let Some(path) = &output.summary {
        io::write_file(path, doc.to_json()?.as_bytes())?;
    }
    Ok(())
}

fn write_doc_or_table(format: Format, out: Option<&Path>, doc: &ResultDocument, table: &str) -> Result<()> {
    let text = match format {
        Format::Json => doc.to_json()?,
        Format::Csv => table.to_owned(),
    };
    match out {
        Some(path) => io::write_file(path, text.as_bytes())?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let params = GenerateParams {
        theta: args.theta,
        noise: args.noise,
    };
    let ps = generate_pointset(args.kind, args.n, args.count, args.seed, params)?;
    io::save_any(&ps, &args.out)?;
    let stats = coherence(&ps);
    println!(
        "rho_direct={} rho_cross={} theta_min={}",
        stats.rho_direct, stats.rho_cross, stats.theta_min
    );
    write_summary(&args.output, &ResultDocument::new("gen", args, stats)?)?;
    Ok(EXIT_OK)
}

fn require_k(k: Option<usize>) -> Result<usize> {
    k.ok_or_else(|| CliError::Usage("--k is required".into()))
}

fn default_operator_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".beop");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct EmbedResults {
    points: usize,
    code_len: usize,
    input_dim: usize,
}

pub fn cmd_embed(args: &EmbedArgs) -> Result<i32> {
    let loaded = io::load_any(&args.input)?;
    let ps = &loaded.points;
    let op = Operator::sample(
        args.operator.kind,
        ps.dim(),
        require_k(args.operator.k)?,
        args.operator.seed,
    )?;
    let codes = op.embed_all(ps)?;
    io::write_file(&args.out, csv::format_codes(&codes).as_bytes())?;
    let sidecar = args
        .operator_out
        .clone()
        .unwrap_or_else(|| default_operator_path(&args.out));
    io::write_file(&sidecar, &op.to_bytes()?)?;
    println!("embedded {} points into {} bits", ps.len(), op.code_len());
    let results = EmbedResults {
        points: ps.len(),
        code_len: op.code_len(),
        input_dim: ps.dim(),
    };
    write_summary(
        &args.output,
        &ResultDocument::new("embed", args, results)?.with_warnings(loaded.warnings()),
    )?;
    Ok(EXIT_OK)
}

/// Parameters that regenerate an operator exactly.
#[derive(Serialize)]
struct OperatorEcho {
    kind: OperatorKind,
    n: usize,
    k: usize,
    seed: u64,
}

impl From<&Operator> for OperatorEcho {
    fn from(op: &Operator) -> Self {
        Self {
            kind: op.kind(),
            n: op.input_dim(),
            k: op.code_len(),
            seed: op.seed(),
        }
    }
}

#[derive(Serialize)]
struct EvalResults {
    /// The operator behind the codes, when known.
    operator: Option<OperatorEcho>,
    pairs: usize,
    code_len: usize,
    max_distortion: f64,
    mean_distortion: f64,
    within_target: bool,
    per_pair: Vec<PairDistortion>,
}

fn eval_operator(args: &EvalArgs, ps: &PointSet) -> Result<Option<Operator>> {
    if let Some(path) = &args.operator {
        let op = Operator::from_bytes(&io::read_file(path)?).map_err(IoError::Core)?;
        if op.input_dim() != ps.dim() {
            return Err(CliError::Usage(format!(
                "operator expects dimension {}, point set has {}",
                op.input_dim(),
                ps.dim()
            )));
        }
        return Ok(Some(op));
    }
    match args.params.k {
        Some(k) => Ok(Some(Operator::sample(args.params.kind, ps.dim(), k, args.params.seed)?)),
        None => Ok(None),
    }
}

fn check_codes(codes: &[BinaryCode], ps: &PointSet, op: Option<&Operator>) -> Result<()> {
    if codes.len() != ps.len() {
        return Err(CliError::Usage(format!(
            "{} code rows for {} points",
            codes.len(),
            ps.len()
        )));
    }
    if let Some(len) = codes.first().map(BinaryCode::len) {
        if codes.iter().any(|c| c.len() != len) {
            return Err(CliError::Usage("code rows have different lengths".into()));
        }
        if let Some(op) = op.filter(|op| op.code_len() != len) {
            return Err(CliError::Usage(format!(
                "codes have {len} bits, operator produces {}",
                op.code_len()
            )));
        }
    }
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<i32> {
    let loaded = io::load_any(&args.input)?;
    let ps = &loaded.points;
    let op = eval_operator(args, ps)?;
    let codes = match (&args.codes, &op) {
        (Some(path), _) => {
            let text = String::from_utf8_lossy(&io::read_file(path)?).into_owned();
            let codes = csv::parse_codes(&text)?;
            check_codes(&codes, ps, op.as_ref())?;
            codes
        }
        (None, Some(op)) => op.embed_all(ps)?,
        (None, None) => return Err(CliError::Usage("eval needs --codes, --operator or --k".into())),
    };
    let per_pair = pair_distortions(ps, &codes)?;
    let max_distortion = per_pair.iter().map(|p| p.distortion).fold(0.0, f64::max);
    let mean_distortion = if per_pair.is_empty() {
        0.0
    } else {
        per_pair.iter().map(|p| p.distortion).sum::<f64>() / per_pair.len() as f64
    };
    let mut table = String::from("i,j,hamming,angular,distortion\n");
    for p in &per_pair {
        writeln!(table, "{},{},{},{},{}", p.i, p.j, p.hamming, p.angular, p.distortion).expect("writing to a String");
    }
    let results = EvalResults {
        operator: op.as_ref().map(OperatorEcho::from),
        pairs: per_pair.len(),
        code_len: codes.first().map_or(0, BinaryCode::len),
        max_distortion,
        mean_distortion,
        within_target: max_distortion <= args.delta,
        per_pair,
    };
    eprintln!("{} pairs, max distortion {max_distortion}", results.pairs);
    let doc = ResultDocument::new("eval", args, results)?.with_warnings(loaded.warnings());
    write_doc_or_table(args.format, args.out.as_deref(), &doc, &table)?;
    write_summary(&args.output, &doc)?;
    Ok(EXIT_OK)
}

fn resolve_points(source: &PointSource, seed: u64) -> Result<Loaded> {
    match (&source.input, source.n, source.count) {
        (Some(path), None, None) => Ok(io::load_any(path)?),
        (None, Some(n), Some(count)) => {
            let points = generate_pointset(source.points, n, count, seed, GenerateParams::default())?;
            Ok(Loaded {
                points,
                normalization: Default::default(),
            })
        }
        _ => Err(CliError::Usage("give either --input or both --n and --N".into())),
    }
}

/// Column order of the sweep CSV.
pub const SWEEP_COLUMNS: &str =
    "k,delta,cell_seed,trials,success_fraction,max_distortion,mean_distortion,mean_of_max,condition_satisfied";

#[derive(Serialize)]
struct SweepCell {
    k: usize,
    delta: f64,
    cell_seed: u64,
    success_fraction: f64,
    max_distortion: f64,
    mean_distortion: f64,
    mean_of_max: f64,
    condition: ConditionCheck,
}

#[derive(Serialize)]
struct SweepResults {
    n: usize,
    points: usize,
    rho_direct: f64,
    rho_cross: f64,
    cells: Vec<SweepCell>,
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    if args.k.is_empty() || args.delta.is_empty() {
        return Err(CliError::Usage("--k and --delta need at least one value".into()));
    }
    let loaded = resolve_points(&args.source, args.seed)?;
    let ps = &loaded.points;
    let stats = coherence(ps);
    let constants = ConditionConstants {
        c1: args.c1,
        c2: args.c2,
        c3: args.c3,
    };
    let rows = sweep(ps, args.kind, &args.k, &args.delta, args.trials, args.seed)?;
    let mut table = format!("{SWEEP_COLUMNS}\n");
    let cells: Vec<SweepCell> = rows
        .iter()
        .map(|row| {
            let condition =
                check_sufficient_condition(ps.dim(), row.k, ps.len() as f64, row.delta, stats.rho_cross, constants);
            let r = &row.report;
            writeln!(
                table,
                "{},{},{},{},{},{},{},{},{}",
                row.k,
                row.delta,
                row.cell_seed,
                r.trials,
                r.success_fraction,
                r.max_distortion,
                r.mean_distortion,
                r.mean_of_max(),
                condition.satisfied
            )
            .expect("writing to a String");
            SweepCell {
                k: row.k,
                delta: row.delta,
                cell_seed: row.cell_seed,
                success_fraction: r.success_fraction,
                max_distortion: r.max_distortion,
                mean_distortion: r.mean_distortion,
                mean_of_max: r.mean_of_max(),
                condition,
            }
        })
        .collect();
    eprintln!("{} cells", cells.len());
    let results = SweepResults {
        n: ps.dim(),
        points: ps.len(),
        rho_direct: stats.rho_direct,
        rho_cross: stats.rho_cross,
        cells,
    };
    let doc = ResultDocument::new("sweep", args, results)?.with_warnings(loaded.warnings());
    write_doc_or_table(args.format, Some(&args.out), &doc, &table)?;
    write_summary(&args.output, &doc)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ValidateResults {
    passed: bool,
    sizes: GateSizes,
    gates: Vec<GateResult>,
}

pub fn cmd_validate(args: &ValidateArgs) -> Result<i32> {
    let sizes = if args.quick { GateSizes::QUICK } else { GateSizes::FULL };
    let gates = run_gates(&sizes, args.seed)?;
    for gate in &gates {
        eprintln!("{gate}");
    }
    let passed = gates.iter().all(|g| g.passed);
    let mut table = String::from("name,measured,comparison,threshold,passed\n");
    for g in &gates {
        writeln!(
            table,
            "{},{},{},{},{}",
            g.name, g.measured, g.comparison, g.threshold, g.passed
        )
        .expect("writing to a String");
    }
    let doc = ResultDocument::new("validate", args, ValidateResults { passed, sizes, gates })?;
    write_doc_or_table(args.format, args.out.as_deref(), &doc, &table)?;
    write_summary(&args.output, &doc)?;
    Ok(if passed { EXIT_OK } else { EXIT_GATES_FAILED })
}
