//! Command-line interface.
//!
//! Every subcommand prints one JSON report (or a CSV table for `convolve
//! --format csv`) to standard output, or to `--output`. A relative output
//! path is resolved against `SCHURORDER_OUT_DIR` when that variable is set.
//!
//! Exit codes: 0 on success, 2 when a verdict is inconsistent or a
//! hypothesis fails, 1 on usage, domain and numerical errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use schurorder_core::distributions::{log_concavity_classify, lr_compare};
use schurorder_core::harness::{run_counterexample, Preset, ScenarioOutcome, SuiteConfig};
use schurorder_core::majorization::{check_majorize, t_transform_chain, DEFAULT_TOL};
use schurorder_core::orders::{convolve_weighted, st_compare_exact, ConvolutionConfig};
use schurorder_core::transforms::{check_convexity_conditions, classify_pq};
use schurorder_core::{LogGrid, WeightVector};
use serde::Serialize;

use crate::format::{
    load_scenarios, DistRepr, MapRepr, ModeRepr, ScenarioFile, TransformRepr, VariantRepr, DEFAULT_DELTA,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};
use crate::report::{ConditionsOut, CounterexampleOut, Envelope, LcOut, LrOut, ScenarioRecord, SummaryOut, VerdictOut};
use crate::runner::{run_all, run_suite};
use crate::AppError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

/// Environment variable naming the directory for relative `--output` paths.
pub const OUT_DIR_ENV: &str = "SCHURORDER_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "schurorder", version, about = "Majorization and stochastic-order checks for weighted sums")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Report format; csv is available for convolve only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Master seed [default: 42]; for verify it overrides the seed in the file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    M,
    Sub,
    Sup,
}

impl From<ModeArg> for ModeRepr {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::M => ModeRepr::Full,
            ModeArg::Sub => ModeRepr::Sub,
            ModeArg::Sup => ModeRepr::Sup,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Convex,
    Concave,
}

impl From<VariantArg> for VariantRepr {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Convex => VariantRepr::Convex,
            VariantArg::Concave => VariantRepr::Concave,
        }
    }
}

fn transform_arg(s: &str) -> Result<TransformRepr, String> {
    TransformRepr::parse(s).map_err(|e| e.to_string())
}

fn dist_arg(s: &str) -> Result<DistRepr, String> {
    DistRepr::parse(s).map_err(|e| e.to_string())
}

fn map_arg(s: &str) -> Result<MapRepr, String> {
    MapRepr::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide x ⪯ y in the chosen majorization mode.
    Major(MajorArgs),
    /// T-transform chain from x up to a vector y that majorizes it.
    Chain(ChainArgs),
    /// Check the sign and product conditions for a transform pair on a grid.
    Conditions(ConditionsArgs),
    /// Region A0–A3 of a power pair (p, q).
    Classify(ClassifyArgs),
    /// Log-concavity of a power map of a distribution.
    Logconcave(LogconcaveArgs),
    /// Likelihood-ratio comparison of two distributions.
    Lr(LrArgs),
    /// Cdf of a weighted sum by numerical convolution.
    Convolve(ConvolveArgs),
    /// Verify the scenarios in one or more scenario files.
    Verify(VerifyArgs),
    /// Single-crossing example for gamma weights that differ in two places.
    Counterexample(CounterexampleArgs),
    /// Generate and verify a randomized suite across presets.
    Suite(SuiteArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct MajorArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub y: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::M)]
    #[serde(skip)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ChainArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub y: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConditionsArgs {
    /// exp, logshift or power:R
    #[arg(long, value_parser = transform_arg)]
    pub phi: TransformRepr,
    /// exp, logshift or power:R
    #[arg(long, value_parser = transform_arg)]
    pub psi: TransformRepr,
    #[arg(long, value_enum)]
    #[serde(skip)]
    pub variant: VariantArg,
    #[arg(long, default_value_t = 1e-3)]
    pub lo: f64,
    #[arg(long, default_value_t = 1e3)]
    pub hi: f64,
    #[arg(long, default_value_t = 64)]
    pub points: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct LogconcaveArgs {
    /// gengamma:P,A,L or invgengamma:P,A,L
    #[arg(long, value_parser = dist_arg)]
    pub dist: DistRepr,
    /// identity, log or power:R
    #[arg(long, value_parser = map_arg, default_value = "identity")]
    pub map: MapRepr,
}

#[derive(Debug, Args, Serialize)]
pub struct LrArgs {
    #[arg(long, value_parser = dist_arg)]
    pub d1: DistRepr,
    #[arg(long, value_parser = dist_arg)]
    pub d2: DistRepr,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvolveArgs {
    /// One per summand, in order; repeat the flag.
    #[arg(long = "dist", value_parser = dist_arg, required = true)]
    pub dists: Vec<DistRepr>,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub weights: Vec<f64>,
    /// Second weight vector; adds its cdf and an exact comparison.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub against: Option<Vec<f64>>,
    /// Tolerance of the exact comparison.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub refine_tol: f64,
    #[arg(long, default_value_t = 8)]
    pub max_levels: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Scenario files (one object or an array of objects each).
    #[arg(long = "scenario", required = true)]
    pub scenarios: Vec<PathBuf>,
    /// Override the sample size in every scenario.
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Override the confidence parameter in every scenario.
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub b: Vec<f64>,
    /// Monte Carlo samples per sum; 0 skips the empirical comparison.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub n_samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 24)]
    pub per_preset: usize,
    /// Comma-separated preset names [default: all].
    #[arg(long, value_delimiter = ',')]
    pub presets: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub n_samples: usize,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    /// Largest vector length; lengths are drawn from 2..=max_n.
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    /// Worker threads [default: all cores]. Does not affect results.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

/// Text to emit and the exit code to return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub text: String,
    pub code: i32,
    /// Where to write `text`; standard output when `None`.
    pub output: Option<PathBuf>,
}

/// Parses and executes without touching standard streams or files.
/// `--help` and `--version` come back as exit-0 invocations.
pub fn invoke<I, T>(argv: I) -> Result<Invocation, AppError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            return Ok(Invocation { text: e.render().to_string(), code: EXIT_OK, output: None });
        }
        Err(e) => return Err(AppError::Usage(e.render().to_string().trim_end().to_string())),
    };
    execute(&cli)
}

/// Entry point for the binary: runs, writes the report, returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match invoke(argv) {
        Ok(inv) => inv,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match &inv.output {
        None => {
            print!("{}", inv.text);
            inv.code
        }
        Some(path) => match write_output(path, &inv.text) {
            Ok(()) => inv.code,
            Err(e) => {
                eprintln!("{e}");
                e.exit_code()
            }
        },
    }
}

/// A relative `path` is placed under `SCHURORDER_OUT_DIR` when it is set.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), AppError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| AppError::Io(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(path, text).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))
}

/// Resolved configuration embedded in every report.
#[derive(Serialize)]
struct Config<'a, A: Serialize> {
    #[serde(flatten)]
    args: &'a A,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<ModeRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    variant: Option<VariantRepr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    format: Format,
}

pub fn execute(cli: &Cli) -> Result<Invocation, AppError> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Convolve(_)) {
        return Err(AppError::Usage("--format csv is only available for convolve".into()));
    }
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let (text, code) = match &cli.command {
        Command::Major(a) => {
            let mode: ModeRepr = a.mode.into();
            let holds =
                check_majorize(&WeightVector::new(a.x.clone())?, &WeightVector::new(a.y.clone())?, mode.into(), a.tol)?;
            (envelope("major", a, (Some(mode), None, None), cli.format, &MajorOut { holds }), EXIT_OK)
        }
        Command::Chain(a) => {
            let chain = t_transform_chain(&WeightVector::new(a.x.clone())?, &WeightVector::new(a.y.clone())?)?;
            let out = ChainOut {
                transforms: chain.transforms(),
                steps: chain.steps().iter().map(|s| s.values().to_vec()).collect(),
            };
            (envelope("chain", a, (None, None, None), cli.format, &out), EXIT_OK)
        }
        Command::Conditions(a) => {
            let grid = LogGrid::new(a.lo, a.hi, a.points)?;
            let variant: VariantRepr = a.variant.into();
            let r = check_convexity_conditions(&a.phi.build()?, &a.psi.build()?, variant.into(), &grid)?;
            let out = ConditionsOut::from(&r);
            (envelope("conditions", a, (None, Some(variant), None), cli.format, &out), EXIT_OK)
        }
        Command::Classify(a) => {
            let region = classify_pq(a.p, a.q)?;
            let out = ClassifyOut { region: region.name(), convex_case: region.is_convex_case() };
            (envelope("classify", a, (None, None, None), cli.format, &out), EXIT_OK)
        }
        Command::Logconcave(a) => {
            let r = log_concavity_classify(&a.dist.build()?, a.map.into())?;
            (envelope("logconcave", a, (None, None, None), cli.format, &LcOut::from(&r)), EXIT_OK)
        }
        Command::Lr(a) => {
            let r = lr_compare(&a.d1.build()?, &a.d2.build()?)?;
            (envelope("lr", a, (None, None, None), cli.format, &LrOut::from(&r)), EXIT_OK)
        }
        Command::Convolve(a) => (convolve(a, cli.format)?, EXIT_OK),
        Command::Verify(a) => verify(a, cli.seed, cli.format)?,
        Command::Counterexample(a) => {
            let r = run_counterexample(
                a.alpha,
                &WeightVector::new(a.a.clone())?,
                &WeightVector::new(a.b.clone())?,
                a.n_samples,
                seed,
            )?;
            let code = if r.demonstrated { EXIT_OK } else { EXIT_INCONSISTENT };
            let out = CounterexampleOut::from(&r);
            (envelope("counterexample", a, (None, None, Some(seed)), cli.format, &out), code)
        }
        Command::Suite(a) => suite(a, seed, cli.format)?,
    };
    Ok(Invocation { text, code, output: cli.output.as_deref().map(resolve_output) })
}

fn envelope<A: Serialize, R: Serialize>(
    command: &str,
    args: &A,
    (mode, variant, seed): (Option<ModeRepr>, Option<VariantRepr>, Option<u64>),
    format: Format,
    result: &R,
) -> String {
    let config = Config { args, mode, variant, seed, format };
    Envelope::new(command, &config, result).to_json()
}

#[derive(Serialize)]
struct MajorOut {
    holds: bool,
}

#[derive(Serialize)]
struct ChainOut {
    transforms: usize,
    steps: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct ClassifyOut {
    region: &'static str,
    convex_case: bool,
}

#[derive(Serialize)]
struct CdfOut {
    step: Option<f64>,
    x: Vec<f64>,
    cdf: Vec<f64>,
}

#[derive(Serialize)]
struct ConvolveOut {
    a: CdfOut,
    b: Option<CdfOut>,
    verdict: Option<VerdictOut>,
}

fn convolve(a: &ConvolveArgs, format: Format) -> Result<String, AppError> {
    let dists = a.dists.iter().map(|d| d.build()).collect::<Result<Vec<_>, _>>()?;
    if dists.len() != a.weights.len() {
        return Err(AppError::Usage(format!("{} distributions but {} weights", dists.len(), a.weights.len())));
    }
    if let Some(b) = &a.against {
        if b.len() != dists.len() {
            return Err(AppError::Usage(format!("--against has {} weights, expected {}", b.len(), dists.len())));
        }
    }
    let cfg = ConvolutionConfig { refine_tol: a.refine_tol, max_levels: a.max_levels, ..ConvolutionConfig::default() };
    let fa = convolve_weighted(&dists, &a.weights, &cfg)?;
    let fb = a.against.as_ref().map(|b| convolve_weighted(&dists, b, &cfg)).transpose()?;
    if format == Format::Csv {
        return Ok(match &fb {
            None => fa.to_csv(),
            Some(fb) => {
                let mut out = String::from("x,F_a,F_b\n");
                for (&x, &f) in fa.grid().iter().zip(fa.values()) {
                    let _ = writeln!(out, "{x},{f},{}", fb.eval(x));
                }
                out
            }
        });
    }
    let verdict = fb.as_ref().map(|fb| st_compare_exact(&fa, fb, a.tol)).transpose()?;
    let cdf =
        |f: &schurorder_core::NumericCdf| CdfOut { step: f.step(), x: f.grid().to_vec(), cdf: f.values().to_vec() };
    let out = ConvolveOut { a: cdf(&fa), b: fb.as_ref().map(cdf), verdict: verdict.as_ref().map(Into::into) };
    Ok(envelope("convolve", a, (None, None, None), format, &out))
}

#[derive(Serialize)]
struct VerifyConfig<'a> {
    files: &'a [PathBuf],
    n_samples: Option<usize>,
    delta: Option<f64>,
    seed: Option<u64>,
    format: Format,
}

#[derive(Serialize)]
struct VerifyOut {
    all_consistent: bool,
    records: Vec<ScenarioRecord>,
}

fn verify(a: &VerifyArgs, seed: Option<u64>, format: Format) -> Result<(String, i32), AppError> {
    let mut files: Vec<ScenarioFile> = Vec::new();
    for path in &a.scenarios {
        files.extend(load_scenarios(path)?);
    }
    for f in &mut files {
        if let Some(n) = a.n_samples {
            f.n_samples = n;
        }
        if let Some(d) = a.delta {
            f.delta = d;
        }
        if let Some(s) = seed {
            f.seed = s;
        }
    }
    let scenarios = files.iter().map(ScenarioFile::build).collect::<Result<Vec<_>, _>>()?;
    let outcomes = run_all(&scenarios);
    let code = outcome_code(&outcomes, true);
    let records: Vec<ScenarioRecord> =
        files.into_iter().zip(&outcomes).map(|(scenario, o)| ScenarioRecord { scenario, outcome: o.into() }).collect();
    let all_consistent = outcomes.iter().all(|o| matches!(o, ScenarioOutcome::Verified(r) if r.consistent));
    let config = VerifyConfig { files: &a.scenarios, n_samples: a.n_samples, delta: a.delta, seed, format };
    Ok((Envelope::new("verify", &config, VerifyOut { all_consistent, records }).to_json(), code))
}

/// Failed runs map to 1; inconsistent verdicts map to 2, and so do skipped
/// scenarios when `skips_fail` is set.
fn outcome_code(outcomes: &[ScenarioOutcome], skips_fail: bool) -> i32 {
    let mut code = EXIT_OK;
    for o in outcomes {
        match o {
            ScenarioOutcome::Failed { .. } => return EXIT_ERROR,
            ScenarioOutcome::Verified(r) if !r.consistent => code = EXIT_INCONSISTENT,
            ScenarioOutcome::SkippedPrecondition { .. } | ScenarioOutcome::SkippedUnverified { .. } if skips_fail => {
                code = EXIT_INCONSISTENT
            }
            _ => {}
        }
    }
    code
}

#[derive(Serialize)]
struct SuiteConfigOut<'a> {
    #[serde(flatten)]
    args: &'a SuiteArgs,
    presets_resolved: Vec<&'static str>,
    seed: u64,
    format: Format,
}

#[derive(Serialize)]
struct SuiteOut {
    summary: SummaryOut,
    records: Vec<ScenarioRecord>,
}

fn suite(a: &SuiteArgs, seed: u64, format: Format) -> Result<(String, i32), AppError> {
    let presets = match &a.presets {
        None => Preset::ALL.to_vec(),
        Some(names) => names.iter().map(|n| Preset::from_name(n.trim())).collect::<Result<_, _>>()?,
    };
    let cfg = SuiteConfig {
        seed,
        per_preset: a.per_preset,
        presets: presets.clone(),
        n_samples: a.n_samples,
        delta: a.delta,
        max_n: a.max_n,
    };
    let run = match a.threads {
        None => run_suite(&cfg)?,
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| AppError::Usage(format!("threads: {e}")))?
            .install(|| run_suite(&cfg))?,
    };
    let code = outcome_code(&run.outcomes, false);
    let records = run
        .scenarios
        .iter()
        .zip(&run.outcomes)
        .map(|(s, o)| Ok(ScenarioRecord { scenario: ScenarioFile::of(s)?, outcome: o.into() }))
        .collect::<Result<Vec<_>, AppError>>()?;
    let config = SuiteConfigOut { args: a, presets_resolved: presets.iter().map(|p| p.name()).collect(), seed, format };
    let out = SuiteOut { summary: (&run.summary).into(), records };
    Ok((Envelope::new("suite", &config, out).to_json(), code))
}
