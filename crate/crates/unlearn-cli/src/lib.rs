//! Command-line front end for the `unlearn` library.
//!
//! Every JSON artifact is wrapped as `{"schema": "v1", "command": …,
//! "result": …}`; tabular artifacts are CSV with a header row. All randomness
//! comes from `--seed` (or `UNLEARN_SEED`).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use unlearn::algorithms::{
    comparison_threshold, random_removal_certificate, selective_removal_certificate, Algorithm,
    CertificateInput, DataModel, Estimator, SampleSet, Variant,
};
use unlearn::families_regions::{
    multi_gaussian_sample_region, multi_region_1d, Covariance, FamilySpec, MultiGaussianSpec,
    PARETO_SAMPLE_EPS,
};
use unlearn::tof_core::TradeoffCurve;
use unlearn::verify::{domination_oracle_sweep, run_trials, PairFamily, TrialConfig, TrialModel};

mod parse;

pub use parse::{parse_matrix, parse_noise, parse_vector};

/// Schema tag carried by every JSON artifact.
pub const SCHEMA: &str = "v1";

/// Versioned wrapper around every JSON artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    pub command: String,
    pub result: T,
}

#[derive(Parser, Debug)]
#[command(
    name = "unlearn",
    version,
    about = "Feasible regions, certificates, and oracles for distributional unlearning"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each subcommand has a default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the artifact here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Root seed for every random draw.
    #[arg(long, global = true, env = "UNLEARN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Report failures as a JSON error object on stdout.
    #[arg(long, global = true)]
    pub error_json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Feasible region of one family (JSON).
    Region(RegionArgs),
    /// Removal levels with a non-empty region (CSV).
    Pareto(ParetoArgs),
    /// A trade-off curve sampled on a uniform grid (CSV).
    Curve(CurveArgs),
    /// Removal certificate of an algorithm (JSON).
    Bounds(BoundsArgs),
    /// Monte Carlo coverage of a certificate (JSON).
    Simulate(SimulateArgs),
    /// Feasibility of selective over random removal (JSON).
    Compare(CompareArgs),
    /// Closed-form ordering against the exact oracle (CSV).
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Gaussian,
    Location,
    Poisson,
    Binomial,
    WhiteNoise,
    Hilbert,
    MultiLocation,
    MultiGaussian,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Unwanted parameter: a number or comma list; ';' separates populations
    /// of the multi families.
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: Option<String>,
    /// Desired parameter, formatted like --mu1.
    #[arg(long, allow_hyphen_values = true)]
    pub nu1: Option<String>,
    /// Expected dimension of the Gaussian parameters.
    #[arg(long)]
    pub d: Option<usize>,
    /// Covariance, row-major with ',' between entries and ';' between rows.
    #[arg(long, allow_hyphen_values = true)]
    pub cov: Option<String>,
    /// Isotropic standard deviation (instead of --cov).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Location noise: gaussian:σ, laplace:b, or uniform:a.
    #[arg(long)]
    pub noise: Option<String>,
    /// Binomial trial count.
    #[arg(long)]
    pub n: Option<u64>,
    /// Hilbert-space eigenvalues.
    #[arg(long)]
    pub eigenvalues: Option<String>,
    /// Read the family pair from a JSON file instead of the flags above.
    #[arg(long)]
    pub spec_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RegionArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Removal level (a comma list for the multi families).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Preservation level (a comma list for the multi families).
    #[arg(long, allow_hyphen_values = true)]
    pub eps: String,
    /// Candidate draws of the multi-Gaussian sampler.
    #[arg(long, default_value_t = 100_000)]
    pub draws: u64,
}

#[derive(Args, Debug)]
pub struct ParetoArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Preservation levels (comma list); shift families default to a fixed sample.
    #[arg(long)]
    pub eps: Option<String>,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// Gaussian shift μ: T(N(0,1), N(μ,1)).
    #[arg(long, allow_hyphen_values = true)]
    pub gaussian_shift: Option<f64>,
    /// Poisson rates "a,b".
    #[arg(long)]
    pub poisson: Option<String>,
    /// Binomial "n,a,b".
    #[arg(long)]
    pub binomial: Option<String>,
    /// Location noise (gaussian:σ, laplace:b, uniform:a); needs --delta.
    #[arg(long)]
    pub location: Option<String>,
    /// Shift of the location curve.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Uniform grid size.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Random,
    Selective,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Mean,
    Median,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Displayed,
    Tight,
}

#[derive(Args, Debug)]
pub struct SizeArgs {
    #[arg(long)]
    pub n1: u64,
    #[arg(long)]
    pub n2: u64,
    /// Removal budget n_r.
    #[arg(long)]
    pub nr: u64,
    #[arg(long)]
    pub delta: f64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub algorithm: AlgorithmArg,
    #[command(flatten)]
    pub sizes: SizeArgs,
    /// True separation Δ (in units of σ for the Gaussian model).
    #[arg(long, alias = "Delta", required_unless_present = "samples1", conflicts_with_all = ["samples1", "samples2"])]
    pub separation: Option<f64>,
    /// Unwanted samples (CSV, one point per row) for a plug-in estimate of Δ.
    #[arg(long, requires = "samples2")]
    pub samples1: Option<PathBuf>,
    /// Desired samples (CSV, one point per row) for a plug-in estimate of Δ.
    #[arg(long, requires = "samples1")]
    pub samples2: Option<PathBuf>,
    /// Gaussian model standard deviation.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Gaussian model dimension.
    #[arg(long, default_value_t = 1)]
    pub d: u64,
    /// Location noise instead of the Gaussian model.
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Mean)]
    pub estimator: EstimatorArg,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub algorithm: AlgorithmArg,
    /// Selective certificate to score against.
    #[arg(long, value_enum, default_value_t = VariantArg::Tight)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub sizes: SizeArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub nu1: String,
    /// Gaussian standard deviation (ignored with --noise).
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Location noise instead of Gaussian populations.
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Mean)]
    pub estimator: EstimatorArg,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub sizes: SizeArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    Poisson,
    Bernoulli,
    Binomial,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: SweepFamily,
    /// Binomial trial count.
    #[arg(long, default_value_t = 5)]
    pub n: u64,
    /// Quadruples to sample.
    #[arg(long, default_value_t = 500)]
    pub count: u64,
}

/// Failure of one invocation.
#[derive(Debug)]
pub enum CliError {
    /// Bad parameters or an unmet precondition (exit code 2).
    Validation { kind: &'static str, message: String },
    /// Anything else (exit code 1).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Internal(_) => 1,
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        CliError::Validation {
            kind: "invalid_input",
            message: message.into(),
        }
    }

    /// JSON error object emitted with `--error-json`.
    pub fn to_json(&self) -> String {
        let (kind, message) = match self {
            CliError::Validation { kind, message } => (*kind, message.as_str()),
            CliError::Internal(m) => ("internal", m.as_str()),
        };
        let body =
            serde_json::json!({ "schema": SCHEMA, "error": { "kind": kind, "message": message } });
        format!(
            "{}\n",
            serde_json::to_string_pretty(&body).expect("error objects serialize")
        )
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation { message, .. } => write!(f, "error: {message}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<unlearn::Error> for CliError {
    fn from(e: unlearn::Error) -> Self {
        let kind = match e {
            unlearn::Error::InvalidInput(_) => "invalid_input",
            unlearn::Error::DimensionMismatch(_) => "dimension_mismatch",
            unlearn::Error::NotPositiveDefinite => "not_positive_definite",
            unlearn::Error::Unsupported(_) => "unsupported",
            unlearn::Error::Infeasible(_) => "infeasible",
        };
        CliError::Validation {
            kind,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// The rendered artifact plus diagnostics meant for stderr.
pub struct Artifact {
    pub bytes: Vec<u8>,
    pub notes: Vec<String>,
}

fn json<T: Serialize>(command: &str, result: T) -> CliResult<Vec<u8>> {
    let env = Envelope {
        schema: SCHEMA.to_string(),
        command: command.to_string(),
        result,
    };
    let mut s =
        serde_json::to_string_pretty(&env).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    w.into_inner()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn json_only(format: Option<Format>, command: &str) -> CliResult<()> {
    match format {
        Some(Format::Csv) => Err(CliError::invalid(format!("{command} emits JSON only"))),
        _ => Ok(()),
    }
}

/// Runs one parsed invocation.
pub fn execute(cli: &Cli) -> CliResult<Artifact> {
    let mut notes = Vec::new();
    let bytes = match &cli.command {
        Command::Region(args) => {
            json_only(cli.format, "region")?;
            json("region", region(args, cli.seed)?)?
        }
        Command::Pareto(args) => pareto(args, cli.format)?,
        Command::Curve(args) => curve(args, cli.format)?,
        Command::Bounds(args) => {
            json_only(cli.format, "bounds")?;
            bounds(args)?
        }
        Command::Simulate(args) => {
            json_only(cli.format, "simulate")?;
            let report = run_trials(&trial_config(args, cli.seed)?)?;
            notes.push(format!(
                "simulate: {} trials in {:.3} s",
                report.trials,
                report.elapsed.as_secs_f64()
            ));
            json("simulate", report)?
        }
        Command::Compare(args) => {
            json_only(cli.format, "compare")?;
            let s = &args.sizes;
            json("compare", comparison_threshold(s.n1, s.n2, s.nr, s.delta)?)?
        }
        Command::Sweep(args) => {
            let family = match args.family {
                SweepFamily::Poisson => PairFamily::Poisson,
                SweepFamily::Bernoulli => PairFamily::Binomial { n: 1 },
                SweepFamily::Binomial => PairFamily::Binomial { n: args.n },
            };
            let report = domination_oracle_sweep(family, args.count, cli.seed)?;
            notes.push(format!(
                "sweep: {} compared, {} excluded, agreement {}, grid-only agreement {}",
                report.compared, report.excluded, report.agreement, report.grid_agreement
            ));
            match cli.format {
                Some(Format::Json) => json("sweep", report)?,
                _ => csv(&report.rows)?,
            }
        }
    };
    Ok(Artifact { bytes, notes })
}

fn family_spec(args: &FamilyArgs) -> CliResult<FamilySpec> {
    if let Some(path) = &args.spec_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        let spec: FamilySpec = serde_json::from_str(&text)
            .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        return Ok(spec);
    }
    let kind = args
        .family
        .ok_or_else(|| CliError::invalid("--family or --spec-file is required"))?;
    let need = |v: &Option<String>, flag: &str| {
        v.clone()
            .ok_or_else(|| CliError::invalid(format!("--{flag} is required")))
    };
    let vector =
        |flag: &str, v: &Option<String>| parse_vector(&need(v, flag)?).map_err(CliError::invalid);
    let scalar = |flag: &str, v: &Option<String>| -> CliResult<f64> {
        match vector(flag, v)?.as_slice() {
            [x] => Ok(*x),
            other => Err(CliError::invalid(format!(
                "--{flag} takes one number, got {}",
                other.len()
            ))),
        }
    };
    Ok(match kind {
        FamilyKind::Gaussian => {
            let (unwanted, desired) = (vector("mu1", &args.mu1)?, vector("nu1", &args.nu1)?);
            if let Some(d) = args.d {
                if unwanted.len() != d || desired.len() != d {
                    return Err(CliError::invalid(format!(
                        "--d {d} does not match the parameter lengths"
                    )));
                }
            }
            FamilySpec::Gaussian {
                cov: covariance(args, unwanted.len())?,
                unwanted,
                desired,
            }
        }
        FamilyKind::Location => FamilySpec::Location {
            unwanted: scalar("mu1", &args.mu1)?,
            desired: scalar("nu1", &args.nu1)?,
            noise: parse_noise(&need(&args.noise, "noise")?).map_err(CliError::invalid)?,
        },
        FamilyKind::Poisson => FamilySpec::Poisson {
            unwanted: scalar("mu1", &args.mu1)?,
            desired: scalar("nu1", &args.nu1)?,
        },
        FamilyKind::Binomial => FamilySpec::Binomial {
            n: args.n.ok_or_else(|| CliError::invalid("--n is required"))?,
            unwanted: scalar("mu1", &args.mu1)?,
            desired: scalar("nu1", &args.nu1)?,
        },
        FamilyKind::WhiteNoise => FamilySpec::WhiteNoise {
            unwanted: vector("mu1", &args.mu1)?,
            desired: vector("nu1", &args.nu1)?,
        },
        FamilyKind::Hilbert => FamilySpec::Hilbert {
            eigenvalues: vector("eigenvalues", &args.eigenvalues)?,
            unwanted: vector("mu1", &args.mu1)?,
            desired: vector("nu1", &args.nu1)?,
        },
        FamilyKind::MultiLocation | FamilyKind::MultiGaussian => {
            return Err(CliError::invalid(
                "multi-population families support `region` only",
            ))
        }
    })
}

fn covariance(args: &FamilyArgs, dim: usize) -> CliResult<Covariance> {
    let cov = match (&args.cov, args.sigma) {
        (Some(_), Some(_)) => return Err(CliError::invalid("give --cov or --sigma, not both")),
        (Some(text), None) => {
            let rows = parse_matrix(text).map_err(CliError::invalid)?;
            Covariance::full(rows.len(), rows.into_iter().flatten().collect())?
        }
        (None, Some(sigma)) => Covariance::isotropic(dim, sigma)?,
        (None, None) => Covariance::identity(dim)?,
    };
    Ok(cov)
}

fn region(args: &RegionArgs, seed: u64) -> CliResult<unlearn::families_regions::RegionResult> {
    let fam = &args.family;
    let levels = |text: &str| parse_vector(text).map_err(CliError::invalid);
    let populations = |v: &Option<String>, flag: &str| -> CliResult<Vec<Vec<f64>>> {
        let text = v
            .as_deref()
            .ok_or_else(|| CliError::invalid(format!("--{flag} is required")))?;
        parse_matrix(text).map_err(CliError::invalid)
    };
    match fam.family {
        Some(FamilyKind::MultiLocation) if fam.spec_file.is_none() => {
            let flat = |rows: Vec<Vec<f64>>| rows.into_iter().flatten().collect::<Vec<f64>>();
            let unwanted = flat(populations(&fam.mu1, "mu1")?);
            let desired = flat(populations(&fam.nu1, "nu1")?);
            Ok(multi_region_1d(
                &unwanted,
                &levels(&args.alpha)?,
                &desired,
                &levels(&args.eps)?,
            )?)
        }
        Some(FamilyKind::MultiGaussian) if fam.spec_file.is_none() => {
            let unwanted = populations(&fam.mu1, "mu1")?;
            let dim = unwanted.first().map_or(0, Vec::len);
            let spec = MultiGaussianSpec {
                alpha: levels(&args.alpha)?,
                desired: populations(&fam.nu1, "nu1")?,
                epsilon: levels(&args.eps)?,
                cov: covariance(fam, dim)?,
                unwanted,
            };
            Ok(multi_gaussian_sample_region(&spec, args.draws, seed)?)
        }
        _ => {
            let single = |text: &str, flag: &str| -> CliResult<f64> {
                match levels(text)?.as_slice() {
                    [x] => Ok(*x),
                    _ => Err(CliError::invalid(format!(
                        "--{flag} takes one number for this family"
                    ))),
                }
            };
            Ok(family_spec(fam)?
                .region(single(&args.alpha, "alpha")?, single(&args.eps, "eps")?)?)
        }
    }
}

#[derive(Serialize)]
struct FrontierRow {
    epsilon: f64,
    alpha_max: f64,
}

#[derive(Serialize)]
struct IntervalRow {
    epsilon: f64,
    alpha_lo: f64,
    alpha_hi: f64,
    lo_open: bool,
    hi_open: bool,
}

fn pareto(args: &ParetoArgs, format: Option<Format>) -> CliResult<Vec<u8>> {
    let spec = family_spec(&args.family)?;
    let eps = match &args.eps {
        Some(text) => parse_vector(text).map_err(CliError::invalid)?,
        None if matches!(spec, FamilySpec::Poisson { .. }) => {
            return Err(CliError::invalid("--eps is required for poisson"))
        }
        None => PARETO_SAMPLE_EPS.to_vec(),
    };
    let mut rows = Vec::new();
    for &e in &eps {
        for i in spec.pareto(e)? {
            rows.push(IntervalRow {
                epsilon: e,
                alpha_lo: i.lo,
                alpha_hi: i.hi,
                lo_open: i.lo_open,
                hi_open: i.hi_open,
            });
        }
    }
    match (format, &spec) {
        (Some(Format::Json), _) => json(
            "pareto",
            serde_json::json!({ "family": spec, "intervals": rows.iter().map(|r| {
            serde_json::json!({ "epsilon": r.epsilon, "lo": r.alpha_lo, "hi": r.alpha_hi, "lo_open": r.lo_open, "hi_open": r.hi_open })
        }).collect::<Vec<_>>() }),
        ),
        (_, FamilySpec::Poisson { .. }) => csv(rows),
        _ => csv(rows.into_iter().map(|r| FrontierRow {
            epsilon: r.epsilon,
            alpha_max: r.alpha_hi,
        })),
    }
}

#[derive(Serialize)]
struct CurveRow {
    x: f64,
    f: f64,
}

fn curve(args: &CurveArgs, format: Option<Format>) -> CliResult<Vec<u8>> {
    let mut chosen = Vec::new();
    if let Some(mu) = args.gaussian_shift {
        chosen.push(TradeoffCurve::gaussian(mu)?);
    }
    if let Some(text) = &args.poisson {
        match parse_vector(text).map_err(CliError::invalid)?.as_slice() {
            [a, b] => chosen.push(TradeoffCurve::poisson(*a, *b)?),
            _ => return Err(CliError::invalid("--poisson takes \"a,b\"")),
        }
    }
    if let Some(text) = &args.binomial {
        match parse_vector(text).map_err(CliError::invalid)?.as_slice() {
            [n, a, b] if n.fract() == 0.0 && *n >= 1.0 => {
                chosen.push(TradeoffCurve::binomial(*n as u64, *a, *b)?)
            }
            _ => {
                return Err(CliError::invalid(
                    "--binomial takes \"n,a,b\" with integer n ≥ 1",
                ))
            }
        }
    }
    if let Some(text) = &args.location {
        let noise = parse_noise(text).map_err(CliError::invalid)?;
        let delta = args
            .delta
            .ok_or_else(|| CliError::invalid("--location needs --delta"))?;
        chosen.push(TradeoffCurve::location(noise, delta)?);
    }
    let curve = match chosen.len() {
        1 => chosen.pop().expect("one curve"),
        _ => {
            return Err(CliError::invalid(
                "choose exactly one of --gaussian-shift, --poisson, --binomial, --location",
            ))
        }
    };
    if args.points < 2 {
        return Err(CliError::invalid("--points must be at least 2"));
    }
    let last = (args.points - 1) as f64;
    let rows = (0..args.points)
        .map(|i| {
            let x = i as f64 / last;
            Ok(CurveRow {
                x,
                f: curve.eval(x)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    match format {
        Some(Format::Json) => json(
            "curve",
            serde_json::json!({ "curve": curve, "grid": rows.iter().map(|r| r.x).collect::<Vec<_>>(), "values": rows.iter().map(|r| r.f).collect::<Vec<_>>() }),
        ),
        _ => csv(rows),
    }
}

fn estimator(e: EstimatorArg) -> Estimator {
    match e {
        EstimatorArg::Mean => Estimator::WeightedMean,
        EstimatorArg::Median => Estimator::WeightedMedian,
    }
}

/// Caveat attached to certificates computed from an estimated separation.
pub const ESTIMATED_NOTE: &str =
    "estimated separation; the certificate guarantees assume the true one";

/// A certificate whose separation was estimated from samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatedBounds<T> {
    pub separation_source: String,
    pub note: String,
    pub estimated_separation: f64,
    pub certificate: T,
}

fn read_samples(path: &std::path::Path) -> CliResult<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
        let point = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    CliError::invalid(format!("{}: bad number {field:?}", path.display()))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        points.push(point);
    }
    Ok(points)
}

fn sample_mean(points: &[Vec<f64>], path: &std::path::Path) -> CliResult<Vec<f64>> {
    let set = SampleSet::new(points.to_vec())
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let n = set.len() as f64;
    let mut acc = vec![0.0; set.dim()];
    for p in set.points() {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v / n;
        }
    }
    Ok(acc)
}

fn bounds(args: &BoundsArgs) -> CliResult<Vec<u8>> {
    let model = match &args.noise {
        Some(text) => DataModel::Location {
            noise: parse_noise(text).map_err(CliError::invalid)?,
        },
        None => DataModel::Gaussian {
            sigma: args.sigma,
            d: args.d,
        },
    };
    let estimated = match (&args.samples1, &args.samples2) {
        (Some(p1), Some(p2)) => {
            let (m1, m2) = (
                sample_mean(&read_samples(p1)?, p1)?,
                sample_mean(&read_samples(p2)?, p2)?,
            );
            if m1.len() != m2.len() || m1.len() as u64 != model.dim() {
                return Err(CliError::Validation {
                    kind: "dimension_mismatch",
                    message: format!(
                        "sample dimensions {} and {} must equal the model dimension {}",
                        m1.len(),
                        m2.len(),
                        model.dim()
                    ),
                });
            }
            let distance = m1
                .iter()
                .zip(&m2)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            Some(distance / model.unit_scale())
        }
        _ => None,
    };
    let separation = match (args.separation, estimated) {
        (Some(s), None) => s,
        (None, Some(s)) => s,
        _ => {
            return Err(CliError::invalid(
                "give --separation or both --samples1 and --samples2",
            ))
        }
    };
    let s = &args.sizes;
    let input = CertificateInput {
        n1: s.n1,
        n2: s.n2,
        n_r: s.nr,
        delta: s.delta,
        separation,
        model,
        estimator: estimator(args.estimator),
    };
    let wrap = |certificate| EstimatedBounds {
        separation_source: "estimated".to_string(),
        note: ESTIMATED_NOTE.to_string(),
        estimated_separation: separation,
        certificate,
    };
    match (args.algorithm, estimated.is_some()) {
        (AlgorithmArg::Random, false) => json("bounds", random_removal_certificate(&input)?),
        (AlgorithmArg::Random, true) => json(
            "bounds",
            wrap(
                serde_json::to_value(random_removal_certificate(&input)?)
                    .map_err(|e| CliError::Internal(e.to_string()))?,
            ),
        ),
        (AlgorithmArg::Selective, false) => json("bounds", selective_removal_certificate(&input)?),
        (AlgorithmArg::Selective, true) => json(
            "bounds",
            wrap(
                serde_json::to_value(selective_removal_certificate(&input)?)
                    .map_err(|e| CliError::Internal(e.to_string()))?,
            ),
        ),
    }
}

fn trial_config(args: &SimulateArgs, seed: u64) -> CliResult<TrialConfig> {
    let (mu1, nu1) = (
        parse_vector(&args.mu1).map_err(CliError::invalid)?,
        parse_vector(&args.nu1).map_err(CliError::invalid)?,
    );
    let model = match &args.noise {
        Some(text) => match (mu1.as_slice(), nu1.as_slice()) {
            ([m], [v]) => TrialModel::Location {
                unwanted: *m,
                desired: *v,
                noise: parse_noise(text).map_err(CliError::invalid)?,
            },
            _ => {
                return Err(CliError::invalid(
                    "location noise needs scalar --mu1 and --nu1",
                ))
            }
        },
        None => TrialModel::Gaussian {
            unwanted: mu1,
            desired: nu1,
            sigma: args.sigma,
        },
    };
    let s = &args.sizes;
    Ok(TrialConfig {
        model,
        n1: s.n1,
        n2: s.n2,
        n_r: s.nr,
        delta: s.delta,
        algorithm: match args.algorithm {
            AlgorithmArg::Random => Algorithm::Random,
            AlgorithmArg::Selective => Algorithm::Selective,
        },
        variant: match args.variant {
            VariantArg::Displayed => Variant::Displayed,
            VariantArg::Tight => Variant::Tight,
        },
        estimator: estimator(args.estimator),
        trials: args.trials,
        seed,
    })
}

/// Parses `argv`, runs it, and writes the artifact. Returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|artifact| {
        for note in &artifact.notes {
            eprintln!("{note}");
        }
        match &cli.output {
            Some(path) => std::fs::write(path, &artifact.bytes)
                .map_err(|e| CliError::Internal(format!("{}: {e}", path.display()))),
            None => {
                use std::io::Write;
                std::io::stdout()
                    .write_all(&artifact.bytes)
                    .map_err(|e| CliError::Internal(e.to_string()))
            }
        }
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            if cli.error_json {
                print!("{}", e.to_json());
            } else {
                eprintln!("{e}");
            }
            e.exit_code()
        }
    }
}
