//! Command-line front end: argument parsing, input resolution and rendering.
//!
//! `run` returns the exit code together with everything that would be
//! written to stdout and stderr, so the binary is a thin wrapper and tests
//! can drive commands in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lie_randers::catalog::{self, SignClass};
use lie_randers::geometry::{curvature_table, levi_civita, parallel_fields};
use lie_randers::hypercomplex::{is_hyper_hermitian, quaternionic_triple, verify_triple, HypercomplexTriple};
use lie_randers::sample::{drift_coefficient, unit_pole_flag};
use lie_randers::{
    Connection, Engine, Error, Flag, InnerProduct, LieAlgebra, Mode, RandersMetric, Scalar, ValidationReport, Vector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

const NO_DRIFT: &str = "no parallel drift; Berwald Randers metric does not exist";

#[derive(Debug, Parser)]
#[command(name = "lie-randers", version, about = "Invariant Riemannian and Randers geometry on Lie groups")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Arithmetic mode.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Zero tolerance in float mode.
    #[arg(long, global = true, default_value_t = lie_randers::scalar::DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Markdown)]
    pub output: Output,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Markdown,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Catalog case (abelian, case1..case4) or path to an algebra JSON file.
    pub input: String,
    /// Gram matrix JSON file; defaults to the identity.
    #[arg(long)]
    pub metric: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Levi-Civita connection table.
    Connection(Input),
    /// Nonzero curvature components.
    Curvature(Input),
    /// Basis of left-invariant parallel fields.
    Parallel(Input),
    /// Flag curvature of the Berwald Randers metric with drift q times the
    /// normalized parallel field.
    Flag {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Basis name ("Y") or coordinates ("0,1,0,0").
        #[arg(long, allow_hyphen_values = true)]
        pole: String,
        #[arg(long, allow_hyphen_values = true)]
        transverse: String,
    },
    /// Flag curvature on seeded random flags and drifts, with a sign summary.
    Sweep {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Recompute every catalog table and check the hypercomplex fixture.
    Verify {
        /// Additional triple (JSON) to check.
        #[arg(long)]
        triple: Option<PathBuf>,
        /// Algebra the extra triple is checked on.
        #[arg(long, default_value = "abelian")]
        on: String,
        #[arg(long)]
        metric: Option<PathBuf>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Unsupported(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotBerwald => Failure::Unsupported(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

type CmdResult = std::result::Result<(i32, String), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = engine(&cli.config).and_then(|eng| match &cli.command {
        Command::Connection(input) => cmd_connection(input, &eng, &cli.config),
        Command::Curvature(input) => cmd_curvature(input, &eng, &cli.config),
        Command::Parallel(input) => cmd_parallel(input, &eng, &cli.config),
        Command::Flag { input, q, pole, transverse } => cmd_flag(input, q, pole, transverse, &eng, &cli.config),
        Command::Sweep { input, samples } => cmd_sweep(input, *samples, &eng, &cli.config),
        Command::Verify { triple, on, metric } => {
            cmd_verify(triple.as_deref(), on, metric.as_deref(), &eng, &cli.config)
        }
    });
    match result {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(Failure::Invalid(msg)) => Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Unsupported(msg)) => {
            Outcome { code: EXIT_UNSUPPORTED, stdout: String::new(), stderr: format!("error: {msg}\n") }
        }
    }
}

fn engine(config: &RunConfig) -> std::result::Result<Engine, Failure> {
    if !(config.epsilon > 0.0 && config.epsilon.is_finite()) {
        return Err(Failure::Invalid(format!("epsilon must be positive, got {}", config.epsilon)));
    }
    let mode = match config.mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    };
    Ok(Engine::new(mode).with_epsilon(config.epsilon))
}

/// Algebra and metric behind a command, plus the catalog entry when the
/// input named one and the metric was left at its default.
struct Resolved {
    name: String,
    algebra: LieAlgebra,
    metric: InnerProduct,
    entry: Option<catalog::CatalogEntry>,
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn resolve(input: &str, metric: Option<&Path>, eng: &Engine) -> std::result::Result<Resolved, Failure> {
    let (name, algebra, entry) = if catalog::CASE_NAMES.contains(&input) {
        let entry = catalog::get(input, eng)?;
        (input.to_string(), entry.algebra.clone(), Some(entry))
    } else {
        let algebra = LieAlgebra::from_json(&read(Path::new(input))?, eng)?;
        let name = Path::new(input).file_stem().map_or(input.to_string(), |s| s.to_string_lossy().into_owned());
        (name, algebra, None)
    };
    let report = algebra.validate(eng);
    if !report.is_empty() {
        return Err(Failure::Invalid(format!("not a Lie algebra:\n{report}")));
    }
    let (metric, entry) = match metric {
        Some(path) => {
            let g = InnerProduct::from_json(&read(path)?, eng)?;
            if g.dim() != algebra.dim() {
                return Err(Error::DimensionMismatch { expected: algebra.dim(), found: g.dim() }.into());
            }
            (g, None)
        }
        None => (InnerProduct::identity(algebra.dim(), eng), entry),
    };
    Ok(Resolved { name, algebra, metric, entry })
}

fn parse_vector(text: &str, names: &[String], eng: &Engine) -> std::result::Result<Vector, Failure> {
    if let Some(i) = names.iter().position(|n| n == text.trim()) {
        return Ok(Vector::basis(names.len(), i).cast(eng));
    }
    let coords = text.split(',').map(|c| eng.parse(c.trim())).collect::<lie_randers::Result<Vec<_>>>()?;
    let v = Vector::new(coords);
    v.check_dim(names.len())?;
    Ok(v)
}

fn connection_of(r: &Resolved, eng: &Engine) -> std::result::Result<Connection, Failure> {
    Ok(levi_civita(&r.algebra, &r.metric, eng)?)
}

fn mismatch_note(out: &mut String, what: &str, name: &str, config: &RunConfig) {
    if config.output == Output::Markdown {
        let _ = writeln!(out, "\nmismatch: computed {what} differs from the {name} fixture");
    }
}

fn cmd_connection(input: &Input, eng: &Engine, config: &RunConfig) -> CmdResult {
    let r = resolve(&input.input, input.metric.as_deref(), eng)?;
    let conn = connection_of(&r, eng)?;
    let names = r.algebra.basis_names();
    let mut out = match config.output {
        Output::Json => conn.to_json(names) + "\n",
        Output::Markdown => conn.to_markdown(names),
    };
    let ok = r.entry.as_ref().is_none_or(|e| conn.approx_eq(&e.expected.connection.cast(eng), eng));
    if !ok {
        mismatch_note(&mut out, "connection", &r.name, config);
    }
    Ok((if ok { EXIT_OK } else { EXIT_MISMATCH }, out))
}

fn cmd_curvature(input: &Input, eng: &Engine, config: &RunConfig) -> CmdResult {
    let r = resolve(&input.input, input.metric.as_deref(), eng)?;
    let conn = connection_of(&r, eng)?;
    let table = curvature_table(&conn, &r.algebra)?;
    let names = r.algebra.basis_names();
    let mut out = match config.output {
        Output::Json => table.to_json(names) + "\n",
        Output::Markdown => table.to_markdown(names, eng),
    };
    let expected = r.entry.as_ref().and_then(|e| e.expected.curvature.as_ref());
    let ok = expected.is_none_or(|want| table.approx_eq(&want.cast(eng), eng));
    if !ok {
        mismatch_note(&mut out, "curvature", &r.name, config);
    }
    Ok((if ok { EXIT_OK } else { EXIT_MISMATCH }, out))
}

#[derive(Serialize)]
struct ParallelDoc {
    dimension: usize,
    basis: Vec<Vector>,
}

fn cmd_parallel(input: &Input, eng: &Engine, config: &RunConfig) -> CmdResult {
    let r = resolve(&input.input, input.metric.as_deref(), eng)?;
    let conn = connection_of(&r, eng)?;
    let basis = parallel_fields(&conn, eng);
    let names = r.algebra.basis_names();
    let out = match config.output {
        Output::Json => json_line(&ParallelDoc { dimension: basis.len(), basis: basis.clone() }),
        Output::Markdown if basis.is_empty() => "dimension 0\n".to_string(),
        Output::Markdown => {
            let listed: Vec<String> = basis.iter().map(|v| v.display_with(names).to_string()).collect();
            format!("dimension {}, basis: {}\n", basis.len(), listed.join(", "))
        }
    };
    let ok = r.entry.as_ref().is_none_or(|e| {
        e.expected.parallel_basis.len() == basis.len()
            && e.expected.parallel_basis.iter().zip(&basis).all(|(a, b)| (&a.cast(eng) - b).is_zero(eng))
    });
    Ok((if ok { EXIT_OK } else { EXIT_MISMATCH }, out))
}

/// Randers metric with drift `q` times the normalized first parallel field.
/// `q = 0` is the Riemannian metric and is accepted on every algebra.
fn berwald_metric(r: &Resolved, conn: &Connection, q: &Scalar, eng: &Engine) -> std::result::Result<RandersMetric, Failure> {
    if eng.is_zero(q) {
        return Ok(RandersMetric::riemannian(r.metric.clone()));
    }
    let drift = catalog::parallel_drift(&r.metric, conn, q, eng).ok_or_else(|| Failure::Unsupported(NO_DRIFT.into()))?;
    Ok(RandersMetric::build(r.metric.clone(), drift)?)
}

fn parse_q(text: &str, eng: &Engine) -> std::result::Result<Scalar, Failure> {
    let q = eng.parse(text)?;
    if q.abs() >= Scalar::one() {
        return Err(Failure::Invalid(format!("q must satisfy |q| < 1, got {q}")));
    }
    Ok(q)
}

fn mode_name(k: &Scalar) -> &'static str {
    if k.is_exact() {
        "exact"
    } else {
        "float"
    }
}

#[derive(Serialize)]
struct FlagRecord {
    case: String,
    q: Scalar,
    pole: Vector,
    transverse: Vector,
    #[serde(rename = "K")]
    k: Scalar,
    mode: &'static str,
}

fn cmd_flag(input: &Input, q: &str, pole: &str, transverse: &str, eng: &Engine, config: &RunConfig) -> CmdResult {
    let r = resolve(&input.input, input.metric.as_deref(), eng)?;
    let names = r.algebra.basis_names().to_vec();
    let q = parse_q(q, eng)?;
    let pole = parse_vector(pole, &names, eng)?;
    let transverse = parse_vector(transverse, &names, eng)?;
    let flag = Flag::new(pole.clone(), transverse.clone(), eng)?;
    let conn = connection_of(&r, eng)?;
    let f = berwald_metric(&r, &conn, &q, eng)?;
    let k = f.flag_curvature(&r.algebra, &conn, &flag, eng)?;
    let mode = mode_name(&k);
    let out = match config.output {
        Output::Json => json_line(&FlagRecord { case: r.name, q, pole, transverse, k, mode }),
        Output::Markdown => {
            let mut s = format!("K = {k}\nmode: {mode}\n");
            if eng.mode() == Mode::Exact && mode == "float" {
                s.push_str("note: normalization is irrational; result computed in float\n");
            }
            s
        }
    };
    Ok((EXIT_OK, out))
}

#[derive(Serialize)]
struct SweepSummary {
    case: String,
    samples: usize,
    seed: u64,
    min: Option<Scalar>,
    max: Option<Scalar>,
    positive: usize,
    zero: usize,
    negative: usize,
    expected_sign: Option<String>,
    sign_ok: bool,
}

fn cmd_sweep(input: &Input, samples: usize, eng: &Engine, config: &RunConfig) -> CmdResult {
    let r = resolve(&input.input, input.metric.as_deref(), eng)?;
    let conn = connection_of(&r, eng)?;
    if parallel_fields(&conn, eng).is_empty() {
        return Err(Failure::Unsupported(NO_DRIFT.into()));
    }
    // Inputs are drawn sequentially so the stream only depends on the seed.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let inputs: Vec<(Scalar, Vector, Vector)> = (0..samples)
        .map(|_| {
            let q = drift_coefficient(&mut rng, eng);
            let (pole, transverse) = unit_pole_flag(&mut rng, &r.metric, eng);
            (q, pole, transverse)
        })
        .collect();
    let results: Vec<std::result::Result<Scalar, Error>> = inputs
        .par_iter()
        .map(|(q, pole, transverse)| {
            let drift = catalog::parallel_drift(&r.metric, &conn, q, eng).expect("parallel field exists");
            let f = RandersMetric::build(r.metric.clone(), drift)?;
            let flag = Flag::new(pole.clone(), transverse.clone(), eng)?;
            f.flag_curvature(&r.algebra, &conn, &flag, eng)
        })
        .collect();

    let expected = r.entry.as_ref().and_then(|e| e.expected.flag_sign);
    let mut summary = SweepSummary {
        case: r.name.clone(),
        samples,
        seed: config.seed,
        min: None,
        max: None,
        positive: 0,
        zero: 0,
        negative: 0,
        expected_sign: expected.map(|s| s.to_string()),
        sign_ok: true,
    };
    let names = r.algebra.basis_names();
    let mut out = String::new();
    if config.output == Output::Markdown {
        out.push_str("| # | q | pole | transverse | K |\n|---|---|---|---|---|\n");
    }
    for (n, ((q, pole, transverse), k)) in inputs.into_iter().zip(results).enumerate() {
        let k = k?;
        tally(&mut summary, &k, expected, eng);
        match config.output {
            Output::Json => out.push_str(&json_line(&FlagRecord {
                case: r.name.clone(),
                q,
                pole,
                transverse,
                mode: mode_name(&k),
                k,
            })),
            Output::Markdown => {
                let _ = writeln!(
                    out,
                    "| {n} | {q} | {} | {} | {k} |",
                    pole.display_with(names),
                    transverse.display_with(names)
                );
            }
        }
    }
    match config.output {
        Output::Json => out.push_str(&json_line(&serde_json::json!({ "summary": summary }))),
        Output::Markdown => render_summary(&mut out, &summary),
    }
    Ok((if summary.sign_ok { EXIT_OK } else { EXIT_MISMATCH }, out))
}

fn tally(summary: &mut SweepSummary, k: &Scalar, expected: Option<SignClass>, eng: &Engine) {
    if eng.is_positive(k) {
        summary.positive += 1;
    } else if eng.is_negative(k) {
        summary.negative += 1;
    } else {
        summary.zero += 1;
    }
    if summary.min.as_ref().is_none_or(|m| k < m) {
        summary.min = Some(k.clone());
    }
    if summary.max.as_ref().is_none_or(|m| k > m) {
        summary.max = Some(k.clone());
    }
    if expected.is_some_and(|s| !s.admits(k, eng)) {
        summary.sign_ok = false;
    }
}

fn render_summary(out: &mut String, s: &SweepSummary) {
    let show = |x: &Option<Scalar>| x.as_ref().map_or("-".to_string(), |v| v.to_string());
    let _ = writeln!(out, "\nsummary for {} ({} samples, seed {})", s.case, s.samples, s.seed);
    let _ = writeln!(out, "min K = {}", show(&s.min));
    let _ = writeln!(out, "max K = {}", show(&s.max));
    let _ = writeln!(out, "positive {}, zero {}, negative {}", s.positive, s.zero, s.negative);
    if let Some(sign) = &s.expected_sign {
        let verdict = if s.sign_ok { "holds" } else { "VIOLATED" };
        let _ = writeln!(out, "expected sign {sign}: {verdict}");
    }
}

#[derive(Serialize)]
struct VerifyDoc {
    catalog: ValidationReport,
    hypercomplex: ValidationReport,
    ok: bool,
}

fn cmd_verify(triple: Option<&Path>, on: &str, metric: Option<&Path>, eng: &Engine, config: &RunConfig) -> CmdResult {
    let catalog_report = catalog::verify_all(eng);

    let abelian = catalog::get("abelian", eng)?;
    let fixture = quaternionic_triple(eng);
    let mut hyper = prefixed("quaternionic", verify_triple(&abelian.algebra, &fixture, eng));
    hyper.extend(prefixed("quaternionic", is_hyper_hermitian(&abelian.metric, &fixture, eng)));
    if let Some(path) = triple {
        let t = HypercomplexTriple::from_json(&read(path)?, eng)?;
        let r = resolve(on, metric, eng)?;
        if t.j1.dim() != r.algebra.dim() {
            return Err(Error::DimensionMismatch { expected: r.algebra.dim(), found: t.j1.dim() }.into());
        }
        hyper.extend(prefixed(&r.name, verify_triple(&r.algebra, &t, eng)));
        hyper.extend(prefixed(&r.name, is_hyper_hermitian(&r.metric, &t, eng)));
    }

    let ok = catalog_report.is_empty() && hyper.is_empty();
    let out = match config.output {
        Output::Json => json_line(&VerifyDoc { catalog: catalog_report, hypercomplex: hyper, ok }),
        Output::Markdown => {
            let mut s = String::new();
            section(&mut s, "catalog", &catalog_report);
            section(&mut s, "hypercomplex", &hyper);
            s
        }
    };
    Ok((if ok { EXIT_OK } else { EXIT_MISMATCH }, out))
}

fn prefixed(name: &str, report: ValidationReport) -> ValidationReport {
    let mut out = ValidationReport::new();
    for issue in report.issues {
        out.push(format!("{name} {}", issue.check), &issue.indices, issue.detail);
    }
    out
}

fn section(out: &mut String, title: &str, report: &ValidationReport) {
    if report.is_empty() {
        let _ = writeln!(out, "{title}: ok");
    } else {
        let _ = writeln!(out, "{title}: {} mismatches", report.len());
        for issue in report.iter() {
            let _ = writeln!(out, "- {issue}");
        }
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable") + "\n"
}
