//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; for `verify`, the suite is a valid MCAC |
//! | 1 | I/O, parse, configuration or strength error, or an unsatisfiable model |
//! | 2 | generation failed, or `verify` found violations or uncovered tuples |
//! | 3 | the model cannot be expressed in the requested format |
//!
//! Results go to stdout as `key=value` lines. `CTFORGE_LOG` (`error`, `info`,
//! `debug`) sets the log level on stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bot::{build_bot, build_pbot, BotConfig};
use crate::error::{Error, Result};
use crate::formats::{
    parse_acts, parse_casa, parse_dimacs, parse_extended_acts, read_test_suite, write_acts, write_casa,
    write_extended_acts, write_test_suite,
};
use crate::ipog::build_ipog;
use crate::model::{compile, enumerate_tuples, is_allowed, SutModel, TestSuite};
use crate::sat::SolverConfig;
use crate::sutgen::{generate, GenConfig};
use crate::verify::verify_mcac;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_INEXPRESSIBLE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelFormat {
    /// Plain ACTS
    Acts,
    /// ACTS with an `[Auxiliar]` section
    Xacts,
    /// CASA `.model` with a sibling `.constraints` file
    Casa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Ipog,
    Bot,
    Pbot,
}

#[derive(Debug, Parser)]
#[command(name = "ctforge", version, about = "Constrained covering arrays and SUT benchmark generation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a SUT model from a DIMACS CNF
    Gen(GenArgs),
    /// Build a covering array for a model
    Build(BuildArgs),
    /// Check that a suite is a valid MCAC
    Verify(VerifyArgs),
    /// Translate a model between formats
    Convert(ConvertArgs),
    /// Print parameter and t-tuple counts
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long)]
    model: PathBuf,
    /// Defaults to casa for `.model` files and xacts otherwise
    #[arg(long, value_enum)]
    format: Option<ModelFormat>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    cnf: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    cmin: f64,
    #[arg(long)]
    cmax: f64,
    #[arg(long, default_value_t = 10)]
    delta: usize,
    #[arg(long, default_value_t = 5)]
    nabla: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    seeds: Vec<u64>,
    #[arg(long, default_value_t = 100)]
    max_tries: u32,
    /// Conflict budget per solve
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,
    /// Wall-clock limit per solve in seconds
    #[arg(long)]
    wall_timeout: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum)]
    alg: Algorithm,
    #[arg(long)]
    t: usize,
    /// Conflict budget of the limited checks (bot, pbot)
    #[arg(long, default_value_t = 100)]
    cb: u64,
    /// Pool size limit in bytes (pbot); unbounded when absent
    #[arg(long)]
    pool_bytes: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    suite: PathBuf,
    /// Write a CSV of the failures here
    #[arg(long)]
    failures: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvertArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    from: Option<ModelFormat>,
    #[arg(long, value_enum)]
    to: ModelFormat,
    /// For casa, the `.constraints` file is written next to it
    #[arg(long)]
    out: PathBuf,
    /// Strength recorded in CASA output when the model carries none
    #[arg(long, default_value_t = 2)]
    t: usize,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    t: usize,
}

/// Runs the CLI on the process streams and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    run_with(args, &mut std::io::stdout(), &mut std::io::stderr())
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("CTFORGE_LOG", "error");
    let _ = env_logger::Builder::from_env(env).try_init();
}

/// Runs the CLI with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inexpressible { .. } => EXIT_INEXPRESSIBLE,
        Error::GenerationFailed(_) => EXIT_FAILED,
        _ => EXIT_ERROR,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// The CASA constraints file belonging to a `.model` path.
pub fn casa_constraints_path(model: &Path) -> PathBuf {
    model.with_extension("constraints")
}

fn infer_format(path: &Path) -> ModelFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("model") => ModelFormat::Casa,
        _ => ModelFormat::Xacts,
    }
}

/// Reads a model; a missing CASA constraints file means no constraints.
pub fn load_model(path: &Path, format: Option<ModelFormat>) -> Result<SutModel> {
    let text = read(path)?;
    match format.unwrap_or_else(|| infer_format(path)) {
        ModelFormat::Acts => parse_acts(&text),
        ModelFormat::Xacts => parse_extended_acts(&text),
        ModelFormat::Casa => {
            let cpath = casa_constraints_path(path);
            let constraints = if cpath.exists() { Some(read(&cpath)?) } else { None };
            parse_casa(&text, constraints.as_deref())
        }
    }
}

fn cmd_gen(a: GenArgs) -> Result<(String, i32)> {
    let formula = parse_dimacs(&read(&a.cnf)?)?;
    let cfg = GenConfig {
        delta_a: a.delta,
        nabla_a: a.nabla,
        seeds: a.seeds,
        max_tries: a.max_tries,
        query_budget: Some(a.budget),
        time_limit: a.wall_timeout.map(Duration::from_secs_f64),
        gen_seed: a.gen_seed,
        ..GenConfig::new(a.n, a.cmin, a.cmax)
    };
    let mut result = generate(&formula, &cfg)?;
    let stem = a
        .cnf
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("sut")
        .to_string();
    result.model.name = stem.clone();
    result.provenance.source = a.cnf.display().to_string();

    std::fs::create_dir_all(&a.out)?;
    let model_path = a.out.join(format!("{stem}.xacts"));
    let sidecar_path = a.out.join(format!("{stem}.provenance"));
    write(&model_path, &write_extended_acts(&result.model))?;
    write(&sidecar_path, &result.provenance.to_sidecar())?;

    let mut s = String::new();
    let _ = writeln!(s, "status=success");
    let _ = writeln!(s, "model={}", model_path.display());
    let _ = writeln!(s, "provenance={}", sidecar_path.display());
    let _ = writeln!(s, "params={}", result.model.n_params());
    let _ = writeln!(s, "aux={}", result.model.aux_vars.len());
    let _ = writeln!(s, "constraints={}", result.model.constraints.len());
    let _ = writeln!(s, "measured_c={}", result.provenance.measured_c);
    let _ = writeln!(s, "tries={}", result.provenance.tries_used);
    Ok((s, EXIT_OK))
}

/// `key=value` lines describing a finished build.
pub fn build_stats(suite: &TestSuite, model: &SutModel, t: usize) -> Result<String> {
    let report = verify_mcac(model, t, suite)?;
    let st = &suite.meta.stats;
    let mut s = String::new();
    let _ = writeln!(s, "algorithm={}", suite.meta.algorithm);
    let _ = writeln!(s, "t={t}");
    let _ = writeln!(s, "seed={}", suite.meta.seed.map_or("none".into(), |x| x.to_string()));
    let _ = writeln!(s, "size={}", suite.len());
    let _ = writeln!(s, "wall_time_ms={:.3}", suite.meta.wall_time.as_secs_f64() * 1e3);
    let _ = writeln!(s, "sat_queries={}", st.sat_queries);
    let _ = writeln!(s, "limited_queries={}", st.limited_queries);
    let _ = writeln!(s, "amend_removals={}", st.amend_removals);
    let _ = writeln!(s, "slices={}", st.slices);
    let _ = writeln!(s, "peak_pool_bytes={}", st.peak_pool_bytes);
    let _ = writeln!(s, "total={}", report.total);
    let _ = writeln!(s, "allowed={}", report.allowed);
    let _ = writeln!(s, "forbidden={}", report.forbidden);
    let _ = writeln!(s, "valid={}", report.valid());
    let _ = writeln!(s, "fingerprint={}", suite.meta.model_fingerprint);
    Ok(s)
}

fn cmd_build(a: BuildArgs) -> Result<(String, i32)> {
    let model = load_model(&a.model.model, a.model.format)?;
    let bot = BotConfig {
        cb: Some(a.cb),
        seed: a.seed.unwrap_or(0),
        pool_budget: a.pool_bytes,
    };
    let suite = match a.alg {
        Algorithm::Ipog => build_ipog(&model, a.t, a.seed)?,
        Algorithm::Bot => build_bot(&model, a.t, bot)?,
        Algorithm::Pbot => build_pbot(&model, a.t, bot)?,
    };
    write(&a.out, &write_test_suite(&suite, &model)?)?;
    let stats = build_stats(&suite, &model, a.t)?;
    if let Some(path) = &a.stats {
        write(path, &stats)?;
    }
    Ok((stats, EXIT_OK))
}

fn cmd_verify(a: VerifyArgs) -> Result<(String, i32)> {
    let model = load_model(&a.model.model, a.model.format)?;
    let suite = read_test_suite(&read(&a.suite)?, &model)?;
    let report = verify_mcac(&model, a.t, &suite)?;
    if let Some(path) = &a.failures {
        write(path, &report.failures_csv(&model))?;
    }
    let code = if report.valid() { EXIT_OK } else { EXIT_FAILED };
    Ok((format!("{report}\n"), code))
}

fn cmd_convert(a: ConvertArgs) -> Result<(String, i32)> {
    let model = load_model(&a.input, a.from)?;
    match a.to {
        ModelFormat::Acts => write(&a.out, &write_acts(&model)?)?,
        ModelFormat::Xacts => write(&a.out, &write_extended_acts(&model))?,
        ModelFormat::Casa => {
            let (m, c) = write_casa(&model, model.strength_hint.unwrap_or(a.t))?;
            write(&a.out, &m)?;
            write(&casa_constraints_path(&a.out), &c)?;
        }
    }
    Ok((format!("written={}\n", a.out.display()), EXIT_OK))
}

fn cmd_stats(a: StatsArgs) -> Result<(String, i32)> {
    let model = load_model(&a.model.model, a.model.format)?;
    model.check_strength(a.t)?;
    let enc = compile(&model)?;
    let mut solver = enc.solver(SolverConfig::default());
    let (mut total, mut allowed) = (0u128, 0u128);
    for tau in enumerate_tuples(&model, a.t)? {
        total += 1;
        if is_allowed(&tau, &enc, &mut solver)? {
            allowed += 1;
        }
    }
    let mut s = String::new();
    let _ = writeln!(s, "params={}", model.n_params());
    let _ = writeln!(s, "aux={}", model.aux_vars.len());
    let _ = writeln!(s, "values={}", model.total_values());
    let _ = writeln!(s, "constraints={}", model.constraints.len());
    let _ = writeln!(s, "t={}", a.t);
    let _ = writeln!(s, "total={total} allowed={allowed} forbidden={}", total - allowed);
    Ok((s, EXIT_OK))
}
