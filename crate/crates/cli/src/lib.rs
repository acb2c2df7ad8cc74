//! Command-line front end for the nmext lab: extractor evaluation,
//! non-malleability scans, lemma sweeps and protocol experiments.
//!
//! [`run`] is the whole program minus process plumbing, so tests can drive it
//! in-process. Exit codes: 0 success, 2 a checked inequality or cross-check
//! failed, 3 an enumeration exceeded its budget, 64 bad usage or parameters,
//! 1 anything else.

mod config;
pub mod report;
mod source_spec;
pub mod sweeps;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nmext_core::extractors::{nmext_eval, NmExtParams};
use nmext_core::mac::{forgery_bound, key_bias, mac_forgery_advantage, MacParams};
use nmext_core::nmscan::{nm_distance_scan, ScanMode};
use nmext_core::protocol::adversary::AdversarySpec;
use nmext_core::protocol::experiment::{one_round_output_distance, security_experiment, Mode};
use nmext_core::protocol::ProtocolParams;
use nmext_core::scalar::{exact_string, to_f64};
use nmext_core::cq_lab::{leak_scan, GameTable};
use nmext_core::{Error as CoreError, FpVector};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;

pub use config::ExperimentConfig;
pub use source_spec::parse_source;

pub const SCHEMA_VERSION: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("io: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(CoreError::Domain(_)) | CliError::Core(CoreError::DivisionByZero(_)) => {
                EXIT_USAGE
            }
            CliError::Core(CoreError::Resource { .. }) => EXIT_RESOURCE,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "nmext", version, about = "Non-malleable extractor lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Master seed; `NMEXT_SEED` overrides it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    #[serde(skip)]
    output: Option<PathBuf>,
    /// Flat `key = value` file whose entries act as default flags.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Exhaustive,
    MonteCarlo,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate nmExt(x, y) for coefficient lists over F_p.
    #[command(args_override_self = true)]
    NmextEval(EvalArgs),
    /// Exact non-malleability distance for every fixed-point-free strategy.
    #[command(args_override_self = true)]
    NmScan(ScanArgs),
    /// Random XOR-lemma checks, one CSV row per inequality.
    #[command(args_override_self = true)]
    XorSweep(SweepArgs),
    /// Random collision-probability sandwich checks.
    #[command(args_override_self = true)]
    SandwichSweep(SweepArgs),
    /// Communication-game bound against leak functions.
    #[command(args_override_self = true)]
    GameScan(GameArgs),
    /// Exact forgery advantage against the polynomial MAC.
    #[command(args_override_self = true)]
    MacAttack(MacArgs),
    /// Security experiment for the two-round protocol.
    #[command(args_override_self = true)]
    DwRun(DwArgs),
    /// Security experiment for the one-round protocol.
    #[command(args_override_self = true)]
    OneRoundRun(OneRoundArgs),
    /// The full battery of checks with a pass/fail line each.
    #[command(args_override_self = true)]
    Report(ReportArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::NmextEval(_) => "nmext-eval",
            Command::NmScan(_) => "nm-scan",
            Command::XorSweep(_) => "xor-sweep",
            Command::SandwichSweep(_) => "sandwich-sweep",
            Command::GameScan(_) => "game-scan",
            Command::MacAttack(_) => "mac-attack",
            Command::DwRun(_) => "dw-run",
            Command::OneRoundRun(_) => "one-round-run",
            Command::Report(_) => "report",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::NmextEval(a) => &a.common,
            Command::NmScan(a) => &a.common,
            Command::XorSweep(a) | Command::SandwichSweep(a) => &a.common,
            Command::GameScan(a) => &a.common,
            Command::MacAttack(a) => &a.common,
            Command::DwRun(a) => &a.common,
            Command::OneRoundRun(a) => &a.common,
            Command::Report(a) => &a.common,
        }
    }

    fn common_mut(&mut self) -> &mut Common {
        match self {
            Command::NmextEval(a) => &mut a.common,
            Command::NmScan(a) => &mut a.common,
            Command::XorSweep(a) | Command::SandwichSweep(a) => &mut a.common,
            Command::GameScan(a) => &mut a.common,
            Command::MacAttack(a) => &mut a.common,
            Command::DwRun(a) => &mut a.common,
            Command::OneRoundRun(a) => &mut a.common,
            Command::Report(a) => &mut a.common,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct EvalArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    n: usize,
    /// Comma-separated coefficients of x (length n).
    #[arg(long)]
    x: String,
    /// Comma-separated coefficients of y (length n/2).
    #[arg(long)]
    y: String,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct ScanArgs {
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// uniform | constant:X | prefix:S | half | subset:a,b,.. | pmf:PATH
    #[arg(long, default_value = "uniform")]
    source: String,
    /// none | copy | mod:K
    #[arg(long, default_value = "none")]
    leak: String,
    /// Scan this many random strategies instead of all of them.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    #[arg(long, default_value_t = 1000)]
    cases: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct GameArgs {
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Only this collision function; every nonzero `a` otherwise.
    #[arg(long)]
    a: Option<u32>,
    /// Random leak functions checked on top of the enumeration.
    #[arg(long, default_value_t = 1000)]
    samples: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct MacArgs {
    #[arg(long, default_value_t = 2)]
    t: u32,
    #[arg(long, default_value_t = 1)]
    blocks: u32,
    /// Size of the uniform value the key is derived from; full key space
    /// `2^(2t)` when omitted.
    #[arg(long)]
    key_space: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

/// Source, adversary and mode flags shared by both protocol experiments.
#[derive(Debug, Args, Serialize)]
struct RunArgs {
    #[arg(long, default_value = "uniform")]
    source: String,
    #[arg(long, default_value = "none")]
    leak: String,
    /// identity | shift-seed:D | xor:S:T | flip-tag:B | garbage | malformed
    #[arg(long, default_value = "identity")]
    adversary: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Trial count in Monte Carlo mode.
    #[arg(long, default_value_t = 10000)]
    trials: u64,
    /// Include the per-execution transcript of the first honest run.
    #[arg(long, default_value_t = false)]
    transcript: bool,
}

#[derive(Debug, Args, Serialize)]
struct DwArgs {
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d2: u32,
    #[arg(long, default_value_t = 2)]
    t: u32,
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Claimed min-entropy in bits, reported only.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    eps_mac: Option<Ratio<u64>>,
    #[arg(long)]
    eps_ext: Option<Ratio<u64>>,
    #[arg(long)]
    eps_nmext: Option<Ratio<u64>>,
    #[command(flatten)]
    #[serde(flatten)]
    run: RunArgs,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct OneRoundArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Tag bits; derived from `k` and `eps` when omitted.
    #[arg(long)]
    v: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    eps: Option<Ratio<u64>>,
    #[command(flatten)]
    #[serde(flatten)]
    run: RunArgs,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct ReportArgs {
    /// Random cases per sweep.
    #[arg(long, default_value_t = 1000)]
    cases: u64,
    /// Random cases for the guessing measurement.
    #[arg(long, default_value_t = 200)]
    guess_cases: u64,
    #[command(flatten)]
    #[serde(flatten)]
    common: Common,
}

/// Runs the program with `NMEXT_SEED` taken from the process environment.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let env_seed = std::env::var("NMEXT_SEED").ok();
    run_with_env(argv, env_seed.as_deref(), out, err)
}

/// Runs the program; `env_seed` plays the role of `NMEXT_SEED`.
pub fn run_with_env(argv: &[String], env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(argv, env_seed, out, err) {
        Ok(code) => code,
        Err(Exit::Clap(e)) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            code
        }
        Err(Exit::Cli(e)) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

enum Exit {
    Clap(clap::Error),
    Cli(CliError),
}

impl<E: Into<CliError>> From<E> for Exit {
    fn from(e: E) -> Self {
        Exit::Cli(e.into())
    }
}

/// Finds `--config PATH` (or `--config=PATH`) in the raw arguments.
fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = a.strip_prefix("--config=") {
            return Some(rest.to_string());
        }
    }
    None
}

/// Splices config entries between the subcommand and the user's flags, so
/// explicit flags override them.
fn expand_args(argv: &[String]) -> Result<Vec<String>, CliError> {
    let Some(path) = config_path(argv) else {
        return Ok(argv.to_vec());
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let cfg = ExperimentConfig::parse(&text)?;
    let mut args = argv.to_vec();
    if args.is_empty() {
        args.push("nmext".into());
    }
    let has_sub = args.get(1).is_some_and(|a| !a.starts_with('-'));
    match (&cfg.experiment, has_sub) {
        (Some(exp), true) if *exp != args[1] => {
            return Err(CliError::Usage(format!("config is for `{exp}` but the subcommand is `{}`", args[1])))
        }
        (Some(exp), false) => args.insert(1, exp.clone()),
        (None, false) => return Err(CliError::Usage("no subcommand given and the config names no experiment".into())),
        _ => {}
    }
    let tail = args.split_off(2);
    args.extend(cfg.to_args());
    args.extend(tail);
    Ok(args)
}

fn dispatch(argv: &[String], env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Exit> {
    let args = expand_args(argv)?;
    let mut cli = Cli::try_parse_from(&args).map_err(Exit::Clap)?;
    if let Some(s) = env_seed {
        cli.command.common_mut().seed =
            s.trim().parse().map_err(|_| CliError::Usage(format!("NMEXT_SEED = {s:?} is not an unsigned integer")))?;
    }
    let name = cli.command.name();
    let common = cli.command.common().clone();
    let output = match &cli.command {
        Command::NmextEval(a) => nmext_eval_cmd(a)?,
        Command::NmScan(a) => nm_scan_cmd(a)?,
        Command::XorSweep(a) => sweep_cmd(a, false)?,
        Command::SandwichSweep(a) => sweep_cmd(a, true)?,
        Command::GameScan(a) => game_scan_cmd(a)?,
        Command::MacAttack(a) => mac_attack_cmd(a)?,
        Command::DwRun(a) => dw_cmd(a)?,
        Command::OneRoundRun(a) => one_round_cmd(a)?,
        Command::Report(a) => report_cmd(a)?,
    };
    let body = match output.body {
        Body::Text(t) => t,
        Body::Json(result) => {
            let config = match &cli.command {
                Command::NmextEval(a) => serde_json::to_value(a)?,
                Command::NmScan(a) => serde_json::to_value(a)?,
                Command::XorSweep(a) | Command::SandwichSweep(a) => serde_json::to_value(a)?,
                Command::GameScan(a) => serde_json::to_value(a)?,
                Command::MacAttack(a) => serde_json::to_value(a)?,
                Command::DwRun(a) => serde_json::to_value(a)?,
                Command::OneRoundRun(a) => serde_json::to_value(a)?,
                Command::Report(a) => serde_json::to_value(a)?,
            };
            let envelope = json!({ "schema": SCHEMA_VERSION, "command": name, "config": config, "result": result });
            serde_json::to_string_pretty(&envelope)? + "\n"
        }
    };
    match &common.output {
        Some(path) => std::fs::write(path, body.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => out.write_all(body.as_bytes())?,
    }
    if let Some(s) = output.summary {
        writeln!(err, "{s}")?;
    }
    Ok(if output.violation { EXIT_VIOLATION } else { EXIT_OK })
}

enum Body {
    Text(String),
    Json(serde_json::Value),
}

struct Output {
    body: Body,
    summary: Option<String>,
    violation: bool,
}

impl Output {
    fn json(value: impl Serialize, violation: bool) -> Result<Self, CliError> {
        Ok(Output { body: Body::Json(serde_json::to_value(value)?), summary: None, violation })
    }
}

fn coeffs(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|c| c.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("bad coefficient {c:?} in {text:?}"))))
        .collect()
}

fn nmext_eval_cmd(a: &EvalArgs) -> Result<Output, CliError> {
    let params = NmExtParams::new(a.p, a.n)?;
    let x = FpVector::new(params.field(), coeffs(&a.x)?)?;
    let y = FpVector::new(params.field(), coeffs(&a.y)?)?;
    let z = nmext_eval(&params, &x, &y)?;
    Ok(Output { body: Body::Text(format!("{z}\n")), summary: None, violation: false })
}

fn source_count(p: u32, n: usize) -> Result<u64, CliError> {
    u32::try_from(n)
        .ok()
        .and_then(|n| (p as u64).checked_pow(n))
        .ok_or(CliError::Core(CoreError::Resource { size: u128::MAX, limit: u64::MAX as u128 }))
}

fn nm_scan_cmd(a: &ScanArgs) -> Result<Output, CliError> {
    let params = NmExtParams::new(a.p, a.n)?;
    let source = parse_source(&a.source, source_count(a.p, a.n)?, &a.leak)?;
    let mode = match a.samples {
        Some(count) => ScanMode::Sampled { count, seed: a.common.seed },
        None => ScanMode::Exhaustive,
    };
    let report = nm_distance_scan(&params, &source, mode)?;
    let violation = !report.all_agree;
    let summary = format!(
        "nm-scan: {} strategies scanned of {}, max distance {}, mean {}, paths agree: {}",
        report.rows.len(),
        report.strategies_total,
        exact_string(&report.max),
        exact_string(&report.mean),
        report.all_agree
    );
    let mut out = match a.format {
        Format::Json => Output::json(&report, violation)?,
        Format::Csv => {
            let mut text = String::from("index,strategy,distance,oracle,agree\n");
            for r in &report.rows {
                let strategy: Vec<String> =
                    r.strategy.iter().map(|f| f.iter().map(|y| y.to_string()).collect::<Vec<_>>().join(" ")).collect();
                text += &format!(
                    "{},{},{},{},{}\n",
                    r.index,
                    strategy.join("|"),
                    exact_string(&r.distance),
                    exact_string(&r.oracle),
                    r.agree
                );
            }
            Output { body: Body::Text(text), summary: None, violation }
        }
    };
    out.summary = Some(summary);
    Ok(out)
}

fn sweep_cmd(a: &SweepArgs, sandwich: bool) -> Result<Output, CliError> {
    let seed = a.common.seed;
    let rows = sweeps::sweep(a.cases, |id| {
        let case = sweeps::lab_case(seed, id)?;
        if sandwich {
            sweeps::sandwich_rows(&case)
        } else {
            sweeps::xor_rows(&case)
        }
    })?;
    let violations = rows.iter().filter(|r| r.violated()).count();
    let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    let summary = format!("{} rows over {} cases, {violations} violations, worst margin {worst:e}", rows.len(), a.cases);
    let mut out = match a.format {
        Format::Json => Output::json(json!({ "rows": rows, "violations": violations }), violations > 0)?,
        Format::Csv => {
            let mut text = String::from(sweeps::CSV_HEADER);
            text.push('\n');
            for r in &rows {
                text += &r.csv();
                text.push('\n');
            }
            Output { body: Body::Text(text), summary: None, violation: violations > 0 }
        }
    };
    out.summary = Some(summary);
    Ok(out)
}

fn game_scan_cmd(a: &GameArgs) -> Result<Output, CliError> {
    let params = NmExtParams::new(a.p, a.n)?;
    let values: Vec<u32> = match a.a {
        Some(v) if v == 0 || v >= a.p => return Err(CliError::Usage(format!("a = {v} must be a nonzero element of F_{}", a.p))),
        Some(v) => vec![v],
        None => (1..a.p).collect(),
    };
    let mut reports = Vec::new();
    for v in values {
        let table = GameTable::from_g_a(&params, v)?;
        let r = leak_scan(&table, a.samples, a.common.seed ^ v as u64)?;
        reports.push(json!({ "a": v, "max_win_exact": r.max_win_string(), "scan": r }));
    }
    let violations: u64 = reports.iter().map(|r| r["scan"]["violations"].as_u64().unwrap_or(0)).sum();
    let mut out = Output::json(json!({ "scans": reports, "violations": violations }), violations > 0)?;
    out.summary = Some(format!("game-scan: {violations} violations"));
    Ok(out)
}

fn mac_attack_cmd(a: &MacArgs) -> Result<Output, CliError> {
    let params = match a.key_space {
        Some(d) => MacParams::new(a.t, a.blocks, d)?,
        None => MacParams::uniform(a.t, a.blocks)?,
    };
    let full = MacParams::uniform(a.t, a.blocks)?;
    let advantage = mac_forgery_advantage(&full)?;
    let bound = forgery_bound(&full);
    let bias = key_bias(&params)?;
    let violation = advantage > bound;
    let result = json!({
        "t": a.t,
        "blocks": a.blocks,
        "key_space": params.key_space(),
        "key_space_deficient": params.key_space_deficient(),
        "advantage": exact_string(&advantage),
        "advantage_approx": to_f64(&advantage),
        "bound": exact_string(&bound),
        "key_bias": exact_string(&bias),
    });
    let mut out = Output::json(result, violation)?;
    out.summary = Some(format!("mac-attack: advantage {} vs bound {}", exact_string(&advantage), exact_string(&bound)));
    Ok(out)
}

fn mode_of(run: &RunArgs) -> Mode {
    match run.mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::MonteCarlo => Mode::MonteCarlo { trials: run.trials },
    }
}

fn run_protocol(params: ProtocolParams, run: &RunArgs, seed: u64) -> Result<Output, CliError> {
    let source = parse_source(&run.source, params.source_count().try_into().unwrap_or(u64::MAX), &run.leak)?;
    let spec: AdversarySpec = run.adversary.parse()?;
    let adversary = spec.build(&params)?;
    let report = security_experiment(&params, &source, adversary.as_ref(), mode_of(run), seed)?;
    let violation = report.ledger_discrepancy != num_traits::Zero::zero();
    let mut result = serde_json::to_value(&report)?;
    result["params"] = serde_json::to_value(params)?;
    if run.transcript {
        let (x, e) = source.atoms().next().map(|(x, e, _)| (x, e)).unwrap_or((0, 0));
        let ctx = nmext_core::protocol::experiment::Context::new(params)?;
        let honest = ctx.execute(x, e, 0, 0, 0, &nmext_core::protocol::adversary::Identity, false)?;
        result["transcript"] = serde_json::to_value(honest.to_record(&params)?)?;
    }
    if params.kind == nmext_core::protocol::ProtocolKind::OneRound && matches!(run.mode, ModeArg::Exhaustive) {
        let d = one_round_output_distance(&params, &source)?;
        result["honest_output_distance"] = json!({ "exact": exact_string(&d), "approx": to_f64(&d) });
    }
    let summary = format!(
        "{}: correctness {}, robustness failures {} (pre) {} (post), ledger discrepancy {}",
        report.adversary,
        exact_string(&report.correctness),
        exact_string(&report.robustness_pre),
        exact_string(&report.robustness_post),
        exact_string(&report.ledger_discrepancy)
    );
    let mut out = Output::json(result, violation)?;
    out.summary = Some(summary);
    Ok(out)
}

fn dw_cmd(a: &DwArgs) -> Result<Output, CliError> {
    let mut params = ProtocolParams::dw(a.p, a.n, a.d2, a.t, a.m)?;
    params = params.with_eps(
        a.eps_mac.unwrap_or(params.eps_mac),
        a.eps_ext.unwrap_or(params.eps_ext),
        a.eps_nmext.unwrap_or(params.eps_nmext),
    );
    if let Some(k) = a.k {
        params = params.with_k(k);
    }
    run_protocol(params, &a.run, a.common.seed)
}

fn one_round_cmd(a: &OneRoundArgs) -> Result<Output, CliError> {
    let params = match (a.v, a.k, a.eps) {
        (Some(v), k, _) => {
            let p = ProtocolParams::one_round_with(a.n, v)?;
            k.map_or(p, |k| p.with_k(k))
        }
        (None, Some(k), Some(eps)) => ProtocolParams::one_round(a.n, k, eps)?,
        (None, _, _) => return Err(CliError::Usage("one-round-run needs --v, or both --k and --eps".into())),
    };
    run_protocol(params, &a.run, a.common.seed)
}

fn report_cmd(a: &ReportArgs) -> Result<Output, CliError> {
    let checks = report::battery(a.cases, a.guess_cases, a.common.seed)?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    let summary = checks.iter().map(|c| c.line()).collect::<Vec<_>>().join("\n");
    let mut out = Output::json(json!({ "checks": checks, "failed": failed }), failed > 0)?;
    out.summary = Some(summary);
    Ok(out)
}
