//! Command-line front end.
//!
//! ```text
//! aoi-tradeoff analytic --p 0.4 --M 6 --es 4.02308 --et 4.02308
//! aoi-tradeoff simulate --p 0.4 --M 6 --seed 7 --estimator cycle
//! aoi-tradeoff sweep m --p 0.1,0.2,0.3,0.4 --M 1..6
//! aoi-tradeoff sweep power --dbm-min 2 --dbm-max 20 --dbm-step 3 --M 1,3,6
//! aoi-tradeoff validate --grid default --slots 1000000 --seed 7
//! ```
//!
//! Lists are comma separated, `a..b` is an inclusive integer range, powers
//! are in dBm. `--config FILE` reads a JSON object whose keys are flag names;
//! flags given on the command line take precedence.
//!
//! Exit codes: 0 success, 1 I/O error or failed validation, 2 bad usage or
//! invalid parameters.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analytic::{
    dbm_to_watts, noise_from_reference_snr, transmit_energy, EnergyParams, LinkSpec, MetricPoint, Policy,
    PowerModel,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::output::{self, Format};
use crate::simulator::{self, Estimator, SimConfig, DEFAULT_BATCHES, DEFAULT_HORIZON};
use crate::sweep::{self, CircuitModel, EsSweep, MSweep, Normalizer, PowerSweep, SweepBase, SweepSpec};
use crate::validate::{self, ValidationConfig};

const DEFAULT_PC: f64 = 2.1;
const DEFAULT_ETA: f64 = 19.2308;
const DEFAULT_PMAX_DBM: f64 = 20.0;

#[derive(Debug, Parser)]
#[command(name = "aoi-tradeoff", version, about = "Energy-age tradeoff of threshold-retransmission status updates")]
struct Cli {
    /// JSON file with default flag values (keys are flag names)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form average age and energy for one configuration
    #[command(args_override_self = true)]
    Analytic(AnalyticArgs),
    /// Monte Carlo estimate for one configuration
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Tradeoff curves
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Compare both estimators with the closed forms on a grid
    #[command(args_override_self = true)]
    Validate(ValidateArgs),
}

#[derive(Debug, Subcommand)]
enum SweepCommand {
    /// One curve per failure probability, points over M
    #[command(name = "m", args_override_self = true)]
    M(MSweepArgs),
    /// One curve per M, points over transmit power on a Rayleigh link
    #[command(args_override_self = true)]
    Power(PowerSweepArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to FILE instead of standard output
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CircuitArgs {
    /// Circuit power P_c in watts
    #[arg(long, default_value_t = DEFAULT_PC)]
    pc: f64,
    /// Inverse drain efficiency of the amplifier
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
    /// Maximum transmit power in dBm
    #[arg(long, default_value_t = DEFAULT_PMAX_DBM)]
    pmax_dbm: f64,
}

impl CircuitArgs {
    fn model(&self) -> CircuitModel {
        CircuitModel {
            circuit_power: self.pc,
            inv_drain_eff: self.eta,
            max_power: dbm_to_watts(self.pmax_dbm),
        }
    }
}

#[derive(Debug, Args)]
struct LinkArgs {
    /// Fixed per-slot failure probability
    #[arg(long)]
    p: Option<f64>,
    /// Transmit power in dBm (Rayleigh link)
    #[arg(long)]
    pt_dbm: Option<f64>,
    /// Spectral efficiency in bits/s/Hz (Rayleigh link)
    #[arg(long, default_value_t = 2.0)]
    rate: f64,
    /// Noise power in watts; derived from the reference SNR when absent
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long, default_value_t = 20.0)]
    snr_ref_db: f64,
    #[arg(long, default_value_t = 20.0)]
    p_ref_dbm: f64,
    /// Sensing energy per event (default P_c + eta * P_max)
    #[arg(long)]
    es: Option<f64>,
    /// Transmit energy per slot (default P_c + eta * P_t)
    #[arg(long)]
    et: Option<f64>,
    #[command(flatten)]
    circuit: CircuitArgs,
}

impl LinkArgs {
    fn resolve(&self) -> Result<(LinkSpec, EnergyParams, Option<f64>)> {
        let circuit = self.circuit.model();
        let (link, pt) = match (self.p, self.pt_dbm) {
            (Some(p), _) => (LinkSpec::fixed(p), None),
            (None, Some(dbm)) => {
                let noise = match self.noise {
                    Some(n) => n,
                    None => noise_from_reference_snr(dbm_to_watts(self.p_ref_dbm), self.snr_ref_db)?,
                };
                (LinkSpec::rayleigh(self.rate, noise, dbm_to_watts(dbm)), Some(dbm))
            }
            (None, None) => return Err(Error::InvalidSpec("either --p or --pt-dbm is required".into())),
        };
        let tx = match (self.et, pt) {
            (Some(et), _) => et,
            (None, Some(dbm)) => transmit_energy(&PowerModel {
                circuit_power: circuit.circuit_power,
                inv_drain_eff: circuit.inv_drain_eff,
                transmit_power: dbm_to_watts(dbm),
                max_power: circuit.max_power,
            })?,
            (None, None) => circuit.full_power_energy(),
        };
        let sense = self.es.unwrap_or_else(|| circuit.full_power_energy());
        Ok((link, EnergyParams::new(sense, tx)?, pt))
    }
}

#[derive(Debug, Args)]
struct AnalyticArgs {
    #[command(flatten)]
    link: LinkArgs,
    /// Maximum transmissions per packet
    #[arg(long = "M", value_parser = parse_count)]
    max_tx: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    link: LinkArgs,
    #[arg(long = "M", value_parser = parse_count)]
    max_tx: u64,
    #[arg(long, default_value_t = 0, value_parser = parse_count)]
    seed: u64,
    /// Slots (slot estimator) or success cycles (cycle estimator)
    #[arg(long, default_value_t = DEFAULT_HORIZON, value_parser = parse_count)]
    horizon: u64,
    #[arg(long, value_parser = parse_count)]
    warmup: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_BATCHES, value_parser = parse_count)]
    batches: u64,
    #[arg(long, default_value_t = Estimator::Slot)]
    estimator: Estimator,
    /// Write the per-slot age trace as CSV (slot estimator only)
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct CurveOptions {
    /// Repeat the sweep for each sensing energy and normalize each curve
    #[arg(long, value_parser = parse_f64_list)]
    es_list: Option<List<f64>>,
    /// Fixed energy normalizer (default with --es-list: E_s + reference E_t)
    #[arg(long)]
    normalize: Option<f64>,
    /// Keep only the Pareto-optimal points of each curve
    #[arg(long)]
    pareto: bool,
    /// Evaluate on the calling thread only
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct MSweepArgs {
    #[arg(long, value_parser = parse_f64_list)]
    p: List<f64>,
    #[arg(long = "M", value_parser = parse_count_list, default_value = "1..6")]
    max_tx: List<u64>,
    #[arg(long)]
    es: Option<f64>,
    #[arg(long)]
    et: Option<f64>,
    #[command(flatten)]
    circuit: CircuitArgs,
    #[command(flatten)]
    curve: CurveOptions,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct PowerSweepArgs {
    #[arg(long, default_value_t = 2.0)]
    dbm_min: f64,
    #[arg(long, default_value_t = 20.0)]
    dbm_max: f64,
    #[arg(long, default_value_t = 3.0)]
    dbm_step: f64,
    #[arg(long = "M", value_parser = parse_count_list, default_value = "1..6")]
    max_tx: List<u64>,
    #[arg(long, default_value_t = 2.0)]
    rate: f64,
    #[arg(long, default_value_t = 20.0)]
    snr_ref_db: f64,
    #[arg(long, default_value_t = 20.0)]
    p_ref_dbm: f64,
    #[arg(long)]
    es: Option<f64>,
    #[command(flatten)]
    circuit: CircuitArgs,
    #[command(flatten)]
    curve: CurveOptions,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Named grid; `default` is p in {0.1, 0.4, 0.7} x M in {1, 3, 6}
    #[arg(long, default_value = "default")]
    grid: String,
    #[arg(long, value_parser = parse_f64_list)]
    p: Option<List<f64>>,
    #[arg(long = "M", value_parser = parse_count_list)]
    max_tx: Option<List<u64>>,
    #[arg(long, default_value_t = DEFAULT_HORIZON, value_parser = parse_count)]
    slots: u64,
    /// Success cycles for the cycle estimator (default: same as --slots)
    #[arg(long, value_parser = parse_count)]
    cycles: Option<u64>,
    #[arg(long, default_value_t = 0, value_parser = parse_count)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BATCHES, value_parser = parse_count)]
    batches: u64,
    #[arg(long)]
    es: Option<f64>,
    #[arg(long)]
    et: Option<f64>,
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    out: OutputArgs,
}

/// Comma-separated list flag value. Wrapped so clap treats it as one value.
#[derive(Clone, Debug, PartialEq)]
struct List<T>(Vec<T>);

/// Non-negative integer; accepts `1000000`, `1e6` or `1000000.0`.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

/// Comma-separated integers and inclusive ranges, e.g. `1..3,6`.
fn parse_count_list(s: &str) -> std::result::Result<List<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b) = (parse_count(a)?, parse_count(b)?);
            if a > b {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(a..=b);
        } else {
            out.push(parse_count(part)?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(List(out))
}

fn parse_f64_list(s: &str) -> std::result::Result<List<f64>, String> {
    let out = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(List(out))
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) => Failure::Runtime(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Pulls `--config FILE` out of the arguments and splices the file's
/// key/value pairs in as flags right after the subcommand names, so that
/// explicit flags later on the command line override them.
fn expand_config(args: Vec<OsString>) -> std::result::Result<Vec<OsString>, Failure> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let text = a.to_string_lossy();
        if text == "--config" {
            match it.next() {
                Some(path) => config = Some(PathBuf::from(path)),
                None => return Err(Failure::Usage("--config requires a file".into())),
            }
        } else if let Some(path) = text.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad config {}: {e}", path.display())))?;
    let serde_json::Value::Object(map) = value else {
        return Err(Failure::Usage("config must be a JSON object".into()));
    };

    let mut tokens = Vec::new();
    for (key, v) in map {
        let flag = format!("--{key}");
        let scalar = |v: &serde_json::Value| -> std::result::Result<String, Failure> {
            match v {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Number(n) => Ok(n.to_string()),
                _ => Err(Failure::Usage(format!("config key `{key}` has an unsupported value"))),
            }
        };
        match &v {
            serde_json::Value::Null | serde_json::Value::Bool(false) => {}
            serde_json::Value::Bool(true) => tokens.push(flag),
            serde_json::Value::Array(items) => {
                let joined = items.iter().map(scalar).collect::<std::result::Result<Vec<_>, _>>()?.join(",");
                tokens.push(flag);
                tokens.push(joined);
            }
            other => {
                tokens.push(flag);
                tokens.push(scalar(other)?);
            }
        }
    }

    // program name, subcommand, and the sweep kind if present
    let mut head = 1.min(rest.len());
    if rest.get(1).is_some_and(|a| !a.to_string_lossy().starts_with('-')) {
        head = 2;
        if rest[1] == "sweep" && rest.get(2).is_some_and(|a| !a.to_string_lossy().starts_with('-')) {
            head = 3;
        }
    }
    let tail = rest.split_off(head);
    rest.extend(tokens.into_iter().map(OsString::from));
    rest.extend(tail);
    Ok(rest)
}

/// Renders into memory first so that a failing command leaves no partial
/// output file behind.
fn deliver(out: &OutputArgs, render: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> std::result::Result<(), Failure> {
    let mut buf = Vec::new();
    render(&mut buf)?;
    match &out.output {
        Some(path) => write_atomic(path, &buf).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&buf)
            .map_err(|e| Failure::Runtime(e.to_string())),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn analytic(args: AnalyticArgs) -> std::result::Result<i32, Failure> {
    let (link, energy, pt) = args.link.resolve()?;
    let mut point = MetricPoint::evaluate(link, Policy::new(args.max_tx)?, energy)?;
    point.pt_dbm = pt;
    deliver(&args.out, |buf| output::emit_point(buf, &point, args.out.format))?;
    Ok(0)
}

fn simulate(args: SimulateArgs) -> std::result::Result<i32, Failure> {
    let (link, energy, _) = args.link.resolve()?;
    let mut cfg = SimConfig::new(link, Policy::new(args.max_tx)?, energy)
        .seed(args.seed)
        .horizon(args.horizon)
        .batches(args.batches);
    cfg.warmup = args.warmup;

    let result = match (&args.trace, args.estimator) {
        (Some(path), Estimator::Slot) => {
            let (res, trace) = simulator::run_slot_sim_traced(&cfg)?;
            let mut buf = Vec::new();
            trace.write_csv(&mut buf)?;
            write_atomic(path, &buf).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            res
        }
        (Some(_), Estimator::Cycle) => {
            return Err(Failure::Usage("--trace is only available with the slot estimator".into()))
        }
        (None, est) => simulator::run(&cfg, est)?,
    };
    deliver(&args.out, |buf| output::emit_sim_result(buf, &result, args.out.format))?;
    Ok(0)
}

fn finish_curves(
    spec: SweepSpec,
    curve: &CurveOptions,
    out: &OutputArgs,
) -> std::result::Result<i32, Failure> {
    let mut curves = sweep::run(&spec, execution(curve.sequential))?;
    if let (Some(n), None) = (curve.normalize, &curve.es_list) {
        curves = curves
            .iter()
            .map(|c| sweep::normalize_curve(c, n))
            .collect::<Result<Vec<_>>>()?;
    }
    if curve.pareto {
        for c in &mut curves {
            c.points = sweep::pareto_front(&c.points)?;
        }
    }
    deliver(out, |buf| output::emit_curves(buf, &curves, out.format))?;
    Ok(0)
}

fn with_es_list(base: SweepBase, curve: &CurveOptions) -> SweepSpec {
    match &curve.es_list {
        Some(list) => SweepSpec::Es(EsSweep {
            es_list: list.0.clone(),
            base,
            normalizer: curve.normalize.map(Normalizer::Fixed).unwrap_or_default(),
        }),
        None => match base {
            SweepBase::M(m) => SweepSpec::M(m),
            SweepBase::Power(p) => SweepSpec::Power(p),
        },
    }
}

fn sweep_m(args: MSweepArgs) -> std::result::Result<i32, Failure> {
    let reference = args.circuit.model().full_power_energy();
    let energy = EnergyParams::new(args.es.unwrap_or(reference), args.et.unwrap_or(reference))?;
    let base = SweepBase::M(MSweep {
        p_list: args.p.0,
        max_tx: args.max_tx.0,
        energy,
    });
    finish_curves(with_es_list(base, &args.curve), &args.curve, &args.out)
}

fn sweep_power(args: PowerSweepArgs) -> std::result::Result<i32, Failure> {
    let circuit = args.circuit.model();
    let base = SweepBase::Power(PowerSweep {
        dbm_min: args.dbm_min,
        dbm_max: args.dbm_max,
        dbm_step: args.dbm_step,
        max_tx: args.max_tx.0,
        rate: args.rate,
        snr_ref_db: args.snr_ref_db,
        p_ref_dbm: args.p_ref_dbm,
        sense_energy: args.es.unwrap_or_else(|| circuit.full_power_energy()),
        circuit,
    });
    finish_curves(with_es_list(base, &args.curve), &args.curve, &args.out)
}

fn validate_cmd(args: ValidateArgs) -> std::result::Result<i32, Failure> {
    if args.grid != "default" {
        return Err(Failure::Usage(format!("unknown grid `{}` (only `default` exists)", args.grid)));
    }
    let defaults = ValidationConfig::default();
    let cfg = ValidationConfig {
        p_list: args.p.map_or(defaults.p_list, |l| l.0),
        max_tx: args.max_tx.map_or(defaults.max_tx, |l| l.0),
        energy: EnergyParams::new(
            args.es.unwrap_or(defaults.energy.sense),
            args.et.unwrap_or(defaults.energy.tx),
        )?,
        slots: args.slots,
        cycles: args.cycles.unwrap_or(args.slots),
        seed: args.seed,
        batches: args.batches,
    };
    let report = validate::run_validation(&cfg, execution(args.sequential))?;
    deliver(&args.out, |buf| output::emit_validation(buf, &report, args.out.format))?;
    Ok(if report.all_pass { 0 } else { 1 })
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    match run(argv.into_iter().map(Into::into).collect()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn run(argv: Vec<OsString>) -> std::result::Result<i32, Failure> {
    let argv = expand_config(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return Ok(code);
        }
    };
    match cli.command {
        Command::Analytic(a) => analytic(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(SweepCommand::M(a)) => sweep_m(a),
        Command::Sweep(SweepCommand::Power(a)) => sweep_power(a),
        Command::Validate(a) => validate_cmd(a),
    }
}
