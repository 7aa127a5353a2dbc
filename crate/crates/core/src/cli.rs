//! Command-line front end.
//!
//! Every run prints one JSON document carrying the tool version, the unit
//! mode, the fully resolved configuration and (for stochastic commands) the
//! seed, followed by the command's result. Floats are written with 17
//! significant digits. Domain errors exit with status 1 and print the error
//! name on stderr; usage errors exit with status 2.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::bounds::{bound_report, ClockBody};
use crate::clockstates::{identity_residual, time_state, ClockPOVM, StateVector};
use crate::error::{invalid, ClockError, Result};
use crate::measurement::{outcome_probabilities, sample};
use crate::spectrum::{
    build_equally_spaced, build_rational, build_rational_with_period, build_rationalized,
    read_spectrum, write_spectrum, ClockSpectrum, RationalRatio, SpectrumKind,
    DEFAULT_CAPACITY_BITS,
};
use crate::units::ConstantsSet;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "qclock",
    version,
    about = "Finite-dimensional quantum clock laboratory"
)]
pub struct Cli {
    /// Unit system for all inputs and outputs.
    #[arg(long, global = true, value_enum, default_value_t = Units::Si)]
    pub units: Units,
    /// Constants file (key=value with hbar, c, G); SI mode only.
    #[arg(long, global = true, value_name = "FILE")]
    pub constants: Option<PathBuf>,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Si,
    Natural,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a spectrum and write it to a spectrum file.
    Build(BuildArgs),
    /// Residual of the discrete POVM resolution of the identity.
    CheckIdentity(CheckArgs),
    /// Simulate a time measurement.
    Measure(MeasureArgs),
    /// Evaluate every resolution bound for one clock.
    Bounds(BoundsArgs),
    /// Tabulate the bounds over one parameter as CSV.
    Sweep(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    EquallySpaced,
    Rational,
    Rationalized,
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Number of excited levels (equally spaced).
    #[arg(long)]
    pub p: Option<usize>,
    /// Period T.
    #[arg(long = "T", value_name = "T")]
    #[serde(rename = "T")]
    pub period: Option<f64>,
    /// Ratios E_n/E_1 for n >= 2, comma separated, e.g. 3/2,2.
    #[arg(long, value_delimiter = ',')]
    pub ratios: Vec<String>,
    /// First excited energy E_1 (rational; alternative to --T).
    #[arg(long)]
    pub e1: Option<f64>,
    /// Energy levels E_0 = 0 < E_1 < ... (rationalized), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub levels: Vec<f64>,
    /// Rationalization tolerance on each ratio E_n/E_1.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Spectrum file to write.
    #[arg(long, value_name = "FILE")]
    pub write: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long, value_name = "FILE")]
    pub spectrum: PathBuf,
    #[arg(long)]
    pub z: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau0: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct MeasureArgs {
    #[arg(long, value_name = "FILE")]
    pub spectrum: PathBuf,
    #[arg(long)]
    pub z: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau0: f64,
    /// Prepared state: taum:k, energy:n or t:F.
    #[arg(long, value_parser = parse_state)]
    #[serde(serialize_with = "serialize_display")]
    pub state: StateSpec,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the outcome histogram as CSV.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct BoundsArgs {
    /// Clock diameter l_C.
    #[arg(long)]
    pub lc: f64,
    /// Rest mass m_rest.
    #[arg(long, default_value_t = 0.0)]
    pub mrest: f64,
    /// Inertial mass for the spreading bound; defaults to m_rest.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Period of an equally spaced clock (with --p).
    #[arg(long = "T", value_name = "T")]
    #[serde(rename = "T")]
    pub period: Option<f64>,
    #[arg(long)]
    pub p: Option<usize>,
    /// Spectrum file (instead of --T and --p).
    #[arg(long, value_name = "FILE", conflicts_with_all = ["period", "p"])]
    pub spectrum: Option<PathBuf>,
    /// Number of grid points minus one; defaults to p (equal spacing) or r_p.
    #[arg(long)]
    pub z: Option<u64>,
    /// Operational time Θ <= T; defaults to T.
    #[arg(long)]
    pub theta: Option<f64>,
    /// param:min:max:steps[:log] with param one of lc, mrest, mass, T, theta, z.
    #[arg(long, value_parser = parse_sweep)]
    #[serde(serialize_with = "serialize_opt_display")]
    pub sweep: Option<SweepSpec>,
    /// CSV file for the sweep table.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    GridState(u64),
    Energy(usize),
    Time(f64),
}

impl std::fmt::Display for StateSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateSpec::GridState(k) => write!(f, "taum:{k}"),
            StateSpec::Energy(n) => write!(f, "energy:{n}"),
            StateSpec::Time(t) => write!(f, "t:{t:e}"),
        }
    }
}

fn parse_state(s: &str) -> std::result::Result<StateSpec, String> {
    let (tag, val) = s
        .split_once(':')
        .ok_or_else(|| format!("expected taum:k, energy:n or t:F, got {s:?}"))?;
    let bad = |e: &dyn std::fmt::Display| format!("bad value in {s:?}: {e}");
    match tag {
        "taum" => val.parse().map(StateSpec::GridState).map_err(|e| bad(&e)),
        "energy" => val.parse().map(StateSpec::Energy).map_err(|e| bad(&e)),
        "t" => val.parse().map(StateSpec::Time).map_err(|e| bad(&e)),
        _ => Err(format!(
            "unknown state kind {tag:?}; expected taum, energy or t"
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Lc,
    Mrest,
    Mass,
    #[serde(rename = "T")]
    Period,
    Theta,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub log: bool,
}

impl std::fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = serde_json::to_value(self.param)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        write!(f, "{name}:{:e}:{:e}:{}", self.min, self.max, self.steps)?;
        if self.log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

impl SweepSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let f = i as f64 / last;
                if self.log {
                    (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp()
                } else {
                    self.min + f * (self.max - self.min)
                }
            })
            .collect()
    }
}

fn parse_sweep(s: &str) -> std::result::Result<SweepSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(parts.len() == 4 || parts.len() == 5 && parts[4] == "log") {
        return Err(format!("expected param:min:max:steps[:log], got {s:?}"));
    }
    let param = match parts[0] {
        "lc" => SweepParam::Lc,
        "mrest" => SweepParam::Mrest,
        "mass" => SweepParam::Mass,
        "T" => SweepParam::Period,
        "theta" => SweepParam::Theta,
        "z" => SweepParam::Z,
        other => return Err(format!("unknown sweep parameter {other:?}")),
    };
    let min: f64 = parts[1].parse().map_err(|e| format!("bad minimum: {e}"))?;
    let max: f64 = parts[2].parse().map_err(|e| format!("bad maximum: {e}"))?;
    let steps: usize = parts[3]
        .parse()
        .map_err(|e| format!("bad step count: {e}"))?;
    let log = parts.len() == 5;
    if steps == 0 || !min.is_finite() || !max.is_finite() || min > max || log && min <= 0.0 {
        return Err(format!("invalid sweep range in {s:?}"));
    }
    Ok(SweepSpec {
        param,
        min,
        max,
        steps,
        log,
    })
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn serialize_opt_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &Option<T>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// Pretty JSON with every float at 17 significant digits.
struct SigFigFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SigFigFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with 17 significant digits per float.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| ClockError::Io(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| ClockError::Io(e.to_string()))
}

#[derive(Debug, Serialize)]
struct ResolvedConstants {
    source: String,
    #[serde(flatten)]
    values: ConstantsSet,
}

#[derive(Debug, Serialize)]
struct RunConfig<'a, A: Serialize> {
    command: &'static str,
    units: Units,
    constants: ResolvedConstants,
    output: Option<&'a Path>,
    format: &'static str,
    args: &'a A,
}

#[derive(Debug, Serialize)]
struct Envelope<'a, A: Serialize, R: Serialize> {
    tool: &'static str,
    version: &'static str,
    units: Units,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    config: RunConfig<'a, A>,
    result: R,
}

fn resolve_constants(cli: &Cli) -> Result<ResolvedConstants> {
    match cli.units {
        Units::Natural => {
            if cli.constants.is_some() {
                return Err(invalid("--constants only applies to SI units"));
            }
            Ok(ResolvedConstants {
                source: "natural".into(),
                values: ConstantsSet::natural(),
            })
        }
        Units::Si => {
            let source = match (
                &cli.constants,
                std::env::var_os(crate::units::CONSTANTS_ENV),
            ) {
                (Some(p), _) => p.display().to_string(),
                (None, Some(p)) => PathBuf::from(p).display().to_string(),
                (None, None) => "codata2018".into(),
            };
            let values = ConstantsSet::resolve_si(cli.constants.as_deref())?;
            Ok(ResolvedConstants { source, values })
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn envelope<A: Serialize, R: Serialize>(
    cli: &Cli,
    command: &'static str,
    constants: ResolvedConstants,
    format: &'static str,
    args: &A,
    seed: Option<u64>,
    result: R,
) -> Result<String> {
    to_json(&Envelope {
        tool: TOOL,
        version: VERSION,
        units: cli.units,
        seed,
        config: RunConfig {
            command,
            units: cli.units,
            constants,
            output: cli.out.as_deref(),
            format,
            args,
        },
        result,
    })
}

#[derive(Debug, Serialize)]
struct SpectrumSummary {
    #[serde(flatten)]
    kind: SpectrumKind,
    p: usize,
    period: f64,
    levels: Vec<f64>,
    r: Vec<String>,
    ratios: Vec<String>,
    r_max: String,
}

fn summarize(spec: &ClockSpectrum) -> SpectrumSummary {
    SpectrumSummary {
        kind: spec.kind(),
        p: spec.p(),
        period: spec.period(),
        levels: spec.levels().to_vec(),
        r: spec.r().iter().map(BigUint::to_string).collect(),
        ratios: spec.ratios().iter().map(RationalRatio::to_string).collect(),
        r_max: spec.max_integer().to_string(),
    }
}

fn cmd_build(args: &BuildArgs, consts: &ConstantsSet) -> Result<ClockSpectrum> {
    let spec = match args.kind {
        KindArg::EquallySpaced => {
            let p = args
                .p
                .ok_or_else(|| invalid("--p is required for equally-spaced"))?;
            let period = args
                .period
                .ok_or_else(|| invalid("--T is required for equally-spaced"))?;
            build_equally_spaced(p, period, consts)?
        }
        KindArg::Rational => {
            let ratios = args
                .ratios
                .iter()
                .map(|s| RationalRatio::from_str(s.trim()))
                .collect::<Result<Vec<_>>>()?;
            match (args.e1, args.period) {
                (Some(e1), None) => build_rational(&ratios, e1, consts)?,
                (None, Some(t)) => {
                    build_rational_with_period(&ratios, t, consts, DEFAULT_CAPACITY_BITS)?
                }
                _ => return Err(invalid("rational spectra need exactly one of --e1 and --T")),
            }
        }
        KindArg::Rationalized => {
            let eps = args
                .epsilon
                .ok_or_else(|| invalid("--epsilon is required for rationalized"))?;
            build_rationalized(&args.levels, eps, consts)?
        }
    };
    write_spectrum(&args.write, &spec)?;
    Ok(spec)
}

#[derive(Debug, Serialize)]
struct IdentityCheck {
    p: usize,
    z: u64,
    r_max: String,
    residual: f64,
    condition_zp1_gt_rp: bool,
}

fn cmd_check(args: &CheckArgs, consts: &ConstantsSet) -> Result<IdentityCheck> {
    let spec = Arc::new(read_spectrum(&args.spectrum, consts)?);
    let residual = identity_residual(&spec, args.z, args.tau0)?;
    let r_max = spec.max_integer();
    Ok(IdentityCheck {
        p: spec.p(),
        z: args.z,
        condition_zp1_gt_rp: BigUint::from(args.z) + 1u32 > r_max,
        r_max: r_max.to_string(),
        residual,
    })
}

#[derive(Debug, Serialize)]
struct MeasureResult {
    spectrum: SpectrumSummary,
    probabilities: Vec<f64>,
    record: crate::measurement::MeasurementRecord,
}

fn cmd_measure(args: &MeasureArgs, consts: &ConstantsSet) -> Result<MeasureResult> {
    let spec = Arc::new(read_spectrum(&args.spectrum, consts)?);
    let povm = ClockPOVM::new(Arc::clone(&spec), args.z, args.tau0)?;
    let state: StateVector = match args.state {
        StateSpec::GridState(k) => {
            if k >= povm.len() {
                return Err(invalid(format!("grid index {k} outside 0..{}", povm.len())));
            }
            povm.element_state(k).into_state()
        }
        StateSpec::Energy(n) => StateVector::energy_eigenstate(Arc::clone(&spec), n)?,
        StateSpec::Time(t) => time_state(&spec, t).into_state(),
    };
    let dist = outcome_probabilities(&state, &povm)?;
    let record = sample(&dist, args.shots, args.seed)?;
    if let Some(path) = &args.csv {
        let mut csv = String::from("m,tau,probability,count\n");
        for (m, ((tau, p), c)) in dist
            .tau_grid
            .iter()
            .zip(&dist.probs)
            .zip(&record.counts)
            .enumerate()
        {
            csv.push_str(&format!("{m},{tau:.16e},{p:.16e},{c}\n"));
        }
        fs::write(path, csv)?;
    }
    Ok(MeasureResult {
        spectrum: summarize(&spec),
        probabilities: dist.probs,
        record,
    })
}

/// Clock described by `bounds`/`sweep` flags, before any sweep override.
struct BoundsSetup {
    spectrum: Option<ClockSpectrum>,
    p: Option<usize>,
}

fn bounds_setup(args: &BoundsArgs, consts: &ConstantsSet) -> Result<BoundsSetup> {
    match (&args.spectrum, args.p, args.period) {
        (Some(path), _, _) => Ok(BoundsSetup {
            spectrum: Some(read_spectrum(path, consts)?),
            p: None,
        }),
        (None, Some(p), _) => Ok(BoundsSetup {
            spectrum: None,
            p: Some(p),
        }),
        _ => Err(invalid("give either --spectrum or both --T and --p")),
    }
}

fn bounds_at(
    args: &BoundsArgs,
    setup: &BoundsSetup,
    consts: &ConstantsSet,
) -> Result<crate::bounds::BoundReport> {
    let body = ClockBody::new(args.lc, args.mrest, args.mass)?;
    let spec = match (&setup.spectrum, setup.p) {
        (Some(s), _) => {
            if args.period.is_some() {
                return Err(invalid("--T cannot override the period of a spectrum file"));
            }
            s.clone()
        }
        (None, Some(p)) => {
            let t = args
                .period
                .ok_or_else(|| invalid("--T is required with --p"))?;
            build_equally_spaced(p, t, consts)?
        }
        _ => unreachable!("checked by bounds_setup"),
    };
    let z = match args.z {
        Some(z) => z,
        None if spec.kind() == SpectrumKind::EquallySpaced => spec.p() as u64,
        None => spec
            .r_max_u64()
            .ok_or_else(|| ClockError::Capacity("r_p does not fit 64 bits; pass --z".into()))?,
    };
    bound_report(&body, consts, &spec, z, args.theta)
}

const SWEEP_HEADER: &str = "x,delta_tau,delta_tau_min,structural,speed_limit,speed_limit_floor,spreading,fundamental,mass_limit,continuum_ok,binding";

fn sweep_csv(args: &BoundsArgs, spec: &SweepSpec, consts: &ConstantsSet) -> Result<String> {
    let setup = bounds_setup(args, consts)?;
    if spec.param == SweepParam::Period && setup.spectrum.is_some() {
        return Err(invalid("sweeping T needs --p rather than a spectrum file"));
    }
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for x in spec.points() {
        let mut a = args.clone();
        match spec.param {
            SweepParam::Lc => a.lc = x,
            SweepParam::Mrest => a.mrest = x,
            SweepParam::Mass => a.mass = Some(x),
            SweepParam::Period => a.period = Some(x),
            SweepParam::Theta => a.theta = Some(x),
            SweepParam::Z => {
                a.z = Some(
                    x.round()
                        .to_u64()
                        .ok_or_else(|| invalid(format!("bad z {x}")))?,
                )
            }
        }
        match bounds_at(&a, &setup, consts) {
            Ok(r) => {
                let binding = serde_json::to_value(r.binding)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned));
                out.push_str(&format!(
                    "{x:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
                    r.delta_tau,
                    r.delta_tau_min,
                    r.structural_dt,
                    r.speed_limit_dt,
                    r.speed_limit_floor,
                    r.spreading_dt,
                    r.fundamental_dt,
                    r.mass_limit,
                    r.continuum_ok,
                    binding.unwrap_or_default(),
                ));
            }
            Err(e) => out.push_str(&format!("{x:.16e},,,,,,,,,,error:{}\n", e.name())),
        }
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    rows: usize,
    csv: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct BoundsResult {
    report: crate::bounds::BoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepSummary>,
}

fn dispatch(cli: &Cli) -> Result<()> {
    let constants = resolve_constants(cli)?;
    let consts = constants.values;
    let out = cli.out.as_deref();
    let text = match &cli.command {
        Command::Build(a) => {
            let spec = cmd_build(a, &consts)?;
            envelope(cli, "build", constants, "json", a, None, summarize(&spec))?
        }
        Command::CheckIdentity(a) => {
            let r = cmd_check(a, &consts)?;
            envelope(cli, "check-identity", constants, "json", a, None, r)?
        }
        Command::Measure(a) => {
            let r = cmd_measure(a, &consts)?;
            let format = if a.csv.is_some() { "json+csv" } else { "json" };
            envelope(cli, "measure", constants, format, a, Some(a.seed), r)?
        }
        Command::Bounds(a) => {
            let setup = bounds_setup(a, &consts)?;
            let report = bounds_at(a, &setup, &consts)?;
            let sweep = match &a.sweep {
                Some(s) => {
                    let csv = sweep_csv(a, s, &consts)?;
                    if let Some(path) = &a.csv {
                        fs::write(path, &csv)?;
                    }
                    Some(SweepSummary {
                        rows: s.steps,
                        csv: a.csv.clone(),
                    })
                }
                None => None,
            };
            let format = if a.csv.is_some() && a.sweep.is_some() {
                "json+csv"
            } else {
                "json"
            };
            envelope(
                cli,
                "bounds",
                constants,
                format,
                a,
                None,
                BoundsResult { report, sweep },
            )?
        }
        Command::Sweep(a) => {
            let s = a
                .sweep
                .as_ref()
                .ok_or_else(|| invalid("sweep needs --sweep param:min:max:steps"))?;
            let csv = sweep_csv(a, s, &consts)?;
            let Some(path) = &a.csv else {
                return emit(&csv, out);
            };
            fs::write(path, &csv)?;
            envelope(
                cli,
                "sweep",
                constants,
                "csv",
                a,
                None,
                SweepSummary {
                    rows: s.steps,
                    csv: a.csv.clone(),
                },
            )?
        }
    };
    emit(&text, out)
}

/// Parses `args` (program name first) and runs the command; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            1
        }
    }
}
