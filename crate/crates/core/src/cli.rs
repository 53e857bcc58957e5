//! Command-line front end: argument and config-file resolution, orchestration
//! and CSV/JSON report emission.
//!
//! Values resolve as flag, then config file (`key=value` lines, keys equal to
//! the long flag names), then built-in default. Exit status is 0 on success,
//! 2 for invalid input and 3 for numerical failures.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::asymptotics::h1_window;
use crate::census::{
    census_selberg_C, census_theorem1, census_theorem1_range, count_sign_preserving_R,
    count_sign_preserving_R_range, exp_sums, good_segments_G1, good_segments_G3, moments,
    moments_range, n0_increment, CensusReport, G1Params, G3Params, MomentReport,
    PsiFunction, PsiRole, SelbergParams, Theorem1Params, ThetaVariant,
};
use crate::error::{Error, Result};
use crate::gram::{gram_point, omega, GridSpec, IndexRange};
use crate::hardy_z::{sign_at, z_em, z_rs, Sign, RS_MIN_T};
use crate::mode::Mode;
use crate::parallel::{with_workers, workers_from_env};
use crate::ENGINE_VERSION;

#[derive(Debug, Parser)]
#[command(name = "gramgrid", version, about = "Translated Gram lattices and zero censuses of Hardy's Z")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Default)]
pub struct Common {
    /// Flat key=value file supplying values for flags not given.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Report path; one file per (command, tau), tau appended when several.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: GRAMGRID_WORKERS, then all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Exploration,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Paper => Mode::Paper,
            ModeArg::Exploration => Mode::Exploration,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Rs,
    Em,
    Both,
}

/// A shift τ: a number or one of pi, -pi, pi/2, -pi/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau(pub f64);

impl FromStr for Tau {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Tau, String> {
        let v = match s.trim() {
            "pi" => PI,
            "-pi" => -PI,
            "pi/2" => PI / 2.0,
            "-pi/2" => -PI / 2.0,
            x => x.parse::<f64>().map_err(|e| format!("bad tau {x:?}: {e}"))?,
        };
        Ok(Tau(v))
    }
}

/// Piece `k` of `n` (1-based) of a window's Gram index range, for runs that
/// are merged later with `report-merge`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Part {
    pub k: u64,
    pub n: u64,
}

impl FromStr for Part {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let bad = || format!("bad part {s:?}: expected k/n with 1 <= k <= n");
        let (k, n) = s.split_once('/').ok_or_else(bad)?;
        let (k, n): (u64, u64) = (k.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?);
        if k == 0 || k > n {
            return Err(bad());
        }
        Ok(Part { k, n })
    }
}

impl Part {
    pub fn of(&self, r: &IndexRange) -> IndexRange {
        let start = r.count * (self.k - 1) / self.n;
        let end = r.count * self.k / self.n;
        r.slice(start, end - start)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one translated Gram point.
    Gram {
        #[arg(long)]
        nu: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<Tau>,
    },
    /// Evaluate Z(t) with the production engine and/or the oracle.
    Zeval {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_enum)]
        engine: Option<Engine>,
        #[arg(long)]
        digits: Option<u32>,
    },
    #[command(name = "census-theorem1")]
    CensusTheorem1(Theorem1Args),
    #[command(name = "census-selberg-c")]
    CensusSelbergC(SelbergArgs),
    #[command(name = "sign-preserving-r")]
    SignPreservingR(GridArgs),
    #[command(name = "good-segments")]
    GoodSegments(SegmentArgs),
    N0(N0Args),
    Expsums(ExpSumArgs),
    Moments(MomentArgs),
    #[command(name = "h1-window")]
    H1Window {
        #[arg(long = "T")]
        t: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Merge census or moment reports over adjacent index ranges.
    #[command(name = "report-merge")]
    ReportMerge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Theorem1Args {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long = "U-override")]
    pub u_override: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Vec<Tau>,
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long = "psi-bar")]
    pub psi_bar: Option<String>,
    #[arg(long = "scan-step")]
    pub scan_step: Option<f64>,
    /// Run only piece k/n of the Gram index range.
    #[arg(long)]
    pub part: Option<Part>,
}

#[derive(Debug, Args)]
pub struct SelbergArgs {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long = "grid-step")]
    pub grid_step: Option<f64>,
    #[arg(long = "span-override")]
    pub span_override: Option<f64>,
    #[arg(long = "scan-step")]
    pub scan_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long = "U", alias = "U-override")]
    pub u: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<u32>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Vec<Tau>,
    /// Run only piece k/n of the Gram index range.
    #[arg(long)]
    pub part: Option<Part>,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub definition: Option<u8>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long = "U")]
    pub u: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Fixed H1 for definition 2; omitted means scan the H1 window.
    #[arg(long = "H1")]
    pub h1: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Vec<Tau>,
}

#[derive(Debug, Args)]
pub struct N0Args {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long = "U")]
    pub u: Option<f64>,
    /// Lattice step; defaults to omega(T)/4.
    #[arg(long = "scan-step")]
    pub scan_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ExpSumArgs {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long = "U")]
    pub u: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Vec<Tau>,
    #[arg(long = "M")]
    pub m: Option<u32>,
    /// Omitted k and l mean every pair in 0..=M.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub l: Option<u32>,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long = "U")]
    pub u: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<u32>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Vec<Tau>,
    #[arg(long)]
    pub theta: Option<String>,
    /// Run only piece k/n of the Gram index range.
    #[arg(long)]
    pub part: Option<Part>,
}

/// Flat `key=value` configuration. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config(BTreeMap<String, String>);

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::validation(format!("config line {}: expected key=value", i + 1)))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Config(map))
    }

    pub fn load(path: &Path) -> Result<Config> {
        Config::parse(&fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// flag, else config value, else default.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: Option<T>) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(s) = self.get(key) {
            return s
                .parse::<T>()
                .map_err(|e| Error::validation(format!("config {key}={s:?}: {e}")));
        }
        default.ok_or_else(|| Error::validation(format!("missing required value --{key}")))
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match (flag, self.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(s)) => s
                .parse::<T>()
                .map(Some)
                .map_err(|e| Error::validation(format!("config {key}={s:?}: {e}"))),
            (None, None) => Ok(None),
        }
    }

    fn taus(&self, flag: &[Tau], default: &[f64]) -> Result<Vec<f64>> {
        if !flag.is_empty() {
            return Ok(flag.iter().map(|t| t.0).collect());
        }
        match self.get("tau") {
            Some(s) => s
                .split(',')
                .map(|x| x.parse::<Tau>().map(|t| t.0).map_err(Error::Validation))
                .collect(),
            None => Ok(default.to_vec()),
        }
    }
}

/// Everything a run needs once flags and config are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub mode: Mode,
    pub config: Config,
}

impl RunConfig {
    pub fn resolve(common: &Common) -> Result<RunConfig> {
        let config = match &common.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let format = match common.format {
            Some(f) => f,
            None => match config.get("format") {
                Some("json") => Format::Json,
                Some("csv") | None => Format::Csv,
                Some(x) => return Err(Error::validation(format!("config format={x:?}"))),
            },
        };
        let out = common.out.clone().or_else(|| config.get("out").map(PathBuf::from));
        let workers = match common.workers {
            Some(n) => Some(n),
            None => config.pick_opt::<usize>(None, "workers")?.or_else(workers_from_env),
        };
        let mode = match common.mode {
            Some(m) => m.into(),
            None => match config.get("mode") {
                Some("paper") => Mode::Paper,
                Some("exploration") | None => Mode::default(),
                Some(x) => return Err(Error::validation(format!("config mode={x:?}"))),
            },
        };
        Ok(RunConfig {
            format,
            out,
            workers,
            mode,
            config,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramRecord {
    pub nu: u64,
    pub tau: f64,
    pub t: f64,
    pub residual: f64,
    pub engine: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZRecord {
    pub t: f64,
    pub z_rs: Option<f64>,
    pub err_rs: Option<f64>,
    pub z_em: Option<f64>,
    pub em_decimal: Option<String>,
    pub em_digits: Option<u32>,
    pub em_error_bound: Option<f64>,
    pub sign: String,
    pub engine: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H1Record {
    pub t: f64,
    pub epsilon: f64,
    pub a1: f64,
    pub a2: f64,
    pub xi: f64,
    pub omega: f64,
    pub p0: f64,
    pub h1_lo: f64,
    pub h1_hi: f64,
    pub h_lo: f64,
    pub h_hi: f64,
    pub h_from_h1_lo: f64,
    pub h_from_h1_hi: f64,
    pub lower_consistent: bool,
    pub upper_consistent: bool,
    pub h_range_empty: bool,
    pub engine: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub command: String,
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
    pub engine: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Validation(_) => 2,
        Error::Numerical(_) | Error::Io(_) => 3,
    }
}

fn kind_name(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Validation(_) => "validation",
        Error::Numerical(_) => "numerical",
        Error::Io(_) => "io",
    }
}

/// Serialize rows as CSV (with header) or as a JSON array.
pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(rows)
            .map(|s| s + "\n")
            .map_err(|e| Error::Io(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

/// Parse rows written by [`render`].
pub fn parse_rows<T: for<'de> Deserialize<'de>>(text: &str, format: Format) -> Result<Vec<T>> {
    match format {
        Format::Json => serde_json::from_str(text).map_err(|e| Error::validation(e.to_string())),
        Format::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .map(|r| r.map_err(|e| Error::validation(e.to_string())))
            .collect(),
    }
}

fn format_of(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        _ => Format::Csv,
    }
}

/// Output path for one τ of a multi-τ run: `stem-tau<value>.ext`.
pub fn tau_path(base: &Path, tau: f64, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}-tau{tau:.6}.{ext}"),
        None => format!("{stem}-tau{tau:.6}"),
    };
    base.with_file_name(name)
}

/// Rendered report text waiting to be written.
struct Emission {
    text: String,
    tau: Option<f64>,
    many: bool,
}

struct Sink {
    format: Format,
    out: Vec<Emission>,
}

impl Sink {
    fn emit<T: Serialize>(&mut self, rows: &[T], tau: Option<f64>, many: bool) -> Result<()> {
        self.out.push(Emission {
            text: render(rows, self.format)?,
            tau,
            many,
        });
        Ok(())
    }
}

fn write_emissions(rc: &RunConfig, out: Vec<Emission>, stdout: &mut dyn Write) -> Result<()> {
    for e in out {
        match &rc.out {
            Some(base) => {
                let path = match e.tau {
                    Some(t) => tau_path(base, t, e.many),
                    None => base.clone(),
                };
                fs::write(&path, e.text)?;
                log::info!("wrote {}", path.display());
            }
            None => stdout.write_all(e.text.as_bytes())?,
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gram { .. } => "gram",
        Command::Zeval { .. } => "zeval",
        Command::CensusTheorem1(_) => "census-theorem1",
        Command::CensusSelbergC(_) => "census-selberg-c",
        Command::SignPreservingR(_) => "sign-preserving-r",
        Command::GoodSegments(_) => "good-segments",
        Command::N0(_) => "n0",
        Command::Expsums(_) => "expsums",
        Command::Moments(_) => "moments",
        Command::H1Window { .. } => "h1-window",
        Command::ReportMerge { .. } => "report-merge",
    }
}

fn psi_pair(cfg: &Config, psi: Option<String>, psi_bar: Option<String>) -> Result<(PsiFunction, PsiFunction)> {
    let psi_s = cfg.pick(psi, "psi", Some("lnlnln".to_string()))?;
    let psi = PsiFunction::parse(&psi_s, PsiRole::Psi, None)?;
    let bar_s = cfg.pick(psi_bar, "psi-bar", Some("pow:psi:0.25".to_string()))?;
    let bar = PsiFunction::parse(&bar_s, PsiRole::PsiBar, Some(&psi))?;
    Ok((psi, bar))
}

fn execute(cmd: Command, rc: &RunConfig, sink: &mut Sink) -> Result<()> {
    let cfg = &rc.config;
    let src = crate::hardy_z::HardyZ;
    match cmd {
        Command::Gram { nu, tau } => {
            let nu = cfg.pick(nu, "nu", None)?;
            let tau = cfg.pick(tau, "tau", Some(Tau(0.0)))?.0;
            let g = gram_point(nu, tau)?;
            sink.emit(
                &[GramRecord {
                    nu: g.nu,
                    tau: g.tau,
                    t: g.t,
                    residual: g.residual,
                    engine: ENGINE_VERSION.to_string(),
                }],
                None,
                false,
            )
        }
        Command::Zeval { t, engine, digits } => {
            let t = cfg.pick(t, "t", None)?;
            let engine = match engine {
                Some(e) => e,
                None => match cfg.get("engine") {
                    Some("em") => Engine::Em,
                    Some("both") => Engine::Both,
                    Some("rs") => Engine::Rs,
                    Some(x) => return Err(Error::validation(format!("config engine={x:?}"))),
                    None if t >= RS_MIN_T => Engine::Rs,
                    None => Engine::Em,
                },
            };
            let digits = cfg.pick(digits, "digits", Some(30))?;
            let rs = matches!(engine, Engine::Rs | Engine::Both).then(|| z_rs(t)).transpose()?;
            let em = matches!(engine, Engine::Em | Engine::Both).then(|| z_em(t, digits)).transpose()?;
            let sign = match sign_at(t).sign {
                Sign::Positive => "positive",
                Sign::Negative => "negative",
                Sign::Uncertain => "uncertain",
            };
            sink.emit(
                &[ZRecord {
                    t,
                    z_rs: rs.map(|r| r.value),
                    err_rs: rs.map(|r| r.err),
                    z_em: em.as_ref().map(|o| o.value),
                    em_decimal: em.as_ref().map(|o| o.decimal.clone()),
                    em_digits: em.as_ref().map(|o| o.digits),
                    em_error_bound: em.as_ref().map(|o| o.error_bound),
                    sign: sign.to_string(),
                    engine: ENGINE_VERSION.to_string(),
                }],
                None,
                false,
            )
        }
        Command::CensusTheorem1(a) => {
            let t = cfg.pick(a.t, "T", None)?;
            let (psi, psi_bar) = psi_pair(cfg, a.psi, a.psi_bar)?;
            let u_override = cfg.pick_opt(a.u_override, "U-override")?;
            let scan_step = cfg.pick_opt(a.scan_step, "scan-step")?;
            let taus = cfg.taus(&a.tau, &[0.0])?;
            let part = cfg.pick_opt(a.part, "part")?;
            for &tau in &taus {
                let p = Theorem1Params {
                    t,
                    psi: psi.clone(),
                    psi_bar: psi_bar.clone(),
                    tau,
                    u_override,
                    scan_step,
                    mode: rc.mode,
                };
                let r = match part {
                    Some(part) => census_theorem1_range(&src, &p, &part.of(&p.window()?.2))?,
                    None => census_theorem1(&src, &p)?,
                };
                sink.emit(&[r], Some(tau), taus.len() > 1)?;
            }
            Ok(())
        }
        Command::CensusSelbergC(a) => {
            let t = cfg.pick(a.t, "T", None)?;
            let psi_s = cfg.pick(a.psi, "psi", Some("sqrtlog".to_string()))?;
            let p = SelbergParams {
                t,
                epsilon: cfg.pick(a.epsilon, "epsilon", Some(0.1))?,
                psi: PsiFunction::parse(&psi_s, PsiRole::Psi, None)?,
                grid_step: cfg.pick(a.grid_step, "grid-step", Some(0.05))?,
                span_override: cfg.pick_opt(a.span_override, "span-override")?,
                scan_step: cfg.pick_opt(a.scan_step, "scan-step")?,
                mode: rc.mode,
            };
            sink.emit(&[census_selberg_C(&src, &p)?], None, false)
        }
        Command::SignPreservingR(a) => {
            let t = cfg.pick(a.t, "T", None)?;
            let u = cfg.pick(a.u, "U", None)?;
            let m = match cfg.pick_opt(a.m, "M")? {
                Some(m) => m,
                None => {
                    // M₁ = ⌊ψ̄ ln T / 2π⌋ with the default ψ̄
                    let (_, bar) = psi_pair(cfg, None, None)?;
                    ((bar.eval(t) * t.ln()) / std::f64::consts::TAU).floor().max(1.0) as u32
                }
            };
            let taus = cfg.taus(&a.tau, &[0.0])?;
            let part = cfg.pick_opt(a.part, "part")?;
            for &tau in &taus {
                let spec = GridSpec::new(t, u, m, tau, rc.mode)?;
                let r = match part {
                    Some(part) => count_sign_preserving_R_range(&src, &spec, &part.of(&spec.index_range()?))?,
                    None => count_sign_preserving_R(&src, &spec)?,
                };
                sink.emit(&[r], Some(tau), taus.len() > 1)?;
            }
            Ok(())
        }
        Command::GoodSegments(a) => {
            let def = cfg.pick(a.definition, "definition", Some(1))?;
            let t = cfg.pick(a.t, "T", None)?;
            let u = cfg.pick(a.u, "U", None)?;
            let taus = cfg.taus(&a.tau, &[0.0])?;
            for &tau in &taus {
                let report = match def {
                    1 => {
                        let delta = cfg.pick(a.delta, "delta", Some(1.5))?;
                        good_segments_G1(&src, &G1Params { t, u, delta, tau })?.0
                    }
                    2 => {
                        let p = G3Params {
                            t,
                            u,
                            h1: cfg.pick_opt(a.h1, "H1")?,
                            tau,
                            epsilon: cfg.pick(a.epsilon, "epsilon", Some(0.1))?,
                            mode: rc.mode,
                        };
                        good_segments_G3(&src, &p)?.0
                    }
                    d => return Err(Error::validation(format!("definition must be 1 or 2, got {d}"))),
                };
                sink.emit(&[report], Some(tau), taus.len() > 1)?;
            }
            Ok(())
        }
        Command::N0(a) => {
            let t = cfg.pick(a.t, "T", None)?;
            let u = cfg.pick(a.u, "U", None)?;
            let step = cfg.pick(a.scan_step, "scan-step", Some(omega(t)? / 4.0))?;
            sink.emit(&[n0_increment(&src, t, u, step)?], None, false)
        }
        Command::Expsums(a) => {
            let t = cfg.pick(a.t, "T", None)?;
            let u = cfg.pick(a.u, "U", None)?;
            let m = cfg.pick(a.m, "M", Some(2))?;
            let k = cfg.pick_opt(a.k, "k")?;
            let l = cfg.pick_opt(a.l, "l")?;
            let ks: Vec<u32> = k.map_or_else(|| (0..=m).collect(), |k| vec![k]);
            let ls: Vec<u32> = l.map_or_else(|| (0..=m).collect(), |l| vec![l]);
            let taus = cfg.taus(&a.tau, &[0.0])?;
            for &tau in &taus {
                let mut rows = Vec::new();
                for &k in &ks {
                    for &l in &ls {
                        rows.push(exp_sums(t, u, tau, m, k, l)?);
                    }
                }
                sink.emit(&rows, Some(tau), taus.len() > 1)?;
            }
            Ok(())
        }
        Command::Moments(a) => {
            let t = cfg.pick(a.t, "T", None)?;
            let u = cfg.pick(a.u, "U", Some(1000.0))?;
            let m = cfg.pick(a.m, "M", None)?;
            let variant: ThetaVariant = cfg.pick(a.theta, "theta", Some("both".to_string()))?.parse()?;
            let taus = cfg.taus(&a.tau, &[0.0])?;
            let part = cfg.pick_opt(a.part, "part")?;
            for &tau in &taus {
                let spec = GridSpec::new(t, u, m, tau, rc.mode)?;
                let r = match part {
                    Some(part) => moments_range(&src, &spec, variant, &part.of(&spec.index_range()?))?,
                    None => moments(&src, &spec, variant)?,
                };
                sink.emit(&[r], Some(tau), taus.len() > 1)?;
            }
            Ok(())
        }
        Command::H1Window { t, epsilon } => {
            let t = cfg.pick(t, "T", None)?;
            let w = h1_window(t, cfg.pick(epsilon, "epsilon", Some(0.1))?)?;
            sink.emit(
                &[H1Record {
                    t: w.t,
                    epsilon: w.epsilon,
                    a1: w.a1,
                    a2: w.a2,
                    xi: w.xi,
                    omega: w.omega,
                    p0: w.p0,
                    h1_lo: w.h1_bounds.0,
                    h1_hi: w.h1_bounds.1,
                    h_lo: w.h_bounds.0,
                    h_hi: w.h_bounds.1,
                    h_from_h1_lo: w.h_from_h1.0,
                    h_from_h1_hi: w.h_from_h1.1,
                    lower_consistent: w.lower_consistent,
                    upper_consistent: w.upper_consistent,
                    h_range_empty: w.h_range_empty,
                    engine: ENGINE_VERSION.to_string(),
                }],
                None,
                false,
            )
        }
        Command::ReportMerge { inputs } => merge_files(&inputs, sink),
    }
}

fn merge_files(inputs: &[PathBuf], sink: &mut Sink) -> Result<()> {
    let mut census: Vec<CensusReport> = Vec::new();
    let mut moment: Vec<MomentReport> = Vec::new();
    for p in inputs {
        let text = fs::read_to_string(p)?;
        let fmt = format_of(p);
        match parse_rows::<CensusReport>(&text, fmt) {
            Ok(rows) => census.extend(rows),
            Err(_) => moment.extend(parse_rows::<MomentReport>(&text, fmt).map_err(|e| {
                Error::validation(format!("{}: not a census or moment report ({e})", p.display()))
            })?),
        }
    }
    if !census.is_empty() && !moment.is_empty() {
        return Err(Error::validation("cannot merge census and moment reports together"));
    }
    if !census.is_empty() {
        census.sort_by_key(|r| r.first_index);
        let mut acc = census[0].clone();
        for r in &census[1..] {
            acc = acc.merge(r)?;
        }
        return sink.emit(&[acc], None, false);
    }
    moment.sort_by_key(|r| r.first_index);
    let mut acc = moment
        .first()
        .cloned()
        .ok_or_else(|| Error::validation("no reports to merge"))?;
    for r in &moment[1..] {
        acc = acc.merge(r)?;
    }
    sink.emit(&[acc], None, false)
}

/// Run a parsed command line, writing reports to files or `stdout` and
/// structured error records to `stderr`. Returns the exit status.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let name = command_name(&cli.command);
    let result = RunConfig::resolve(&cli.common).and_then(|rc| {
        let cmd = cli.command;
        let mut sink = Sink {
            format: rc.format,
            out: Vec::new(),
        };
        // Reports are written even when a later tau of the same run fails.
        let status = with_workers(rc.workers, || execute(cmd, &rc, &mut sink))?;
        write_emissions(&rc, sink.out, stdout)?;
        status
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(&e);
            let rec = ErrorRecord {
                command: name.to_string(),
                kind: kind_name(&e).to_string(),
                message: e.to_string(),
                exit_code: code,
                engine: ENGINE_VERSION.to_string(),
            };
            let line = serde_json::to_string(&rec).unwrap_or_else(|_| e.to_string());
            let _ = writeln!(stderr, "{line}");
            code
        }
    }
}

/// Parse `args` (including the program name) and run.
pub fn run_from<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout, stderr),
        Err(e) => {
            let _ = write!(stderr, "{e}");
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_from(std::iter::once("gramgrid").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gram_command_prints_record() {
        let (code, out, _) = run_args(&["gram", "--nu", "1000000", "--tau", "0"]);
        assert_eq!(code, 0);
        let rows: Vec<GramRecord> = parse_rows(&out, Format::Csv).unwrap();
        assert_eq!(rows[0], GramRecord {
            nu: 1_000_000,
            tau: 0.0,
            t: gram_point(1_000_000, 0.0).unwrap().t,
            residual: gram_point(1_000_000, 0.0).unwrap().residual,
            engine: ENGINE_VERSION.to_string(),
        });
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = run_args(&["gram", "--nu", "10", "--tau", "4"]);
        assert_eq!(code, 2);
        let rec: ErrorRecord = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(rec.kind, "domain");
        assert_eq!(run_args(&["gram"]).0, 2);
        assert_eq!(run_args(&["bogus"]).0, 2);
        assert_eq!(run_args(&["expsums", "--T", "2e5", "--U", "1"]).0, 2);
        assert_eq!(exit_code(&Error::Numerical("x".into())), 3);
    }

    #[test]
    fn config_precedence() {
        let cfg = Config::parse("# c\nT=1e5\nepsilon = 0.05\n\nformat=json").unwrap();
        assert_eq!(cfg.pick(Some(2.0), "T", None).unwrap(), 2.0);
        assert_eq!(cfg.pick::<f64>(None, "T", Some(3.0)).unwrap(), 1e5);
        assert_eq!(cfg.pick::<f64>(None, "delta", Some(1.5)).unwrap(), 1.5);
        assert!(cfg.pick::<f64>(None, "U", None).is_err());
        assert!(Config::parse("novalue").is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "format=json\nepsilon=0.05\nT=1e6\n").unwrap();
        let (code, out, _) = run_args(&["h1-window", "--config", path.to_str().unwrap(), "--T", "1e5"]);
        assert_eq!(code, 0);
        let rows: Vec<H1Record> = serde_json::from_str(&out).unwrap();
        assert_eq!(rows[0].t, 1e5);
        assert_eq!(rows[0].epsilon, 0.05);
    }

    #[test]
    fn tau_parsing_and_paths() {
        assert_eq!("-pi".parse::<Tau>().unwrap().0, -PI);
        assert_eq!("pi/2".parse::<Tau>().unwrap().0, PI / 2.0);
        assert!("x".parse::<Tau>().is_err());
        let p = tau_path(Path::new("/tmp/r.csv"), -PI, true);
        assert_eq!(p, PathBuf::from("/tmp/r-tau-3.141593.csv"));
        assert_eq!(tau_path(Path::new("r.csv"), 0.0, false), PathBuf::from("r.csv"));
    }

    #[test]
    fn csv_and_json_rows_agree() {
        let rec = H1Record {
            t: 1.0,
            epsilon: 0.1,
            a1: 2.0,
            a2: 3.0,
            xi: 4.0,
            omega: 5.0,
            p0: 6.0,
            h1_lo: 7.0,
            h1_hi: 8.0,
            h_lo: 9.0,
            h_hi: 10.0,
            h_from_h1_lo: 11.0,
            h_from_h1_hi: 12.0,
            lower_consistent: true,
            upper_consistent: false,
            h_range_empty: true,
            engine: "e".into(),
        };
        let c: Vec<H1Record> = parse_rows(&render(std::slice::from_ref(&rec), Format::Csv).unwrap(), Format::Csv).unwrap();
        let j: Vec<H1Record> = parse_rows(&render(std::slice::from_ref(&rec), Format::Json).unwrap(), Format::Json).unwrap();
        assert_eq!(c, j);
        assert_eq!(c[0], rec);
    }
}
