//! Command-line front end. Configuration is a flat `key = value` document
//! and/or `--key value` flags (flags win); every command renders a
//! deterministic CSV or JSON artifact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::analysis::{self, default_index_cutoff, DEFAULT_WEIGHT_THRESHOLD};
use crate::dynamics::{self, sample_times};
use crate::error::{Error, Result};
use crate::floquet::quasienergy;
use crate::model::{Axis, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sweep,
    Dynamics,
    Zeros,
    Periodicity,
    Spectrum,
    Oracle,
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sweep" => Command::Sweep,
            "dynamics" => Command::Dynamics,
            "zeros" => Command::Zeros,
            "periodicity" => Command::Periodicity,
            "spectrum" => Command::Spectrum,
            "oracle" => Command::Oracle,
            other => return Err(Error::config("command", format!("unknown command '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Which evolution the `dynamics` command reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynamicsModel {
    Analytic,
    Reduced,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: SystemParams,
    pub tol: f64,
    pub axis: Axis,
    pub model: DynamicsModel,
    /// Window length in modulation periods `π/δ`.
    pub periods: f64,
    pub samples: usize,
    pub scaled_time: bool,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub ratio_steps: usize,
    pub zero_tol: f64,
    pub max_index: u32,
    pub weight_threshold: f64,
    pub index_cutoff: Option<u32>,
    pub workers: Option<usize>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

pub const KEYS: &[&str] = &[
    "command",
    "epsilon0",
    "delta_gap",
    "amplitude",
    "carrier",
    "modulation",
    "order",
    "tol",
    "axis",
    "model",
    "periods",
    "samples",
    "scaled_time",
    "ratio_min",
    "ratio_max",
    "ratio_steps",
    "zero_tol",
    "max_index",
    "weight_threshold",
    "index_cutoff",
    "workers",
    "format",
    "out",
];

/// Flat `key = value` pairs, `#` starts a comment.
pub fn parse_pairs(source: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}", lineno + 1), format!("expected 'key = value', got '{line}'")))?;
        let k = k.trim();
        if map.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(Error::config(k, "given twice"));
        }
    }
    Ok(map)
}

struct Fields {
    map: BTreeMap<String, String>,
}

impl Fields {
    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| Error::config(key, format!("cannot parse '{v}'"))),
        }
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        let v: Option<f64> = self.get(key)?;
        match v {
            Some(x) if !x.is_finite() => Err(Error::config(key, "must be finite")),
            v => Ok(v),
        }
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.real(key)?.unwrap_or(default);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::config(key, format!("must be positive, got {v}")))
        }
    }
}

/// Validate a merged key/value map into a [`RunConfig`].
pub fn build_config(map: BTreeMap<String, String>) -> Result<RunConfig> {
    if let Some(k) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::config(k.clone(), "unknown key"));
    }
    let f = Fields { map };
    let command: Command = f.get("command")?.ok_or_else(|| Error::config("command", "missing"))?;

    let carrier = f.real("carrier")?.unwrap_or(1.0);
    let order: u32 = f.get("order")?.unwrap_or(1);
    let params = SystemParams::new(
        f.real("epsilon0")?.unwrap_or(f64::from(order) * carrier),
        f.real("delta_gap")?.unwrap_or(0.01 * carrier),
        f.real("amplitude")?.unwrap_or(0.1 * carrier),
        carrier,
        f.real("modulation")?.unwrap_or(carrier / 1000.0),
        order,
    )
    .map_err(|e| match e {
        Error::InvalidParam { key, detail } => Error::config(key, detail),
        e => e,
    })?;

    let axis = match f.map.get("axis").map(String::as_str) {
        None => Axis::Z,
        Some(s) => s.parse().map_err(|_| Error::config("axis", format!("expected z or x, got '{s}'")))?,
    };
    let model = match f.map.get("model").map(String::as_str) {
        None | Some("analytic") => DynamicsModel::Analytic,
        Some("reduced") => DynamicsModel::Reduced,
        Some("full") => DynamicsModel::Full,
        Some(s) => return Err(Error::config("model", format!("expected analytic, reduced or full, got '{s}'"))),
    };
    let format = match f.map.get("format").map(String::as_str) {
        Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        None if command == Command::Spectrum => OutputFormat::Json,
        None => OutputFormat::Csv,
        Some(s) => return Err(Error::config("format", format!("expected csv or json, got '{s}'"))),
    };

    let ratio_min = f.real("ratio_min")?.unwrap_or(0.0);
    let ratio_max = f.real("ratio_max")?.unwrap_or(11.0);
    if ratio_min < 0.0 {
        return Err(Error::config("ratio_min", "must be >= 0"));
    }
    if !(ratio_max > ratio_min) {
        return Err(Error::config("ratio_max", format!("must exceed ratio_min = {ratio_min}")));
    }
    let positive_int = |key: &str, default: usize| -> Result<usize> {
        let v: usize = f.get(key)?.unwrap_or(default);
        if v == 0 {
            return Err(Error::config(key, "must be positive"));
        }
        Ok(v)
    };
    let workers = match f.get::<usize>("workers")? {
        Some(0) => return Err(Error::config("workers", "must be positive")),
        w => w,
    };
    let index_cutoff = match f.get::<u32>("index_cutoff")? {
        Some(0) => return Err(Error::config("index_cutoff", "must be positive")),
        c => c,
    };
    let weight_threshold = f.real("weight_threshold")?.unwrap_or(DEFAULT_WEIGHT_THRESHOLD);
    if weight_threshold < 0.0 {
        return Err(Error::config("weight_threshold", "must be >= 0"));
    }

    Ok(RunConfig {
        command,
        tol: f.positive("tol", dynamics::DEFAULT_TOL)?,
        axis,
        model,
        periods: f.positive("periods", 5.0)?,
        samples: positive_int("samples", 2000)?,
        scaled_time: f.get("scaled_time")?.unwrap_or(false),
        ratio_min,
        ratio_max,
        ratio_steps: positive_int("ratio_steps", 100)?,
        zero_tol: f.positive("zero_tol", 1e-4)?,
        max_index: positive_int("max_index", 10)? as u32,
        weight_threshold,
        index_cutoff,
        workers,
        format,
        out: f.map.get("out").map(PathBuf::from),
        params,
    })
}

/// Parse a configuration document.
pub fn parse_config(source: &str) -> Result<RunConfig> {
    build_config(parse_pairs(source)?)
}

/// Parse `<command> [--config FILE] [--key value ...]`.
pub fn parse_args(args: &[String]) -> Result<RunConfig> {
    let mut flags = BTreeMap::new();
    let mut config_file = None;
    let mut command = None;
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if let Some(key) = a.strip_prefix("--") {
            let value = it.next().ok_or_else(|| Error::config(key, "flag without a value"))?;
            if key == "config" {
                config_file = Some(value.clone());
            } else if flags.insert(key.to_string(), value.clone()).is_some() {
                return Err(Error::config(key, "given twice"));
            }
        } else if command.is_none() {
            command = Some(a.clone());
        } else {
            return Err(Error::config("command", format!("unexpected argument '{a}'")));
        }
    }
    let mut map = match config_file {
        Some(path) => parse_pairs(&std::fs::read_to_string(path)?)?,
        None => BTreeMap::new(),
    };
    map.extend(flags);
    if let Some(c) = command {
        map.insert("command".into(), c);
    }
    build_config(map)
}

/// Round to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// `%.12g`-style rendering with the shortest digits that survive the rounding.
pub fn fmt_real(x: f64) -> String {
    let y = round12(x);
    if y == 0.0 {
        return "0".into();
    }
    let e = y.abs().log10().floor();
    if (-5.0..12.0).contains(&e) {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

enum Cell {
    Real(f64),
    Int(i64),
    Bool(bool),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Real(x) => fmt_real(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Result<Value> {
        Ok(match self {
            Cell::Real(x) => Value::from(
                serde_json::Number::from_f64(round12(*x))
                    .ok_or_else(|| Error::Precondition(format!("non-finite value {x} in output")))?,
            ),
            Cell::Int(i) => Value::from(*i),
            Cell::Bool(b) => Value::from(*b),
        })
    }
}

struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
    header_line: bool,
    footer: Option<String>,
}

impl Table {
    fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new(), header_line: true, footer: None }
    }

    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => {
                let mut s = String::new();
                if self.header_line {
                    s.push_str(&self.headers.join(","));
                    s.push('\n');
                }
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::text).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                if let Some(f) = &self.footer {
                    let _ = writeln!(s, "# {f}");
                }
                Ok(s)
            }
            OutputFormat::Json => {
                let mut arr = Vec::with_capacity(self.rows.len());
                for row in &self.rows {
                    let mut obj = Map::new();
                    for (h, c) in self.headers.iter().zip(row) {
                        obj.insert(h.clone(), c.json()?);
                    }
                    arr.push(Value::Object(obj));
                }
                let mut s = serde_json::to_string_pretty(&Value::Array(arr))?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::config("workers", e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

fn time_cells(cfg: &RunConfig, t: f64) -> Vec<Cell> {
    let mut v = vec![Cell::Real(t)];
    if cfg.scaled_time {
        v.push(Cell::Real(cfg.params.modulation * t / std::f64::consts::PI));
    }
    v
}

fn time_headers(cfg: &RunConfig, rest: &[&str]) -> Vec<String> {
    let mut h = vec!["t"];
    if cfg.scaled_time {
        h.push("dt_over_pi");
    }
    h.extend_from_slice(rest);
    h.into_iter().map(String::from).collect()
}

/// Render the artifact for `cfg` without touching the filesystem.
pub fn render(cfg: &RunConfig) -> Result<String> {
    let p = &cfg.params;
    let table = match cfg.command {
        Command::Sweep => {
            let col = format!("quasienergy_{}", p.order);
            let mut t = Table::new([String::from("ratio"), col]);
            let ratios: Vec<f64> = (0..=cfg.ratio_steps)
                .map(|k| cfg.ratio_min + (cfg.ratio_max - cfg.ratio_min) * k as f64 / cfg.ratio_steps as f64)
                .collect();
            let values: Vec<f64> = with_workers(cfg.workers, || {
                ratios
                    .par_iter()
                    .map(|&r| quasienergy(&p.with_amplitude(r * p.carrier)))
                    .collect::<Result<Vec<_>>>()
            })??;
            t.rows = ratios.iter().zip(values).map(|(&r, e)| vec![Cell::Real(r), Cell::Real(e)]).collect();
            t
        }
        Command::Dynamics => {
            let times = sample_times(cfg.periods * p.period(), cfg.samples);
            let trace = match cfg.model {
                DynamicsModel::Analytic => dynamics::analytic_populations(p, &times)?,
                DynamicsModel::Reduced => dynamics::integrate_reduced(p, &times, cfg.tol)?.populations(),
                DynamicsModel::Full => dynamics::integrate_full(p, cfg.axis, &times, cfg.tol)?.populations(),
            };
            let mut t = Table::new(time_headers(cfg, &["p1", "p2"]));
            for k in 0..trace.len() {
                let mut row = time_cells(cfg, trace.times[k]);
                row.push(Cell::Real(trace.p1[k]));
                row.push(Cell::Real(trace.p2[k]));
                t.rows.push(row);
            }
            t
        }
        Command::Zeros => {
            let zeros = with_workers(cfg.workers, || {
                analysis::quasienergy_zeros(p, cfg.ratio_min, cfg.ratio_max, cfg.zero_tol)
            })??;
            let mut t = Table::new(["ratio"]);
            t.header_line = false;
            t.rows = zeros.into_iter().map(|z| vec![Cell::Real(z)]).collect();
            t
        }
        Command::Periodicity => {
            let mut t = Table::new(["m", "n", "residual", "is_periodic"]);
            for m in 1..=cfg.max_index {
                for n in 1..=cfg.max_index {
                    let r = analysis::periodicity_residual(p, m, n)?;
                    t.rows.push(vec![
                        Cell::Int(i64::from(r.m)),
                        Cell::Int(i64::from(r.n)),
                        Cell::Real(r.residual),
                        Cell::Bool(r.is_periodic),
                    ]);
                }
            }
            t
        }
        Command::Spectrum => {
            let cutoff = cfg.index_cutoff.unwrap_or_else(|| default_index_cutoff(p));
            let lines = analysis::spectral_lines(p, cfg.weight_threshold, cutoff)?;
            let mut t = Table::new(["m", "n", "frequency", "weight"]);
            t.rows = lines
                .iter()
                .map(|l| {
                    vec![Cell::Int(i64::from(l.m)), Cell::Int(i64::from(l.n)), Cell::Real(l.frequency), Cell::Real(l.weight)]
                })
                .collect();
            t
        }
        Command::Oracle => {
            let times = sample_times(cfg.periods * p.period(), cfg.samples);
            let an = dynamics::analytic_populations(p, &times)?;
            let full = dynamics::integrate_full(p, cfg.axis, &times, cfg.tol)?.populations();
            let mut t = Table::new(time_headers(cfg, &["p1_analytic", "p1_full", "abs_err"]));
            let mut worst: f64 = 0.0;
            for k in 0..times.len() {
                let err = (an.p1[k] - full.p1[k]).abs();
                worst = worst.max(err);
                let mut row = time_cells(cfg, times[k]);
                row.extend([Cell::Real(an.p1[k]), Cell::Real(full.p1[k]), Cell::Real(err)]);
                t.rows.push(row);
            }
            t.footer = Some(format!("max_abs_err = {}", fmt_real(worst)));
            t
        }
    };
    table.render(cfg.format)
}

/// Render and write to `cfg.out`, or return the text when no path is set.
pub fn run(cfg: &RunConfig) -> Result<Option<String>> {
    let text = render(cfg)?;
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

pub const USAGE: &str = "usage: floquet-qubit <sweep|dynamics|zeros|periodicity|spectrum|oracle> \
[--config FILE] [--key value ...] [--out PATH] [--format csv|json]";
