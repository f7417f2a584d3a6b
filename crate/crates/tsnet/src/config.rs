//! Experiment configuration: a flat `key = value` text format.
//!
//! ```text
//! # comment
//! [params]
//! lambda1 = 0.1
//! sigma2_dbm = -50
//! ...
//! [sweep]
//! name = coverage
//! param = zeta_db
//! grid = linspace(-15, 5, 9)
//! series = rho = 0
//! series = rho = 2
//! output = fig4.csv
//! [simulation]
//! samples = 100000
//! ```
//!
//! Every model parameter except `rate` must be given in `[params]`. A key
//! suffixed `_dbm` is a power in dBm and `_db` a ratio in dB; both are stored
//! in linear SI units. `[simulation]` keys are optional.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tsnet_core::model::{db_to_linear, dbm_to_watts, linear_to_db};
use tsnet_core::montecarlo::{InterfererFading, PowerMode};
use tsnet_core::{Error as CoreError, ParamSet, SystemParams};

/// Bad key or value, with the 1-based line it came from when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub reason: String,
}

impl ConfigError {
    fn at(line: usize, key: &str, reason: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    fn missing(key: &str) -> Self {
        Self {
            line: None,
            key: key.to_string(),
            reason: "required key is missing".into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        write!(f, "`{}`: {}", self.key, self.reason)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Plain,
    /// Accepts a `_dbm` spelling.
    Power,
    /// Accepts a `_db` spelling.
    Ratio,
}

/// Model parameters in file order, with the unit suffix each one accepts.
const PARAMS: [(&str, Unit); 13] = [
    ("lambda1", Unit::Plain),
    ("lambda2", Unit::Plain),
    ("p1", Unit::Power),
    ("t_i", Unit::Plain),
    ("t_e", Unit::Plain),
    ("d", Unit::Plain),
    ("alpha", Unit::Plain),
    ("sigma2", Unit::Power),
    ("epsilon", Unit::Plain),
    ("e_sat", Unit::Plain),
    ("rho", Unit::Plain),
    ("zeta", Unit::Ratio),
    ("rate", Unit::Plain),
];

/// A model parameter addressed by a config key, possibly with a unit suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamKey {
    field: &'static str,
    suffix: Suffix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Suffix {
    None,
    Dbm,
    Db,
}

impl ParamKey {
    pub fn parse(key: &str) -> Option<Self> {
        for &(field, unit) in &PARAMS {
            if key == field {
                return Some(Self {
                    field,
                    suffix: Suffix::None,
                });
            }
            let suffix = match unit {
                Unit::Power => ("_dbm", Suffix::Dbm),
                Unit::Ratio => ("_db", Suffix::Db),
                Unit::Plain => continue,
            };
            if key.strip_suffix(suffix.0) == Some(field) {
                return Some(Self {
                    field,
                    suffix: suffix.1,
                });
            }
        }
        None
    }

    /// Base field name, e.g. `sigma2` for `sigma2_dbm`.
    pub fn field(&self) -> &'static str {
        self.field
    }

    /// Key as written, e.g. `sigma2_dbm`.
    pub fn name(&self) -> String {
        match self.suffix {
            Suffix::None => self.field.to_string(),
            Suffix::Dbm => format!("{}_dbm", self.field),
            Suffix::Db => format!("{}_db", self.field),
        }
    }

    pub fn to_si(&self, v: f64) -> f64 {
        match self.suffix {
            Suffix::None => v,
            Suffix::Dbm => dbm_to_watts(v),
            Suffix::Db => db_to_linear(v),
        }
    }

    pub fn from_si(&self, v: f64) -> f64 {
        match self.suffix {
            Suffix::None => v,
            Suffix::Dbm => linear_to_db(v) + 30.0,
            Suffix::Db => linear_to_db(v),
        }
    }

    /// Store `v` (in the key's own unit) into `p`.
    pub fn apply(&self, p: &mut ParamSet, v: f64) {
        let si = self.to_si(v);
        if self.field == "rate" {
            p.rate = Some(si);
        } else {
            *field_mut(p, self.field) = si;
        }
    }

    /// Current value of the parameter in the key's own unit.
    pub fn read(&self, p: &ParamSet) -> f64 {
        let si = match self.field {
            "rate" => p.rate.unwrap_or(f64::NAN),
            f => field_value(p, f),
        };
        self.from_si(si)
    }
}

fn field_mut<'a>(p: &'a mut ParamSet, field: &str) -> &'a mut f64 {
    match field {
        "lambda1" => &mut p.lambda1,
        "lambda2" => &mut p.lambda2,
        "p1" => &mut p.p1,
        "t_i" => &mut p.t_i,
        "t_e" => &mut p.t_e,
        "d" => &mut p.d,
        "alpha" => &mut p.alpha,
        "sigma2" => &mut p.sigma2,
        "epsilon" => &mut p.epsilon,
        "e_sat" => &mut p.e_sat,
        "rho" => &mut p.rho,
        "zeta" => &mut p.zeta,
        other => unreachable!("no scalar field `{other}`"),
    }
}

fn field_value(p: &ParamSet, field: &str) -> f64 {
    let mut copy = *p;
    *field_mut(&mut copy, field)
}

/// The analyses a sweep can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepKind {
    EnergyCoverage,
    TransmitProb,
    Coverage,
    CoverageRician,
    Throughput,
    Meta,
    Validate,
}

impl SweepKind {
    pub const ALL: [SweepKind; 7] = [
        SweepKind::EnergyCoverage,
        SweepKind::TransmitProb,
        SweepKind::Coverage,
        SweepKind::CoverageRician,
        SweepKind::Throughput,
        SweepKind::Meta,
        SweepKind::Validate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::EnergyCoverage => "energy-coverage",
            SweepKind::TransmitProb => "transmit-prob",
            SweepKind::Coverage => "coverage",
            SweepKind::CoverageRician => "coverage-rician",
            SweepKind::Throughput => "throughput",
            SweepKind::Meta => "meta",
            SweepKind::Validate => "validate",
        }
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.as_str()).collect();
                format!("unknown sweep `{s}`, expected one of {}", names.join(", "))
            })
    }
}

/// The swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Param(ParamKey),
    /// Reliability threshold of the meta distribution.
    X,
}

impl Axis {
    pub fn parse(key: &str) -> Option<Self> {
        if key == "x" {
            return Some(Axis::X);
        }
        ParamKey::parse(key)
            .filter(|k| k.field != "rate")
            .map(Axis::Param)
    }

    pub fn name(&self) -> String {
        match self {
            Axis::Param(k) => k.name(),
            Axis::X => "x".into(),
        }
    }

    pub fn field(&self) -> Option<&'static str> {
        match self {
            Axis::Param(k) => Some(k.field),
            Axis::X => None,
        }
    }
}

/// One curve of a sweep: parameter overrides and link fading options.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub overrides: Vec<(ParamKey, f64)>,
    /// Rician K factor of the desired link; `None` is Rayleigh.
    pub k_factor: Option<f64>,
    pub interferers: InterfererFading,
}

impl Series {
    pub fn base() -> Self {
        Self {
            label: "base".into(),
            overrides: Vec::new(),
            k_factor: None,
            interferers: InterfererFading::Rayleigh,
        }
    }

    fn spec_text(&self) -> String {
        let mut parts: Vec<String> = self
            .overrides
            .iter()
            .map(|(k, v)| format!("{} = {v}", k.name()))
            .collect();
        if let Some(k) = self.k_factor {
            parts.push(format!("k_factor = {k}"));
        }
        if self.interferers == InterfererFading::SameAsDesired {
            parts.push("interferers = same".into());
        }
        parts.join(", ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub axis: Axis,
    /// In the axis unit (dB for `zeta_db`).
    pub grid: Vec<f64>,
    pub series: Vec<Series>,
    pub output: Option<PathBuf>,
}

/// How active secondaries are generated in coverage and meta simulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CouplingMode {
    #[default]
    Independent,
    Coupled(PowerMode),
}

impl CouplingMode {
    fn as_str(self) -> &'static str {
        match self {
            CouplingMode::Independent => "independent",
            CouplingMode::Coupled(PowerMode::Average) => "coupled-average",
            CouplingMode::Coupled(PowerMode::Realized) => "coupled-realized",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "independent" => Some(CouplingMode::Independent),
            "coupled-average" => Some(CouplingMode::Coupled(PowerMode::Average)),
            "coupled-realized" => Some(CouplingMode::Coupled(PowerMode::Realized)),
            _ => None,
        }
    }
}

/// Monte Carlo run controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    /// Samples (energy draws or interferer geometries) per estimate.
    pub samples: u64,
    /// Radius of the simulated disk, m.
    pub disk_radius: f64,
    /// Independent RNG streams; each estimate is split over them.
    pub replicates: u32,
    pub seed: u64,
    /// Fading draws per geometry for meta runs with Rician links.
    pub n_fading: u32,
    pub coupling: CouplingMode,
    /// Coupled runs sum primaries within this radius of a secondary exactly, m.
    pub harvest_radius: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            samples: 100_000,
            disk_radius: 25.0,
            replicates: 8,
            seed: 1,
            n_fading: 200,
            coupling: CouplingMode::Independent,
            harvest_radius: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: SystemParams,
    pub sweep: SweepSpec,
    pub simulation: SimSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Params,
    Sweep,
    Simulation,
}

/// `(line, key, value)` with `value` still unparsed.
type Entry<'a> = (usize, &'a str, &'a str);

fn number(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value
        .parse()
        .map_err(|_| ConfigError::at(line, key, format!("`{value}` is not a number")))?;
    if v.is_nan() {
        return Err(ConfigError::at(line, key, "NaN is not allowed"));
    }
    Ok(v)
}

fn integer<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::at(line, key, format!("`{value}` is not a valid integer")))
}

/// Parse a grid: `linspace(a, b, n)`, `logspace(a, b, n)` (geometric from
/// `a` to `b`) or a comma-separated list. Must be strictly increasing.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    let call = |name: &str| {
        text.strip_prefix(name)
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
    };
    let grid = if let Some(args) = call("linspace").or_else(|| call("logspace")) {
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let [a, b, n] = parts[..] else {
            return Err("expected three arguments (start, stop, count)".into());
        };
        let a: f64 = a.parse().map_err(|_| format!("`{a}` is not a number"))?;
        let b: f64 = b.parse().map_err(|_| format!("`{b}` is not a number"))?;
        let n: usize = n.parse().map_err(|_| format!("`{n}` is not a count"))?;
        if n == 0 {
            return Err("count must be at least 1".into());
        }
        let geometric = text.starts_with("logspace");
        if geometric && !(a > 0.0 && b > 0.0) {
            return Err("logspace endpoints must be positive".into());
        }
        (0..n)
            .map(|i| {
                if n == 1 {
                    return a;
                }
                let f = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    b
                } else if geometric {
                    a * (b / a).powf(f)
                } else {
                    a + (b - a) * f
                }
            })
            .collect()
    } else {
        text.split(',')
            .map(|v| {
                let v = v.trim();
                v.parse::<f64>()
                    .map_err(|_| format!("`{v}` is not a number"))
            })
            .collect::<Result<Vec<f64>, String>>()?
    };
    if grid.is_empty() {
        return Err("grid is empty".into());
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err("grid values must be finite".into());
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err("grid must be strictly increasing".into());
    }
    Ok(grid)
}

fn parse_series(line: usize, text: &str, axis: Option<Axis>) -> Result<Series, ConfigError> {
    let mut s = Series::base();
    let mut label = None;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| {
                ConfigError::at(line, "series", format!("`{part}` is not key = value"))
            })?;
        match k {
            "label" => label = Some(v.to_string()),
            "k_factor" => {
                let kf = number(line, k, v)?;
                if !(kf >= 0.0 && kf.is_finite()) {
                    return Err(ConfigError::at(line, k, "must be finite and non-negative"));
                }
                s.k_factor = Some(kf);
            }
            "interferers" => {
                s.interferers = match v {
                    "rayleigh" => InterfererFading::Rayleigh,
                    "same" => InterfererFading::SameAsDesired,
                    _ => {
                        return Err(ConfigError::at(line, k, "expected `rayleigh` or `same`"));
                    }
                }
            }
            _ => {
                let key = ParamKey::parse(k)
                    .ok_or_else(|| ConfigError::at(line, k, "unknown series key"))?;
                if axis.and_then(|a| a.field()) == Some(key.field) {
                    return Err(ConfigError::at(
                        line,
                        k,
                        "the swept parameter cannot be overridden",
                    ));
                }
                if s.overrides.iter().any(|(o, _)| o.field == key.field) {
                    return Err(ConfigError::at(line, k, "set twice in one series"));
                }
                s.overrides.push((key, number(line, k, v)?));
            }
        }
    }
    s.label = match label {
        Some(l) => l,
        None if text.trim().is_empty() => "base".into(),
        None => s.spec_text().replace(' ', "").replace(',', " "),
    };
    Ok(s)
}

fn core_to_config(e: CoreError, line: Option<usize>, key: &str) -> ConfigError {
    let reason = match e {
        CoreError::InvalidParameter { reason, .. } => reason.to_string(),
        other => other.to_string(),
    };
    ConfigError {
        line,
        key: key.to_string(),
        reason,
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, crate::Error> {
        let text = std::fs::read_to_string(path).map_err(|source| crate::Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::parse(&text)?)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut section = Section::None;
        let mut params: Vec<Entry> = Vec::new();
        let mut sweep: Vec<Entry> = Vec::new();
        let mut sim: Vec<Entry> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                section = match name.trim() {
                    "params" => Section::Params,
                    "sweep" => Section::Sweep,
                    "simulation" => Section::Simulation,
                    other => return Err(ConfigError::at(line, other, "unknown section")),
                };
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| ConfigError::at(line, content, "expected `key = value`"))?;
            if key.is_empty() {
                return Err(ConfigError::at(line, "", "empty key"));
            }
            match section {
                Section::None => {
                    return Err(ConfigError::at(
                        line,
                        key,
                        "key outside a [params], [sweep] or [simulation] block",
                    ))
                }
                Section::Params => params.push((line, key, value)),
                Section::Sweep => sweep.push((line, key, value)),
                Section::Simulation => sim.push((line, key, value)),
            }
        }
        let params = parse_params(&params)?;
        let sweep = parse_sweep(&sweep)?;
        let simulation = parse_simulation(&sim)?;
        let cfg = Config {
            params,
            sweep,
            simulation,
        };
        cfg.check_points()?;
        Ok(cfg)
    }

    /// Reject grids and series that produce an invalid parameter set.
    fn check_points(&self) -> Result<(), ConfigError> {
        if self.sweep.kind == SweepKind::Meta && self.sweep.axis != Axis::X {
            return Err(ConfigError {
                line: None,
                key: "param".into(),
                reason: "meta sweeps run over `x`".into(),
            });
        }
        if self.sweep.axis == Axis::X && self.sweep.kind != SweepKind::Meta {
            return Err(ConfigError {
                line: None,
                key: "param".into(),
                reason: "`x` is only meaningful for meta sweeps".into(),
            });
        }
        if self.sweep.axis == Axis::X && self.sweep.grid.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(ConfigError {
                line: None,
                key: "grid".into(),
                reason: "reliability thresholds must lie in [0, 1]".into(),
            });
        }
        for series in &self.sweep.series {
            for &v in &self.sweep.grid {
                point_params(&self.params, &self.sweep.axis, v, series).map_err(|e| {
                    let mut e = core_to_config(e, None, "series");
                    e.reason = format!("series `{}`: {}", series.label, e.reason);
                    e
                })?;
            }
        }
        Ok(())
    }

    /// Effective configuration in the same format. Parsing the result gives
    /// back an identical `Config`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = self.params.raw();
        out.push_str("[params]\n");
        for &(field, _) in &PARAMS {
            let key = ParamKey::parse(field).expect("table entry");
            match (field, p.rate) {
                ("rate", None) => {}
                _ => {
                    let _ = writeln!(out, "{field} = {}", key.read(&p));
                }
            }
        }
        let s = &self.sweep;
        out.push_str("\n[sweep]\n");
        let _ = writeln!(out, "name = {}", s.kind.as_str());
        if !s.grid.is_empty() {
            let _ = writeln!(out, "param = {}", s.axis.name());
            let grid: Vec<String> = s.grid.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "grid = {}", grid.join(", "));
        }
        for series in &s.series {
            let spec = series.spec_text();
            let _ = if spec.is_empty() {
                writeln!(out, "series = label = {}", series.label)
            } else {
                writeln!(out, "series = label = {}, {spec}", series.label)
            };
        }
        if let Some(path) = &s.output {
            let _ = writeln!(out, "output = {}", path.display());
        }
        let m = &self.simulation;
        out.push_str("\n[simulation]\n");
        let _ = writeln!(out, "samples = {}", m.samples);
        let _ = writeln!(out, "disk_radius = {}", m.disk_radius);
        let _ = writeln!(out, "replicates = {}", m.replicates);
        let _ = writeln!(out, "seed = {}", m.seed);
        let _ = writeln!(out, "n_fading = {}", m.n_fading);
        let _ = writeln!(out, "coupling = {}", m.coupling.as_str());
        let _ = writeln!(out, "harvest_radius = {}", m.harvest_radius);
        out
    }
}

/// Parameters of one grid point of one series.
pub fn point_params(
    base: &SystemParams,
    axis: &Axis,
    value: f64,
    series: &Series,
) -> Result<SystemParams, CoreError> {
    base.with(|p| {
        for (k, v) in &series.overrides {
            k.apply(p, *v);
        }
        if let Axis::Param(k) = axis {
            k.apply(p, value);
        }
    })
}

fn parse_params(entries: &[Entry]) -> Result<SystemParams, ConfigError> {
    let mut p = ParamSet::default();
    let mut seen: Vec<(&'static str, usize)> = Vec::new();
    for &(line, key, value) in entries {
        let k =
            ParamKey::parse(key).ok_or_else(|| ConfigError::at(line, key, "unknown parameter"))?;
        if let Some((_, first)) = seen.iter().find(|(f, _)| *f == k.field) {
            return Err(ConfigError::at(
                line,
                key,
                format!("`{}` already set on line {first}", k.field),
            ));
        }
        seen.push((k.field, line));
        if k.field == "rate" && value == "log2" {
            p.rate = None;
            continue;
        }
        k.apply(&mut p, number(line, key, value)?);
    }
    for &(field, _) in &PARAMS {
        if field != "rate" && !seen.iter().any(|(f, _)| *f == field) {
            return Err(ConfigError::missing(field));
        }
    }
    p.validate().map_err(|e| {
        let name = match e {
            CoreError::InvalidParameter { name, .. } => name,
            _ => "params",
        };
        let line = seen.iter().find(|(f, _)| *f == name).map(|(_, l)| *l);
        core_to_config(e, line, name)
    })
}

fn parse_sweep(entries: &[Entry]) -> Result<SweepSpec, ConfigError> {
    let mut kind = None;
    let mut axis: Option<(usize, Axis)> = None;
    let mut grid: Option<(usize, &str)> = None;
    let mut series_lines: Vec<(usize, &str)> = Vec::new();
    let mut output = None;
    let mut seen: Vec<&str> = Vec::new();
    for &(line, key, value) in entries {
        if key != "series" {
            if seen.contains(&key) {
                return Err(ConfigError::at(line, key, "set twice"));
            }
            seen.push(key);
        }
        match key {
            "name" => kind = Some(value.parse().map_err(|e| ConfigError::at(line, key, e))?),
            "param" => {
                let a = Axis::parse(value).ok_or_else(|| {
                    ConfigError::at(line, key, format!("`{value}` is not a sweepable parameter"))
                })?;
                axis = Some((line, a));
            }
            "grid" => grid = Some((line, value)),
            "series" => series_lines.push((line, value)),
            "output" => {
                if value.is_empty() {
                    return Err(ConfigError::at(line, key, "empty path"));
                }
                output = Some(PathBuf::from(value));
            }
            _ => return Err(ConfigError::at(line, key, "unknown sweep key")),
        }
    }
    let kind = kind.ok_or_else(|| ConfigError::missing("name"))?;
    let (axis, grid) = match (axis, grid) {
        (Some((_, a)), Some((gl, g))) => (
            a,
            parse_grid(g).map_err(|e| ConfigError::at(gl, "grid", e))?,
        ),
        (None, _) if kind == SweepKind::Validate => {
            (Axis::Param(ParamKey::parse("zeta_db").unwrap()), vec![])
        }
        (None, _) => return Err(ConfigError::missing("param")),
        (Some(_), None) => return Err(ConfigError::missing("grid")),
    };
    let mut series = Vec::new();
    for (line, text) in series_lines {
        let s = parse_series(line, text, Some(axis))?;
        if series.iter().any(|o: &Series| o.label == s.label) {
            return Err(ConfigError::at(
                line,
                "series",
                format!("duplicate label `{}`", s.label),
            ));
        }
        series.push(s);
    }
    if series.is_empty() {
        series.push(Series::base());
    }
    Ok(SweepSpec {
        kind,
        axis,
        grid,
        series,
        output,
    })
}

fn parse_simulation(entries: &[Entry]) -> Result<SimSettings, ConfigError> {
    let mut s = SimSettings::default();
    let mut seen: Vec<&str> = Vec::new();
    for &(line, key, value) in entries {
        if seen.contains(&key) {
            return Err(ConfigError::at(line, key, "set twice"));
        }
        seen.push(key);
        match key {
            "samples" => {
                s.samples = integer(line, key, value)?;
                if s.samples == 0 {
                    return Err(ConfigError::at(line, key, "must be at least 1"));
                }
            }
            "replicates" => {
                s.replicates = integer(line, key, value)?;
                if s.replicates == 0 {
                    return Err(ConfigError::at(line, key, "must be at least 1"));
                }
            }
            "seed" => s.seed = integer(line, key, value)?,
            "n_fading" => s.n_fading = integer(line, key, value)?,
            "disk_radius" | "harvest_radius" => {
                let v = number(line, key, value)?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(ConfigError::at(line, key, "must be positive and finite"));
                }
                if key == "disk_radius" {
                    s.disk_radius = v;
                } else {
                    s.harvest_radius = v;
                }
            }
            "coupling" => {
                s.coupling = CouplingMode::parse(value).ok_or_else(|| {
                    ConfigError::at(
                        line,
                        key,
                        "expected `independent`, `coupled-average` or `coupled-realized`",
                    )
                })?;
            }
            _ => return Err(ConfigError::at(line, key, "unknown simulation key")),
        }
    }
    Ok(s)
}
