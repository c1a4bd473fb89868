//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # Example 1, temporal study
//! exponent = exp-example1
//! u0 = sin-pi
//! t_final = 1
//! n_steps = 128
//! m_cells = 32
//! levels = 5
//! ```
//!
//! Lines starting with `#` or `;` and `[section]` headers are ignored. Keys
//! may be written with `-` or `_`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exponent::VariableExponent;
use crate::fem1d::Mesh1D;
use crate::stepper::{SolverConfig, SourceFn, SpatialFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Solve,
    ConvergenceTime,
    ConvergenceSpace,
    Figure1,
    WeightsDump,
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solve" => Ok(Self::Solve),
            "convergence-time" => Ok(Self::ConvergenceTime),
            "convergence-space" => Ok(Self::ConvergenceSpace),
            "figure1" => Ok(Self::Figure1),
            "weights-dump" => Ok(Self::WeightsDump),
            other => Err(Error::Config(format!("unknown experiment kind '{other}'"))),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Solve => "solve",
            Self::ConvergenceTime => "convergence-time",
            Self::ConvergenceSpace => "convergence-space",
            Self::Figure1 => "figure1",
            Self::WeightsDump => "weights-dump",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(Error::Config(format!("unknown output format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExponentSpec {
    Example1,
    Example2,
    /// Smooth transition profile reaching `alpha_t` at the final time.
    Figure1 {
        alpha_t: f64,
    },
    Zero,
    Table(PathBuf),
}

impl ExponentSpec {
    pub fn label(&self) -> String {
        match self {
            Self::Example1 => "exp-example1".into(),
            Self::Example2 => "exp-example2".into(),
            Self::Figure1 { alpha_t } => format!("exp-figure1(alpha_t={alpha_t})"),
            Self::Zero => "zero".into(),
            Self::Table(p) => format!("table({})", p.display()),
        }
    }

    pub fn build(&self, t_final: f64) -> Result<VariableExponent> {
        Ok(match self {
            Self::Example1 => VariableExponent::one_minus_exp(t_final),
            Self::Example2 => VariableExponent::sine(t_final),
            Self::Figure1 { alpha_t } => VariableExponent::smooth_transition(t_final, *alpha_t),
            Self::Zero => VariableExponent::zero(),
            Self::Table(path) => VariableExponent::from_table(&read_pairs(path)?)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    SinPi,
    /// `x^2 (1 - x)^2`
    PolyX2OneMinusX2,
    /// Piecewise-linear interpolation of `(x, value)` samples.
    CustomTable(PathBuf),
}

impl InitialSpec {
    pub fn label(&self) -> String {
        match self {
            Self::SinPi => "sin-pi".into(),
            Self::PolyX2OneMinusX2 => "poly-x2-1mx2".into(),
            Self::CustomTable(p) => format!("custom-table({})", p.display()),
        }
    }

    pub fn build(&self) -> Result<SpatialFn> {
        Ok(match self {
            Self::SinPi => Arc::new(|x: f64| (PI * x).sin()),
            Self::PolyX2OneMinusX2 => Arc::new(|x: f64| x * x * (1.0 - x) * (1.0 - x)),
            Self::CustomTable(path) => {
                let pts = read_pairs(path)?;
                if pts.len() < 2 || pts.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                    return Err(Error::Config(format!(
                        "{}: need at least two samples with increasing x",
                        path.display()
                    )));
                }
                Arc::new(move |x: f64| piecewise_linear(&pts, x))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceSpec {
    Zero,
    Constant(f64),
    /// `c * sin(pi x)`
    SinPi(f64),
}

impl SourceSpec {
    pub fn build(&self) -> Option<SourceFn> {
        match *self {
            Self::Zero => None,
            Self::Constant(c) => Some(Arc::new(move |_x: f64, _t: f64| c)),
            Self::SinPi(c) => Some(Arc::new(move |x: f64, _t: f64| c * (PI * x).sin())),
        }
    }
}

impl FromStr for SourceSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let num = |v: &str| {
            v.parse::<f64>()
                .ok()
                .filter(|c| c.is_finite())
                .ok_or_else(|| Error::Config(format!("bad source amplitude '{v}'")))
        };
        match s.split_once(':') {
            None if s == "zero" => Ok(Self::Zero),
            Some(("const", v)) => Ok(Self::Constant(num(v)?)),
            Some(("sin-pi", v)) => Ok(Self::SinPi(num(v)?)),
            _ => Err(Error::Config(format!(
                "unknown source '{s}' (zero | const:<c> | sin-pi:<c>)"
            ))),
        }
    }
}

/// Declarative description of one CLI run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub exponent: ExponentSpec,
    pub initial: InitialSpec,
    pub source: SourceSpec,
    pub t_final: f64,
    pub n_steps: usize,
    pub m_cells: usize,
    pub levels: usize,
    /// Constant exponent of the subdiffusion comparison; defaults to `alpha_t`.
    pub alpha_bar: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

const KEYS: &[&str] = &[
    "exponent",
    "alpha_t",
    "exponent_table",
    "u0",
    "u0_table",
    "source",
    "t_final",
    "n_steps",
    "m_cells",
    "levels",
    "alpha_bar",
    "output",
    "format",
];

fn normalize_key(k: &str) -> String {
    k.trim().replace('-', "_")
}

/// Parses `key = value` lines into a map, rejecting unknown keys.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') || line.starts_with('[') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = normalize_key(k);
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

impl ExperimentConfig {
    /// Defaults reproduce the temporal study of the first example.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let (t_final, n_steps, m_cells, exponent) = match kind {
            ExperimentKind::ConvergenceSpace => (1.0, 64, 8, ExponentSpec::Example1),
            ExperimentKind::Figure1 => (8.0, 800, 32, ExponentSpec::Figure1 { alpha_t: 0.4 }),
            _ => (1.0, 128, 32, ExponentSpec::Example1),
        };
        Self {
            kind,
            exponent,
            initial: InitialSpec::SinPi,
            source: SourceSpec::Zero,
            t_final,
            n_steps,
            m_cells,
            levels: 5,
            alpha_bar: None,
            output: None,
            format: OutputFormat::Csv,
        }
    }

    /// Builds a configuration from the defaults for `kind`, then the config
    /// file text (if any), then `overrides` in order.
    pub fn from_sources(kind: ExperimentKind, file_text: Option<&str>, overrides: &[(String, String)]) -> Result<Self> {
        let mut map = match file_text {
            Some(t) => parse_key_values(t)?,
            None => BTreeMap::new(),
        };
        for (k, v) in overrides {
            let key = normalize_key(k);
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown option '{k}'")));
            }
            map.insert(key, v.clone());
        }
        let mut cfg = Self::defaults(kind);
        cfg.apply(&map)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(kind: ExperimentKind, path: &Path, overrides: &[(String, String)]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_sources(kind, Some(&text), overrides)
    }

    fn apply(&mut self, map: &BTreeMap<String, String>) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse::<T>()
                .map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
        }
        let get = |k: &str| map.get(k).map(String::as_str);

        if let Some(v) = get("t_final") {
            self.t_final = num("t_final", v)?;
        }
        if let Some(v) = get("n_steps") {
            self.n_steps = num("n_steps", v)?;
        }
        if let Some(v) = get("m_cells") {
            self.m_cells = num("m_cells", v)?;
        }
        if let Some(v) = get("levels") {
            self.levels = num("levels", v)?;
        }
        if let Some(v) = get("alpha_bar") {
            self.alpha_bar = Some(num("alpha_bar", v)?);
        }
        if let Some(v) = get("source") {
            self.source = v.parse()?;
        }
        if let Some(v) = get("format") {
            self.format = v.parse()?;
        }
        if let Some(v) = get("output") {
            self.output = Some(PathBuf::from(v));
        }

        let alpha_t = match get("alpha_t") {
            Some(v) => Some(num::<f64>("alpha_t", v)?),
            None => None,
        };
        if let Some(name) = get("exponent") {
            self.exponent = match name {
                "exp-example1" => ExponentSpec::Example1,
                "exp-example2" => ExponentSpec::Example2,
                "exp-figure1" => ExponentSpec::Figure1 {
                    alpha_t: alpha_t.unwrap_or(0.4),
                },
                "zero" => ExponentSpec::Zero,
                "table" => ExponentSpec::Table(PathBuf::from(
                    get("exponent_table")
                        .ok_or_else(|| Error::Config("exponent = table needs exponent_table".into()))?,
                )),
                other => return Err(Error::Config(format!("unknown exponent '{other}'"))),
            };
        } else if let (Some(a), ExponentSpec::Figure1 { .. }) = (alpha_t, &self.exponent) {
            self.exponent = ExponentSpec::Figure1 { alpha_t: a };
        }
        if let Some(name) = get("u0") {
            self.initial = match name {
                "sin-pi" => InitialSpec::SinPi,
                "poly-x2-1mx2" => InitialSpec::PolyX2OneMinusX2,
                "custom-table" => InitialSpec::CustomTable(PathBuf::from(
                    get("u0_table").ok_or_else(|| Error::Config("u0 = custom-table needs u0_table".into()))?,
                )),
                other => return Err(Error::Config(format!("unknown u0 '{other}'"))),
            };
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(Error::Config(format!("t_final must be positive, got {}", self.t_final)));
        }
        if self.n_steps == 0 {
            return Err(Error::Config("n_steps must be positive".into()));
        }
        if self.m_cells < 2 {
            return Err(Error::Config("m_cells must be at least 2".into()));
        }
        let convergence = matches!(
            self.kind,
            ExperimentKind::ConvergenceTime | ExperimentKind::ConvergenceSpace
        );
        if convergence && self.levels < 2 {
            return Err(Error::Config("convergence studies need levels >= 2".into()));
        }
        if let ExponentSpec::Figure1 { alpha_t } = self.exponent {
            if !(alpha_t > 0.0 && alpha_t < 1.0) {
                return Err(Error::Config(format!("alpha_t must lie in (0, 1), got {alpha_t}")));
            }
        }
        if let Some(a) = self.alpha_bar {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::Config(format!("alpha_bar must lie in (0, 1), got {a}")));
            }
        }
        Ok(())
    }

    /// Solver configuration for this experiment with `n_steps` and `m_cells`
    /// replaced by the given values.
    pub fn solver_config(&self, n_steps: usize, m_cells: usize) -> Result<SolverConfig> {
        let mut cfg = SolverConfig::new(
            self.t_final,
            n_steps,
            Mesh1D::new(m_cells)?,
            self.exponent.build(self.t_final)?,
            self.initial.build()?,
        );
        if let Some(f) = self.source.build() {
            cfg = cfg.with_source(f);
        }
        Ok(cfg)
    }
}

/// Reads two-column numeric CSV, skipping blank lines, `#` comments and a
/// non-numeric header line.
pub fn read_pairs(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_pairs(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub fn parse_pairs(text: &str) -> std::result::Result<Vec<(f64, f64)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = (cols.next(), cols.next());
        match (
            a.and_then(|s| s.parse::<f64>().ok()),
            b.and_then(|s| s.parse::<f64>().ok()),
        ) {
            (Some(x), Some(y)) => out.push((x, y)),
            _ if out.is_empty() && i == 0 => continue,
            _ => return Err(format!("line {}: expected two numbers", i + 1)),
        }
    }
    Ok(out)
}

fn piecewise_linear(pts: &[(f64, f64)], x: f64) -> f64 {
    if x <= pts[0].0 {
        return pts[0].1;
    }
    if x >= pts[pts.len() - 1].0 {
        return pts[pts.len() - 1].1;
    }
    let i = pts.partition_point(|p| p.0 <= x) - 1;
    let (x0, y0) = pts[i];
    let (x1, y1) = pts[i + 1];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}
