//! Error/rate tables and their CSV and Markdown renderings.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::harness::config::OutputFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyKind {
    /// Time step halved at fixed mesh; `param` is N.
    Time,
    /// Mesh halved at fixed step; `param` is M.
    Space,
}

impl StudyKind {
    fn as_str(self) -> &'static str {
        match self {
            StudyKind::Time => "time",
            StudyKind::Space => "space",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub level: usize,
    pub param: usize,
    /// `None` marks a level whose solves failed.
    pub error: Option<f64>,
    /// `log2(err_{level-1} / err_level)`; absent on the first row.
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub study: StudyKind,
    pub exponent: String,
    pub initial: String,
    /// The parameter held fixed, e.g. `M=32`.
    pub fixed: String,
    pub rows: Vec<RateRow>,
}

/// `log2(coarse / fine)`.
pub fn observed_rate(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

impl RateTable {
    /// Builds rows from `(param, error)` pairs, filling in the rates.
    pub fn from_errors(
        study: StudyKind,
        exponent: impl Into<String>,
        initial: impl Into<String>,
        fixed: impl Into<String>,
        errors: &[(usize, Option<f64>)],
    ) -> Self {
        let rows = errors
            .iter()
            .enumerate()
            .map(|(level, &(param, error))| {
                let rate = match (level, error) {
                    (0, _) => None,
                    (_, Some(e)) => errors[level - 1].1.map(|prev| observed_rate(prev, e)),
                    _ => None,
                };
                RateRow {
                    level,
                    param,
                    error,
                    rate,
                }
            })
            .collect();
        Self {
            study,
            exponent: exponent.into(),
            initial: initial.into(),
            fixed: fixed.into(),
            rows,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_none())
    }

    pub fn errors(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.error).collect()
    }

    pub fn rates(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.rate).collect()
    }

    fn param_label(&self) -> &'static str {
        match self.study {
            StudyKind::Time => "N",
            StudyKind::Space => "M",
        }
    }

    pub fn emit(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => self.to_markdown(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# study={} exponent={} u0={} fixed={}",
            self.study.as_str(),
            self.exponent,
            self.initial,
            self.fixed
        );
        out.push_str("level,param,error,rate\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.level,
                r.param,
                fmt_error(r.error),
                fmt_rate(r.rate)
            );
        }
        out
    }

    /// Parameter, error and rate columns with `*` on the
    /// first row.
    pub fn to_markdown(&self) -> String {
        let (err, rate) = match self.study {
            StudyKind::Time => ("E2(tau,h)", "rate^t"),
            StudyKind::Space => ("G2(tau,h)", "rate^x"),
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<!-- exponent={} u0={} fixed={} -->",
            self.exponent, self.initial, self.fixed
        );
        let _ = writeln!(out, "| {} | {} | {} |", self.param_label(), err, rate);
        out.push_str("|---:|---:|---:|\n");
        for r in &self.rows {
            let _ = writeln!(out, "| {} | {} | {} |", r.param, fmt_error(r.error), fmt_rate(r.rate));
        }
        out
    }

    /// Inverse of [`RateTable::to_csv`].
    pub fn parse_csv(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Config(format!("rate table: {msg}"));
        let mut lines = text.lines();
        let meta = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| bad("missing metadata line".into()))?;
        let mut study = None;
        let (mut exponent, mut initial, mut fixed) = (None, None, None);
        for field in meta.split(' ') {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| bad(format!("bad metadata '{field}'")))?;
            match k {
                "study" => {
                    study = Some(match v {
                        "time" => StudyKind::Time,
                        "space" => StudyKind::Space,
                        _ => return Err(bad(format!("unknown study '{v}'"))),
                    })
                }
                "exponent" => exponent = Some(v.to_string()),
                "u0" => initial = Some(v.to_string()),
                "fixed" => fixed = Some(v.to_string()),
                _ => return Err(bad(format!("unknown metadata key '{k}'"))),
            }
        }
        if lines.next() != Some("level,param,error,rate") {
            return Err(bad("missing column header".into()));
        }
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(bad(format!("expected 4 columns in '{line}'")));
            }
            let int = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("bad integer '{s}'")));
            let opt = |s: &str, absent: &str| -> Result<Option<f64>> {
                if s == absent {
                    Ok(None)
                } else {
                    s.parse::<f64>().map(Some).map_err(|_| bad(format!("bad number '{s}'")))
                }
            };
            rows.push(RateRow {
                level: int(cols[0])?,
                param: int(cols[1])?,
                error: opt(cols[2], "failed")?,
                rate: opt(cols[3], "*")?,
            });
        }
        Ok(Self {
            study: study.ok_or_else(|| bad("missing study".into()))?,
            exponent: exponent.ok_or_else(|| bad("missing exponent".into()))?,
            initial: initial.ok_or_else(|| bad("missing u0".into()))?,
            fixed: fixed.ok_or_else(|| bad("missing fixed".into()))?,
            rows,
        })
    }
}

/// Five significant digits, e.g. `1.7768e-4`.
pub fn fmt_error(e: Option<f64>) -> String {
    match e {
        Some(v) => format!("{v:.4e}"),
        None => "failed".into(),
    }
}

pub fn fmt_rate(r: Option<f64>) -> String {
    match r {
        Some(v) => format!("{v:.4}"),
        None => "*".into(),
    }
}

/// Generic column output for the non-table experiments.
pub fn emit_columns(headers: &[&str], rows: &[Vec<String>], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str(&headers.join(","));
            out.push('\n');
            for r in rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
        }
        OutputFormat::Markdown => {
            let _ = writeln!(out, "| {} |", headers.join(" | "));
            let _ = writeln!(out, "|{}", "---:|".repeat(headers.len()));
            for r in rows {
                let _ = writeln!(out, "| {} |", r.join(" | "));
            }
        }
    }
    out
}
