//! Report envelope and canonical serialization.
//!
//! All numeric content is exact (integers and reduced rationals); maps are
//! ordered and struct fields have a fixed order, so the same configuration
//! always serializes to byte-identical output regardless of worker count.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{Element, FieldCtx};
use crate::error::{Error, Result};
use crate::towers::{CountReport, Model};
use crate::verify::{
    CatalogEntry, DegreeReport, EqualityReport, IdentityOutcome, RemarkReport, WitnessReport,
};

pub const SCHEMA_VERSION: &str = "1";

/// A reduced rational with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Rational {
    numer: i64,
    denom: i64,
}

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Rational {
        assert!(denom != 0, "zero denominator");
        let g = gcd(numer.unsigned_abs(), denom.unsigned_abs()) as i64;
        let sign = if denom < 0 { -1 } else { 1 };
        Rational {
            numer: sign * numer / g,
            denom: sign * denom / g,
        }
    }

    pub fn numer(self) -> i64 {
        self.numer
    }

    pub fn denom(self) -> i64 {
        self.denom
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if a == 0 {
        b.max(1)
    } else {
        gcd(b % a, a)
    }
}

/// Nested little-endian coefficient view used in JSON reports.
pub fn element_json(ctx: &FieldCtx, e: Element) -> Vec<Vec<u32>> {
    ctx.coeffs(e)
}

/// Compact digit form for CSV cells: inner digits joined by '.', outer
/// coordinates by ':'. Example over F_27^2: "1.0.2:0.1.0".
pub fn element_digits(ctx: &FieldCtx, e: Element) -> String {
    ctx.coeffs(e)
        .iter()
        .map(|grp| {
            grp.iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect::<Vec<_>>()
        .join(":")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<ReportFormat> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(Error::BadFieldParam(format!("unknown format: {other}"))),
        }
    }
}

/// Echo of the run configuration, sufficient to reproduce the run.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub p: u32,
    pub m: u32,
    pub k: u32,
    pub levels: u32,
    pub model: Model,
    pub tower: Option<String>,
    pub step: Option<String>,
    pub from: Option<u32>,
    pub identity: Option<String>,
    pub mode: Option<String>,
    pub format: ReportFormat,
    pub out: Option<String>,
    /// Wall-time knob only; excluded from the echo so reports are identical
    /// across worker counts.
    #[serde(skip)]
    pub workers: usize,
    pub max_points: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FieldInfo {
    pub p: u32,
    pub m: u32,
    pub k: u32,
    pub q: u64,
    pub ell: u64,
    pub size: u64,
    pub inner_modulus: Vec<u32>,
    pub outer_modulus: Vec<u32>,
}

impl FieldInfo {
    pub fn of(ctx: &FieldCtx) -> FieldInfo {
        FieldInfo {
            p: ctx.p(),
            m: ctx.m(),
            k: ctx.k(),
            q: ctx.q(),
            ell: ctx.ell(),
            size: ctx.size(),
            inner_modulus: ctx.inner_modulus().to_vec(),
            outer_modulus: ctx.outer_modulus().to_vec(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn worst(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// The complete result of one CLI run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub tool_name: String,
    pub tool_version: String,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldInfo>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub catalog: Vec<CatalogEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub equalities: Vec<EqualityReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counts: Vec<CountReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remarks: Option<RemarkReport>,
    /// (q, 2(q^2-1)/(q+2)) rows shown with every report.
    pub reference_ratios: Vec<(u64, Rational)>,
    pub overall: Outcome,
}

impl Report {
    pub fn new(config: RunConfig) -> Report {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            tool_name: "towerlab".to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            field: None,
            identities: Vec::new(),
            catalog: Vec::new(),
            degrees: Vec::new(),
            equalities: Vec::new(),
            witnesses: Vec::new(),
            counts: Vec::new(),
            remarks: None,
            reference_ratios: Vec::new(),
            overall: Outcome::Pass,
        }
    }

    pub fn reference_ratio(q: u64) -> Rational {
        Rational::new(2 * (q as i64 * q as i64 - 1), q as i64 + 2)
    }

    /// Recompute the overall verdict from the parts.
    pub fn finalize(&mut self) {
        let mut v = Outcome::Pass;
        for id in &self.identities {
            v = v.worst(if id.pass {
                Outcome::Pass
            } else {
                Outcome::Fail
            });
        }
        for d in &self.degrees {
            v = v.worst(d.outcome());
        }
        for e in &self.equalities {
            v = v.worst(e.outcome());
        }
        for w in &self.witnesses {
            v = v.worst(if w.pass { Outcome::Pass } else { Outcome::Fail });
        }
        if let Some(r) = &self.remarks {
            v = v.worst(if r.pass { Outcome::Pass } else { Outcome::Fail });
        }
        self.overall = v;
    }

    pub fn exit_code(&self) -> i32 {
        match self.overall {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconclusive => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        push(
            &mut out,
            format!(
                "towerlab {} (schema {})",
                self.tool_version, self.schema_version
            ),
        );
        push(&mut out, format!("command: {}", self.config.command));
        if let Some(f) = &self.field {
            push(
                &mut out,
                format!(
                    "field: p={} m={} k={} q={} ell={} size={}",
                    f.p, f.m, f.k, f.q, f.ell, f.size
                ),
            );
            push(
                &mut out,
                format!("inner modulus coefficients: {:?}", f.inner_modulus),
            );
            push(
                &mut out,
                format!("outer modulus coefficients: {:?}", f.outer_modulus),
            );
        }
        for id in &self.identities {
            let sym = id
                .symbolic
                .as_ref()
                .map(|t| format!("symbolic={:?}", t.verdict))
                .unwrap_or_default();
            let pts = id
                .points
                .as_ref()
                .map(|p| format!("points: tested={} failures={}", p.points_tested, p.failures))
                .unwrap_or_default();
            push(
                &mut out,
                format!(
                    "identity {}(n={}): {} {} -> {}",
                    id.id,
                    id.index,
                    sym,
                    pts,
                    if id.pass { "pass" } else { "FAIL" }
                ),
            );
        }
        for d in &self.degrees {
            push(&mut out, d.text_row());
        }
        for e in &self.equalities {
            push(&mut out, e.text_row());
        }
        for w in &self.witnesses {
            push(
                &mut out,
                format!(
                    "witnesses at level {} (k={}): tested={} failures={} -> {}",
                    w.level,
                    w.k,
                    w.points_tested,
                    w.total_failures(),
                    if w.pass { "pass" } else { "FAIL" }
                ),
            );
        }
        for c in &self.counts {
            push(
                &mut out,
                format!(
                    "counts: model={} n={} k={} points={} non-degenerate={}",
                    c.model, c.level, c.k, c.points, c.non_degenerate
                ),
            );
        }
        if let Some(r) = &self.remarks {
            out.push_str(&r.to_text());
        }
        for (q, ratio) in &self.reference_ratios {
            push(
                &mut out,
                format!("reference ratio 2(q^2-1)/(q+2) at q={q}: {ratio}"),
            );
        }
        push(&mut out, format!("overall: {:?}", self.overall));
        out
    }

    /// CSV is only defined for the tabular sections (fiber histograms).
    pub fn to_csv(&self) -> Result<String> {
        if self.degrees.is_empty() {
            return Err(Error::BadFieldParam(
                "csv output is only available for degree histograms".into(),
            ));
        }
        let mut out = String::from("base_tuple_count,fiber_size,frequency\n");
        for d in &self.degrees {
            for (size, count) in &d.histogram.0 {
                out.push_str(&format!("{},{},{}\n", d.base_tuples, size, count));
            }
        }
        Ok(out)
    }

    /// Render in the requested format and write to the path (or stdout when
    /// None). Returns the number of bytes written.
    pub fn emit(&self, format: ReportFormat, path: Option<&std::path::Path>) -> Result<u64> {
        let body = match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Text => self.to_text(),
            ReportFormat::Csv => self.to_csv()?,
        };
        match path {
            Some(p) => std::fs::write(p, &body)?,
            None => {
                use std::io::Write;
                std::io::stdout().write_all(body.as_bytes())?;
            }
        }
        Ok(body.len() as u64)
    }
}
