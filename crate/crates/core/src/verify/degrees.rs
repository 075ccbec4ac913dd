//! Generic-fiber degree estimation on the canonical branch.
//!
//! The degree of a tower step is operationalized as the modal fiber size:
//! group non-degenerate level-(n+1) points by the step's level-n generator
//! tuple and count distinct level-(n+1) tuples over each base tuple. A
//! stability flag compares the mode at k with the mode at k+1.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{FieldCtx, Var};
use crate::error::{Error, Result};
use crate::report::Outcome;
use crate::towers::{parallel_fold, relations, BranchHistogram, EnumOpts, Model};

/// Which tower's generator tuple defines the projection.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum TowerLetter {
    A,
    C,
    H,
    G,
}

impl TowerLetter {
    /// Generator tuple of the tower's level-n field.
    pub fn gens(self, n: u32) -> Vec<Var> {
        let mut out = Vec::new();
        match self {
            TowerLetter::A => {
                for i in 1..=n {
                    out.push(Var::a(i));
                }
            }
            TowerLetter::C => {
                for i in 1..=n {
                    out.push(Var::c(i));
                }
            }
            TowerLetter::H => {
                for i in 1..=n {
                    out.push(Var::a(i));
                    out.push(Var::b(i));
                }
            }
            TowerLetter::G => {
                for i in 1..=n {
                    out.push(Var::a(i));
                    if i < n {
                        out.push(Var::b(i));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for TowerLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TowerLetter::A => "A",
            TowerLetter::C => "C",
            TowerLetter::H => "H",
            TowerLetter::G => "G",
        };
        write!(f, "{s}")
    }
}

impl FromStr for TowerLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<TowerLetter> {
        match s {
            "A" | "a" => Ok(TowerLetter::A),
            "C" | "c" => Ok(TowerLetter::C),
            "H" | "h" => Ok(TowerLetter::H),
            "G" | "g" => Ok(TowerLetter::G),
            other => Err(Error::BadFieldParam(format!(
                "unknown tower letter: {other}"
            ))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DegVerdict {
    Measured,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Stability {
    pub k_next: u32,
    pub modal_next: Option<u64>,
    pub stable: bool,
}

/// Fiber-size statistics for one tower step on the canonical branch.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub step: String,
    pub from_level: u32,
    pub to_level: u32,
    pub p: u32,
    pub m: u32,
    pub k: u32,
    /// fiber size -> number of base tuples with that fiber size
    pub histogram: BranchHistogram,
    pub base_tuples: u64,
    /// Modal fiber size (the inferred degree); None when inconclusive.
    pub modal: Option<u64>,
    pub verdict: DegVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<Stability>,
}

impl DegreeReport {
    pub fn outcome(&self) -> Outcome {
        match self.verdict {
            DegVerdict::Measured => Outcome::Pass,
            DegVerdict::Inconclusive => Outcome::Inconclusive,
        }
    }

    pub fn text_row(&self) -> String {
        let modal = self
            .modal
            .map(|m| m.to_string())
            .unwrap_or_else(|| "?".to_string());
        let stab = match &self.stability {
            Some(s) => format!(
                " (k={} modal {}; {})",
                s.k_next,
                s.modal_next
                    .map(|m| m.to_string())
                    .unwrap_or_else(|| "?".into()),
                if s.stable { "stable" } else { "UNSTABLE" }
            ),
            None => String::new(),
        };
        format!(
            "degree {}-step {}->{} at k={}: modal {} over {} base tuples [{:?}]{}",
            self.step,
            self.from_level,
            self.to_level,
            self.k,
            modal,
            self.base_tuples,
            self.verdict,
            stab
        )
    }
}

/// Too few base tuples to call a mode.
const MIN_BASE_TUPLES: u64 = 10;

fn histogram_once(
    ctx: &FieldCtx,
    letter: TowerLetter,
    from_level: u32,
    opts: &EnumOpts,
    workers: usize,
) -> Result<(BranchHistogram, u64, Option<u64>)> {
    let base_gens = letter.gens(from_level);
    let ext_gens = letter.gens(from_level + 1);
    let spec = relations(ctx.q(), Model::Canonical, from_level + 1);
    let fibers = parallel_fold(
        ctx,
        &spec,
        opts,
        workers,
        HashMap::<Vec<u64>, HashSet<Vec<u64>>>::new,
        |acc, pt| {
            if pt.is_degenerate() {
                return;
            }
            acc.entry(pt.key(&base_gens))
                .or_default()
                .insert(pt.key(&ext_gens));
        },
        |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_default().extend(v);
            }
            a
        },
    )?;
    let mut hist = BranchHistogram::default();
    for exts in fibers.values() {
        *hist.0.entry(exts.len() as u64).or_insert(0) += 1;
    }
    let bases = fibers.len() as u64;
    let modal = if bases >= MIN_BASE_TUPLES {
        // most frequent fiber size; ties resolved toward the smaller size
        hist.0
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&size, _)| size)
    } else {
        None
    };
    Ok((hist, bases, modal))
}

/// Fiber histogram for one step at the context's own k, without stability.
pub fn fiber_histogram(
    ctx: &FieldCtx,
    letter: TowerLetter,
    from_level: u32,
    opts: &EnumOpts,
    workers: usize,
) -> Result<DegreeReport> {
    let (histogram, base_tuples, modal) = histogram_once(ctx, letter, from_level, opts, workers)?;
    Ok(DegreeReport {
        step: letter.to_string(),
        from_level,
        to_level: from_level + 1,
        p: ctx.p(),
        m: ctx.m(),
        k: ctx.k(),
        histogram,
        base_tuples,
        modal,
        verdict: if modal.is_some() {
            DegVerdict::Measured
        } else {
            DegVerdict::Inconclusive
        },
        stability: None,
    })
}

/// Full degree measurement: histogram at k plus the k+1 stability cross-check
/// (skipped when k+1 would exceed the field size cap).
pub fn degree_report(
    p: u32,
    m: u32,
    k: u32,
    letter: TowerLetter,
    from_level: u32,
    opts: &EnumOpts,
    workers: usize,
) -> Result<DegreeReport> {
    let ctx = FieldCtx::new(p, m, k)?;
    let mut report = fiber_histogram(&ctx, letter, from_level, opts, workers)?;
    if let Ok(ctx_next) = FieldCtx::new(p, m, k + 1) {
        let (_, _, modal_next) = histogram_once(&ctx_next, letter, from_level, opts, workers)?;
        report.stability = Some(Stability {
            k_next: k + 1,
            modal_next,
            stable: report.modal.is_some() && report.modal == modal_next,
        });
    }
    Ok(report)
}
