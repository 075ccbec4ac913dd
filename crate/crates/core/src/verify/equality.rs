//! Field-equality checking on enumerated points.
//!
//! Two generator selections induce two partitions of the non-degenerate
//! canonical points at a level (by tuple equality); the fields they generate
//! coincide pointwise iff the partitions do. Equality verdicts in acceptance
//! runs additionally require the witness identities (explicit mutual-
//! membership formulas) to hold, which the witness suite checks on the free
//! model so that every Kummer branch is covered.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::{FieldCtx, Var};
use crate::error::Result;
use crate::report::Outcome;
use crate::towers::{enumerate_points, parallel_fold, relations, EnumOpts, Model};

use super::degrees::TowerLetter;
use super::points::{serialize_point, SerializedPoint};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EqVerdict {
    Equal,
    Unequal,
    Inconclusive,
}

/// A labeled coordinate selection, e.g. H_2 -> {a1, b1, a2, b2}.
#[derive(Clone, Debug)]
pub struct GenSel {
    pub label: String,
    pub gens: Vec<Var>,
}

impl GenSel {
    pub fn tower(letter: TowerLetter, n: u32) -> GenSel {
        GenSel {
            label: format!("{letter}{n}"),
            gens: letter.gens(n),
        }
    }

    /// Union of two selections, sorted and deduplicated.
    pub fn compositum(label: impl Into<String>, parts: &[&[Var]]) -> GenSel {
        let mut gens: Vec<Var> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        gens.sort();
        gens.dedup();
        GenSel {
            label: label.into(),
            gens,
        }
    }
}

/// Two points witnessing that the partitions differ: same class under
/// `agreeing_side`, different classes on the other side.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub agreeing_side: String,
    pub point1: SerializedPoint,
    pub point2: SerializedPoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct EqualityReport {
    pub left_label: String,
    pub right_label: String,
    pub left_gens: Vec<String>,
    pub right_gens: Vec<String>,
    pub level: u32,
    pub k: u32,
    pub points: u64,
    pub skipped_degenerate: u64,
    pub classes_left: u64,
    pub classes_right: u64,
    pub verdict: EqVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl EqualityReport {
    pub fn outcome(&self) -> Outcome {
        match self.verdict {
            EqVerdict::Inconclusive => Outcome::Inconclusive,
            _ => Outcome::Pass,
        }
    }

    pub fn text_row(&self) -> String {
        format!(
            "equality ({}, {}) at level {} (k={}): {:?} over {} points ({} / {} classes)",
            self.left_label,
            self.right_label,
            self.level,
            self.k,
            self.verdict,
            self.points,
            self.classes_left,
            self.classes_right
        )
    }
}

/// At least this many classes on each side before an EQUAL verdict counts.
const MIN_CLASSES: u64 = 10;

/// Compare the partitions induced by two generator selections over all
/// non-degenerate canonical points at the given level.
///
/// Runs serially regardless of worker settings: the counterexample choice is
/// stream-order dependent, and a single pass is cheap at the supported sizes.
pub fn partition_compare(
    ctx: &FieldCtx,
    level: u32,
    left: &GenSel,
    right: &GenSel,
    opts: &EnumOpts,
) -> Result<EqualityReport> {
    for sel in [left, right] {
        if let Some(v) = sel.gens.iter().find(|v| v.index > level) {
            return Err(crate::error::Error::LevelTooLow {
                id: sel.label.clone(),
                needed: v.index,
                level,
            });
        }
    }
    let spec = relations(ctx.q(), Model::Canonical, level);
    let mut points = 0u64;
    let mut skipped = 0u64;
    // class key -> (other-side key of first member, first member)
    let mut lmap: HashMap<Vec<u64>, (Vec<u64>, SerializedPoint)> = HashMap::new();
    let mut rmap: HashMap<Vec<u64>, (Vec<u64>, SerializedPoint)> = HashMap::new();
    let mut witness: Option<Counterexample> = None;
    for pt in enumerate_points(ctx, &spec, opts) {
        let pt = pt?;
        if pt.is_degenerate() {
            skipped += 1;
            continue;
        }
        points += 1;
        let lk = pt.key(&left.gens);
        let rk = pt.key(&right.gens);
        match lmap.entry(lk.clone()) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert((rk.clone(), serialize_point(ctx, &pt)));
            }
            std::collections::hash_map::Entry::Occupied(e) => {
                if e.get().0 != rk && witness.is_none() {
                    witness = Some(Counterexample {
                        agreeing_side: left.label.clone(),
                        point1: e.get().1.clone(),
                        point2: serialize_point(ctx, &pt),
                    });
                }
            }
        }
        match rmap.entry(rk) {
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert((lk, serialize_point(ctx, &pt)));
            }
            std::collections::hash_map::Entry::Occupied(e) => {
                if e.get().0 != lk && witness.is_none() {
                    witness = Some(Counterexample {
                        agreeing_side: right.label.clone(),
                        point1: e.get().1.clone(),
                        point2: serialize_point(ctx, &pt),
                    });
                }
            }
        }
    }
    let classes_left = lmap.len() as u64;
    let classes_right = rmap.len() as u64;
    let verdict = if witness.is_some() {
        EqVerdict::Unequal
    } else if classes_left.min(classes_right) < MIN_CLASSES {
        EqVerdict::Inconclusive
    } else {
        EqVerdict::Equal
    };
    Ok(EqualityReport {
        left_label: left.label.clone(),
        right_label: right.label.clone(),
        left_gens: left.gens.iter().map(|v| v.to_string()).collect(),
        right_gens: right.gens.iter().map(|v| v.to_string()).collect(),
        level,
        k: ctx.k(),
        points,
        skipped_degenerate: skipped,
        classes_left,
        classes_right,
        verdict,
        counterexample: witness,
    })
}

/// Per-witness failure counts over the free model.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub q: u64,
    pub k: u32,
    pub level: u32,
    pub points_tested: u64,
    pub skipped_degenerate: u64,
    /// witness name -> failures (all must be zero)
    pub failures: BTreeMap<String, u64>,
    pub pass: bool,
}

impl WitnessReport {
    pub fn total_failures(&self) -> u64 {
        self.failures.values().sum()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (w, f) in &self.failures {
            let _ = writeln!(s, "  witness {w}: failures {f}");
        }
        s
    }
}

/// Check the explicit mutual-membership witnesses at every non-degenerate
/// free-model point:
///  - W0(i): a_i * (1 - c_i^(q-1)) = 1
///  - WZ(i): (c_i / (a_i * b_{i-1}))^(q-1) = 1, for i >= 2
///  - WX(i): (b_i / (a_i * (a_{i-1}-1) * c_{i-1}))^(q-1) = 1, for i >= 2
pub fn witness_suite(
    ctx: &FieldCtx,
    level: u32,
    opts: &EnumOpts,
    workers: usize,
) -> Result<WitnessReport> {
    let spec = relations(ctx.q(), Model::Free, level);
    let q = ctx.q();
    let names: Vec<String> = {
        let mut v = Vec::new();
        for i in 1..=level {
            v.push(format!("W0({i})"));
        }
        for i in 2..=level {
            v.push(format!("WZ({i})"));
            v.push(format!("WX({i})"));
        }
        v
    };
    let zero_counts =
        || -> BTreeMap<String, u64> { names.iter().map(|n| (n.clone(), 0)).collect() };
    let (tested, skipped, failures) = parallel_fold(
        ctx,
        &spec,
        opts,
        workers,
        || (0u64, 0u64, zero_counts()),
        |acc, pt| {
            if pt.is_degenerate() {
                acc.1 += 1;
                return;
            }
            acc.0 += 1;
            for i in 1..=level {
                // a_i * (1 - c_i^(q-1)) = 1
                let w0 = ctx.mul(pt.a(i), ctx.sub(ctx.one(), ctx.pow(pt.c(i), q - 1)));
                if w0 != ctx.one() {
                    *acc.2.get_mut(&format!("W0({i})")).unwrap() += 1;
                }
            }
            for i in 2..=level {
                let wz_base = ctx
                    .div(pt.c(i), ctx.mul(pt.a(i), pt.b(i - 1)))
                    .expect("nonzero on non-degenerate points");
                if ctx.pow(wz_base, q - 1) != ctx.one() {
                    *acc.2.get_mut(&format!("WZ({i})")).unwrap() += 1;
                }
                let denom = ctx.mul(
                    ctx.mul(pt.a(i), ctx.sub(pt.a(i - 1), ctx.one())),
                    pt.c(i - 1),
                );
                let wx_base = ctx
                    .div(pt.b(i), denom)
                    .expect("nonzero on non-degenerate points");
                if ctx.pow(wx_base, q - 1) != ctx.one() {
                    *acc.2.get_mut(&format!("WX({i})")).unwrap() += 1;
                }
            }
        },
        |mut a, b| {
            a.0 += b.0;
            a.1 += b.1;
            for (k, v) in b.2 {
                *a.2.get_mut(&k).unwrap() += v;
            }
            a
        },
    )?;
    let pass = failures.values().all(|&f| f == 0);
    Ok(WitnessReport {
        q,
        k: ctx.k(),
        level,
        points_tested: tested,
        skipped_degenerate: skipped,
        failures,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_equals_c2() {
        for (p, m) in [(2u32, 1u32), (3, 1)] {
            let ctx = FieldCtx::new(p, m, 2).unwrap();
            let rep = partition_compare(
                &ctx,
                2,
                &GenSel::tower(TowerLetter::H, 2),
                &GenSel::tower(TowerLetter::C, 2),
                &EnumOpts::default(),
            )
            .unwrap();
            assert_eq!(rep.verdict, EqVerdict::Equal, "q={}", ctx.q());
        }
    }

    #[test]
    fn h1_differs_from_c1_at_q3() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let rep = partition_compare(
            &ctx,
            1,
            &GenSel::tower(TowerLetter::H, 1),
            &GenSel::tower(TowerLetter::C, 1),
            &EnumOpts::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, EqVerdict::Unequal);
        let ce = rep.counterexample.unwrap();
        assert_eq!(ce.agreeing_side, "H1");
        // the witness pair shares (a1, b1) and differs in c1
        assert_eq!(ce.point1[0], ce.point2[0]);
        assert_eq!(ce.point1[1], ce.point2[1]);
        assert_ne!(ce.point1[2], ce.point2[2]);
    }

    #[test]
    fn generators_above_the_level_are_rejected() {
        let ctx = FieldCtx::new(2, 1, 1).unwrap();
        let res = partition_compare(
            &ctx,
            2,
            &GenSel::tower(TowerLetter::H, 3),
            &GenSel::tower(TowerLetter::C, 2),
            &EnumOpts::default(),
        );
        assert!(matches!(
            res,
            Err(crate::error::Error::LevelTooLow { .. })
        ));
    }

    #[test]
    fn partition_compare_is_reflexive_and_symmetric() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        let h2 = GenSel::tower(TowerLetter::H, 2);
        let c2 = GenSel::tower(TowerLetter::C, 2);
        let refl = partition_compare(&ctx, 2, &h2, &h2, &EnumOpts::default()).unwrap();
        assert_eq!(refl.verdict, EqVerdict::Equal);
        let lr = partition_compare(&ctx, 2, &h2, &c2, &EnumOpts::default()).unwrap();
        let rl = partition_compare(&ctx, 2, &c2, &h2, &EnumOpts::default()).unwrap();
        assert_eq!(lr.verdict, rl.verdict);
    }

    #[test]
    fn witnesses_pass_on_free_model() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        let rep = witness_suite(&ctx, 3, &EnumOpts::default(), 2).unwrap();
        assert!(rep.pass, "failures: {:?}", rep.failures);
        assert!(rep.points_tested > 0);
    }

    #[test]
    fn wz_is_exact_product_at_q2() {
        // mu_1 = {1}: c_i = a_i * b_{i-1} exactly on every branch
        let ctx = FieldCtx::new(2, 1, 2).unwrap();
        let spec = relations(2, Model::Free, 2);
        for pt in enumerate_points(&ctx, &spec, &EnumOpts::default()) {
            let pt = pt.unwrap();
            if pt.is_degenerate() {
                continue;
            }
            assert_eq!(pt.c(2), ctx.mul(pt.a(2), pt.b(1)));
        }
    }
}
