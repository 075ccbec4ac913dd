//! The independent verification path: evaluate the original (unrewritten)
//! identity expression at every non-degenerate enumerated point.

use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::{FieldCtx, VarClass};
use crate::error::{Error, Result};
use crate::report::element_json;
use crate::towers::{parallel_fold, relations, EnumOpts, Model, Relation, TowerPoint};

use super::prover::{rewrite_to_base, ProofTrace};
use super::registry::IdentitySpec;

/// Serialized point coordinates: one nested coefficient group per coordinate,
/// in storage order a_1, b_1, c_1, a_2, ...
pub type SerializedPoint = Vec<Vec<Vec<u32>>>;

pub fn serialize_point(ctx: &FieldCtx, pt: &TowerPoint) -> SerializedPoint {
    pt.coords().iter().map(|&e| element_json(ctx, e)).collect()
}

/// Point-count evidence that a bivariate identity holds outright: two curves
/// of bidegrees (d1, e1) and (d2, e2) with no common component meet in at
/// most d1*e2 + e1*d2 affine points, so vanishing at more distinct points of
/// the (irreducible) step curve forces a shared component.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BezoutMargin {
    pub curve: String,
    pub distinct_curve_points: u64,
    pub degree_bound: u64,
    pub margin: i64,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointTestReport {
    pub id: String,
    pub index: u32,
    pub q: u64,
    pub k: u32,
    pub level: u32,
    pub model: Model,
    pub points_tested: u64,
    pub skipped_degenerate: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<SerializedPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bezout: Option<BezoutMargin>,
    pub pass: bool,
}

/// Joint outcome of both verification paths for one identity instantiation.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityOutcome {
    pub id: String,
    pub index: u32,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<ProofTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<PointTestReport>,
}

struct OracleAcc {
    tested: u64,
    skipped: u64,
    failures: u64,
    /// Minimal failing point by coordinate codes, so the report is identical
    /// for every partition schedule.
    first_failure: Option<(Vec<u64>, SerializedPoint)>,
    curve_points: HashSet<(u64, u64)>,
}

/// Evaluate the identity at every non-degenerate point of the given level.
pub fn test_identity_points(
    spec: &IdentitySpec,
    ctx: &FieldCtx,
    level: u32,
    model: Model,
    opts: &EnumOpts,
    workers: usize,
) -> Result<PointTestReport> {
    let needed = spec.max_var_index();
    if needed > level {
        return Err(Error::LevelTooLow {
            id: spec.id.name().to_string(),
            needed,
            level,
        });
    }
    // Bivariate reduction data for the Bezout margin: which step curve the
    // cleared numerator lives on, and the degree product bound.
    let bivariate: Option<(u32, u64)> =
        rewrite_to_base(spec.expression.num())
            .ok()
            .and_then(|(_, rewritten, _)| {
                let cleared = rewritten.num();
                let a_idx: Vec<u32> = cleared
                    .vars()
                    .iter()
                    .filter(|v| v.class == VarClass::A)
                    .map(|v| v.index)
                    .collect();
                match a_idx.as_slice() {
                    [i, j] if *j == *i + 1 => {
                        let rel = Relation::A(*i).poly(ctx);
                        let (d1, e1) = (
                            cleared.degree_in(crate::algebra::Var::a(*i)) as u64,
                            cleared.degree_in(crate::algebra::Var::a(*i + 1)) as u64,
                        );
                        let (d2, e2) = (
                            rel.degree_in(crate::algebra::Var::a(*i)) as u64,
                            rel.degree_in(crate::algebra::Var::a(*i + 1)) as u64,
                        );
                        Some((*i, d1 * e2 + e1 * d2))
                    }
                    _ => None,
                }
            });

    let tower = relations(ctx.q(), model, level);
    let expr = spec.expression.clone();
    let acc = parallel_fold(
        ctx,
        &tower,
        opts,
        workers,
        || OracleAcc {
            tested: 0,
            skipped: 0,
            failures: 0,
            first_failure: None,
            curve_points: HashSet::new(),
        },
        |acc, pt| {
            if pt.is_degenerate() {
                acc.skipped += 1;
                return;
            }
            let value = expr
                .evaluate(ctx, |v| pt.get(v))
                .expect("coordinates cover the identity");
            match value {
                None => acc.skipped += 1, // denominator vanished: not testable here
                Some(v) => {
                    acc.tested += 1;
                    if !v.is_zero() {
                        acc.failures += 1;
                        let codes: Vec<u64> = pt.coords().iter().map(|e| e.code()).collect();
                        let better = match &acc.first_failure {
                            None => true,
                            Some((best, _)) => codes < *best,
                        };
                        if better {
                            acc.first_failure = Some((codes, serialize_point(ctx, pt)));
                        }
                    }
                    if let Some((i, _)) = bivariate {
                        acc.curve_points
                            .insert((pt.a(i).code(), pt.a(i + 1).code()));
                    }
                }
            }
        },
        |mut a, b| {
            a.tested += b.tested;
            a.skipped += b.skipped;
            a.failures += b.failures;
            a.first_failure = match (a.first_failure.take(), b.first_failure) {
                (None, x) => x,
                (x, None) => x,
                (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
            };
            a.curve_points.extend(b.curve_points);
            a
        },
    )?;

    let bezout = bivariate.map(|(i, bound)| {
        let distinct = acc.curve_points.len() as u64;
        let margin = distinct as i64 - bound as i64;
        BezoutMargin {
            curve: Relation::A(i).to_string(),
            distinct_curve_points: distinct,
            degree_bound: bound,
            margin,
            certified: margin > 0 && acc.failures == 0,
        }
    });
    Ok(PointTestReport {
        id: spec.id.name().to_string(),
        index: spec.index,
        q: ctx.q(),
        k: ctx.k(),
        level,
        model,
        points_tested: acc.tested,
        skipped_degenerate: acc.skipped,
        failures: acc.failures,
        first_failure: acc.first_failure.map(|(_, pt)| pt),
        bezout,
        pass: acc.failures == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::registry::{instantiate, IdentityId};

    #[test]
    fn crec_holds_on_all_free_points_of_f8() {
        let ctx = FieldCtx::new(2, 1, 1).unwrap();
        let spec = instantiate(IdentityId::CRec, &ctx, 1).unwrap();
        let rep =
            test_identity_points(&spec, &ctx, 2, Model::Free, &EnumOpts::default(), 1).unwrap();
        assert_eq!(rep.failures, 0);
        assert!(rep.points_tested > 0);
        assert!(rep.pass);
    }

    #[test]
    fn corrupted_identity_reports_failing_point() {
        for (p, m) in [(2u32, 1u32), (3, 1)] {
            let ctx = FieldCtx::new(p, m, 1).unwrap();
            let bad = instantiate(IdentityId::CProd, &ctx, 2)
                .unwrap()
                .sign_corrupted();
            let rep =
                test_identity_points(&bad, &ctx, 2, Model::Free, &EnumOpts::default(), 1).unwrap();
            assert!(rep.failures >= 1, "q={}", ctx.q());
            assert!(rep.first_failure.is_some());
            assert!(!rep.pass);
        }
    }

    #[test]
    fn level_too_low_is_an_error() {
        let ctx = FieldCtx::new(2, 1, 1).unwrap();
        let spec = instantiate(IdentityId::CRec, &ctx, 2).unwrap(); // mentions c3
        assert!(matches!(
            test_identity_points(&spec, &ctx, 2, Model::Free, &EnumOpts::default(), 1),
            Err(Error::LevelTooLow { .. })
        ));
    }

    #[test]
    fn bezout_margin_on_cprod() {
        let ctx = FieldCtx::new(3, 1, 2).unwrap();
        let spec = instantiate(IdentityId::CProd, &ctx, 2).unwrap();
        let rep =
            test_identity_points(&spec, &ctx, 2, Model::Free, &EnumOpts::default(), 2).unwrap();
        let bz = rep.bezout.expect("cprod reduces to a bivariate form");
        assert!(bz.margin > 1, "margin {}", bz.margin);
        assert!(bz.certified);
    }

    #[test]
    fn identical_report_for_any_worker_count() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        let bad = instantiate(IdentityId::CProd, &ctx, 2)
            .unwrap()
            .sign_corrupted();
        let r1 = test_identity_points(&bad, &ctx, 2, Model::Free, &EnumOpts::default(), 1).unwrap();
        let r4 = test_identity_points(&bad, &ctx, 2, Model::Free, &EnumOpts::default(), 4).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r4).unwrap()
        );
    }
}
