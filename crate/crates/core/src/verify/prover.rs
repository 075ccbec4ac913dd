//! The symbolic verification path: rewrite b/c powers into a-variables, clear
//! denominators, then eliminate a-variables from the top down by Euclidean
//! reduction against the tower step relations.
//!
//! A zero final remainder certifies ideal membership in K(lower a-vars)[top
//! a-var] at each step, hence vanishing in every quotient of the relation
//! chain, in particular in the tower function field. The reduction is
//! fraction-free: each step tracks the power of the leading coefficient it
//! multiplied in, and that leading coefficient is a declared denominator
//! factor (a nonzero function on the tower), so the certificate is exact.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{
    clear_denominators, euclid_reduce, DenomFactor, EuclidReduction, RatExpr, SerializedPoly,
    SparsePoly, Var, VarClass,
};
use crate::error::{Error, Result};
use crate::towers::Relation;

use super::registry::IdentitySpec;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Proved,
    Failed,
}

/// One b/c power substituted during the rewrite.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RewriteStep {
    pub var: String,
    /// Exponent in the cofactor (after the common monomial was factored out).
    pub exponent: u32,
    /// The power of the base substitution rule applied: exponent = s*(q-1).
    pub rule_power: u32,
}

/// One variable-elimination step of the reduction chain.
#[derive(Clone, Debug, Serialize)]
pub struct ElimStep {
    pub var: String,
    pub relation: String,
    /// Degree of the (fraction-free) quotient in the eliminated variable.
    pub quotient_degree: u32,
    pub division_steps: u32,
    pub remainder: SerializedPoly,
}

/// Serializable certificate of one symbolic proof attempt.
#[derive(Clone, Debug, Serialize)]
pub struct ProofTrace {
    pub id: String,
    pub index: u32,
    pub q: u64,
    pub statement: String,
    pub rewrite_log: Vec<RewriteStep>,
    pub factored_monomial: SerializedPoly,
    pub cleared_numerator: SerializedPoly,
    pub elimination: Vec<ElimStep>,
    pub verdict: Verdict,
}

/// Full elimination data kept for soundness re-expansion checks.
#[derive(Clone, Debug)]
pub struct ElimApplication {
    pub input: SparsePoly,
    pub relation: SparsePoly,
    pub var: Var,
    pub reduction: EuclidReduction,
}

/// Proof result: the serializable trace plus the exact intermediates.
pub struct ProofOutcome {
    pub trace: ProofTrace,
    pub monomial: SparsePoly,
    pub cleared: SparsePoly,
    pub applications: Vec<ElimApplication>,
    pub remainder: SparsePoly,
}

impl ProofOutcome {
    pub fn proved(&self) -> bool {
        self.trace.verdict == Verdict::Proved
    }
}

/// Substitute b_j^(q-1) -> -(a_j^q+a_j-1)/a_j and c_j^(q-1) -> (a_j-1)/a_j
/// throughout, after factoring out one common b/c monomial.
///
/// Returns (factored monomial, rewritten cofactor, rewrite log). The factored
/// monomial is nonzero on non-degenerate points, so the input vanishes on the
/// tower iff the rewritten cofactor does.
pub fn rewrite_to_base(num: &SparsePoly) -> Result<(SparsePoly, RatExpr, Vec<RewriteStep>)> {
    let ctx = num.ctx().clone();
    let q = ctx.q() as u32;
    let r = q - 1;
    let vars = num.vars().to_vec();
    let terms: Vec<(Vec<u32>, crate::algebra::Element)> =
        num.terms().map(|(m, c)| (m.0.clone(), c)).collect();

    // common factor exponent per b/c variable, congruence-checked
    let mut factor_exp = vec![0u32; vars.len()];
    for (pos, v) in vars.iter().enumerate() {
        if v.class == VarClass::A {
            continue;
        }
        let min_e = terms.iter().map(|(m, _)| m[pos]).min().unwrap_or(0);
        let fe = min_e % r.max(1);
        for (m, _) in &terms {
            if (m[pos] as i64 - fe as i64).rem_euclid(r.max(1) as i64) != 0 {
                return Err(Error::NonReducibleExponent {
                    var: *v,
                    exp: m[pos],
                    r,
                });
            }
        }
        factor_exp[pos] = fe;
    }
    let monomial_powers: Vec<(Var, u32)> = vars
        .iter()
        .zip(&factor_exp)
        .filter(|&(_, &e)| e > 0)
        .map(|(&v, &e)| (v, e))
        .collect();
    let monomial = SparsePoly::monomial(&ctx, ctx.one(), &monomial_powers);

    let mut log: BTreeSet<(Var, u32, u32)> = BTreeSet::new();
    let mut acc = RatExpr::zero(&ctx);
    for (m, coeff) in &terms {
        let mut num_poly = SparsePoly::constant(&ctx, *coeff);
        let mut den: Vec<(DenomFactor, u32)> = Vec::new();
        for (pos, v) in vars.iter().enumerate() {
            let e = m[pos];
            match v.class {
                VarClass::A => {
                    if e > 0 {
                        num_poly = num_poly.mul(&SparsePoly::monomial(&ctx, ctx.one(), &[(*v, e)]));
                    }
                }
                VarClass::B => {
                    let rem_e = e - factor_exp[pos];
                    let s = rem_e / r.max(1);
                    if s > 0 {
                        log.insert((*v, rem_e, s));
                        let artin = DenomFactor::ArtinA(v.index).poly(&ctx);
                        num_poly = num_poly.mul(&artin.neg().pow(s));
                        den.push((DenomFactor::A(v.index), s));
                    }
                }
                VarClass::C => {
                    let rem_e = e - factor_exp[pos];
                    let s = rem_e / r.max(1);
                    if s > 0 {
                        log.insert((*v, rem_e, s));
                        let am1 = DenomFactor::AMinusOne(v.index).poly(&ctx);
                        num_poly = num_poly.mul(&am1.pow(s));
                        den.push((DenomFactor::A(v.index), s));
                    }
                }
            }
        }
        acc = acc.add(&RatExpr::over_factors(num_poly, &den));
    }
    let rewrite_log = log
        .into_iter()
        .map(|(v, e, s)| RewriteStep {
            var: v.to_string(),
            exponent: e,
            rule_power: s,
        })
        .collect();
    Ok((monomial, acc, rewrite_log))
}

/// Run the full symbolic proof of one registry identity.
pub fn prove_identity(spec: &IdentitySpec) -> Result<ProofOutcome> {
    let num = spec.expression.num().clone();
    let ctx = num.ctx().clone();
    let (monomial, rewritten, rewrite_log) = rewrite_to_base(&num)?;
    let cleared = clear_denominators(&rewritten);

    let mut cur = cleared.clone();
    let mut applications = Vec::new();
    let mut elim = Vec::new();
    let max_idx = cur
        .vars()
        .iter()
        .filter(|v| v.class == VarClass::A)
        .map(|v| v.index)
        .max()
        .unwrap_or(0);
    for i in (2..=max_idx).rev() {
        let v = Var::a(i);
        if cur.degree_in(v) == 0 {
            continue;
        }
        let rel = Relation::A(i - 1);
        let rel_poly = rel.poly(&ctx);
        let reduction = euclid_reduce(&cur, &rel_poly, v)?;
        elim.push(ElimStep {
            var: v.to_string(),
            relation: rel.to_string(),
            quotient_degree: reduction.quotient.degree_in(v),
            division_steps: reduction.steps,
            remainder: reduction.remainder.serialized(),
        });
        applications.push(ElimApplication {
            input: cur.clone(),
            relation: rel_poly,
            var: v,
            reduction: reduction.clone(),
        });
        cur = reduction.remainder;
    }
    let verdict = if cur.is_zero() {
        Verdict::Proved
    } else {
        Verdict::Failed
    };
    Ok(ProofOutcome {
        trace: ProofTrace {
            id: spec.id.name().to_string(),
            index: spec.index,
            q: ctx.q(),
            statement: spec.statement.clone(),
            rewrite_log,
            factored_monomial: monomial.serialized(),
            cleared_numerator: cleared.serialized(),
            elimination: elim,
            verdict,
        },
        monomial,
        cleared,
        applications,
        remainder: cur,
    })
}
