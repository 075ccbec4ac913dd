//! Formal fractions over [`SparsePoly`] with a restricted denominator set.
//!
//! Denominators are kept factored over the declared multiplicative set
//! { a_i, a_i - 1, a_i^q + a_i - 1, c_i^(q-1) - 1 }. The factors are pairwise
//! coprime, so the factored max-power merge used by addition is an exact lcm
//! and no polynomial gcd is ever needed. Every factor is a nonzero function
//! on the non-degenerate locus of the towers, which is what makes clearing
//! denominators sound for identity proving.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::field::{Element, FieldCtx};
use super::poly::{SparsePoly, Var};
use crate::error::{Error, Result};

/// A declared denominator factor.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum DenomFactor {
    /// a_i
    A(u32),
    /// a_i - 1
    AMinusOne(u32),
    /// a_i^q + a_i - 1
    ArtinA(u32),
    /// c_i^(q-1) - 1
    KummerC(u32),
}

impl DenomFactor {
    pub fn poly(self, ctx: &FieldCtx) -> SparsePoly {
        let q = ctx.q() as u32;
        match self {
            DenomFactor::A(i) => SparsePoly::var(ctx, Var::a(i)),
            DenomFactor::AMinusOne(i) => SparsePoly::var(ctx, Var::a(i)).sub(&SparsePoly::one(ctx)),
            DenomFactor::ArtinA(i) => SparsePoly::monomial(ctx, ctx.one(), &[(Var::a(i), q)])
                .add(&SparsePoly::var(ctx, Var::a(i)))
                .sub(&SparsePoly::one(ctx)),
            DenomFactor::KummerC(i) => SparsePoly::monomial(ctx, ctx.one(), &[(Var::c(i), q - 1)])
                .sub(&SparsePoly::one(ctx)),
        }
    }

    /// Evaluate without materializing the polynomial.
    pub fn evaluate<F>(self, ctx: &FieldCtx, assign: F) -> Result<Element>
    where
        F: Fn(Var) -> Option<Element>,
    {
        let q = ctx.q();
        let val = |v: Var| assign(v).ok_or(Error::MissingCoordinate(v));
        Ok(match self {
            DenomFactor::A(i) => val(Var::a(i))?,
            DenomFactor::AMinusOne(i) => ctx.sub(val(Var::a(i))?, ctx.one()),
            DenomFactor::ArtinA(i) => {
                let a = val(Var::a(i))?;
                ctx.sub(ctx.add(ctx.pow(a, q), a), ctx.one())
            }
            DenomFactor::KummerC(i) => ctx.sub(ctx.pow(val(Var::c(i))?, q - 1), ctx.one()),
        })
    }
}

impl fmt::Display for DenomFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenomFactor::A(i) => write!(f, "a{i}"),
            DenomFactor::AMinusOne(i) => write!(f, "a{i}-1"),
            DenomFactor::ArtinA(i) => write!(f, "a{i}^q+a{i}-1"),
            DenomFactor::KummerC(i) => write!(f, "c{i}^(q-1)-1"),
        }
    }
}

/// num / prod(factor^power), with the denominator stored factored.
#[derive(Clone, PartialEq, Eq)]
pub struct RatExpr {
    num: SparsePoly,
    den: BTreeMap<DenomFactor, u32>,
}

impl RatExpr {
    pub fn from_poly(num: SparsePoly) -> RatExpr {
        RatExpr {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn zero(ctx: &FieldCtx) -> RatExpr {
        Self::from_poly(SparsePoly::zero(ctx))
    }

    /// num over an explicit product of declared factors.
    pub fn over_factors(num: SparsePoly, factors: &[(DenomFactor, u32)]) -> RatExpr {
        let mut den = BTreeMap::new();
        for &(f, e) in factors {
            if e > 0 {
                *den.entry(f).or_insert(0) += e;
            }
        }
        RatExpr { num, den }
    }

    /// num over a denominator given as explicit factor polynomials; each one
    /// must match a declared factor, otherwise the fraction is rejected.
    pub fn with_denominator(num: SparsePoly, den_factors: &[SparsePoly]) -> Result<RatExpr> {
        let ctx = num.ctx().clone();
        let mut den: BTreeMap<DenomFactor, u32> = BTreeMap::new();
        for fp in den_factors {
            let matched = declared_candidates(fp)
                .into_iter()
                .find(|cand| &cand.poly(&ctx) == fp)
                .ok_or_else(|| Error::UndeclaredDenominator(format!("{fp}")))?;
            *den.entry(matched).or_insert(0) += 1;
        }
        Ok(RatExpr { num, den })
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (DenomFactor, u32)> + '_ {
        self.den.iter().map(|(&f, &e)| (f, e))
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn den_poly(&self, ctx: &FieldCtx) -> SparsePoly {
        let mut acc = SparsePoly::one(ctx);
        for (&f, &e) in &self.den {
            acc = acc.mul(&f.poly(ctx).pow(e));
        }
        acc
    }

    pub fn neg(&self) -> RatExpr {
        RatExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RatExpr) -> RatExpr {
        let ctx = self.num.ctx().clone();
        // lcm of the factored denominators: max powers
        let mut den = self.den.clone();
        for (&f, &e) in &other.den {
            let slot = den.entry(f).or_insert(0);
            *slot = (*slot).max(e);
        }
        let cofactor = |own: &BTreeMap<DenomFactor, u32>| -> SparsePoly {
            let mut acc = SparsePoly::one(&ctx);
            for (&f, &e) in &den {
                let have = own.get(&f).copied().unwrap_or(0);
                if e > have {
                    acc = acc.mul(&f.poly(&ctx).pow(e - have));
                }
            }
            acc
        };
        let num = self
            .num
            .mul(&cofactor(&self.den))
            .add(&other.num.mul(&cofactor(&other.den)));
        RatExpr { num, den }
    }

    pub fn sub(&self, other: &RatExpr) -> RatExpr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatExpr) -> RatExpr {
        let mut den = self.den.clone();
        for (&f, &e) in &other.den {
            *den.entry(f).or_insert(0) += e;
        }
        RatExpr {
            num: self.num.mul(&other.num),
            den,
        }
    }

    pub fn mul_poly(&self, p: &SparsePoly) -> RatExpr {
        RatExpr {
            num: self.num.mul(p),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> RatExpr {
        let mut den = BTreeMap::new();
        for (&f, &p) in &self.den {
            den.insert(f, p * e);
        }
        RatExpr {
            num: self.num.pow(e),
            den,
        }
    }

    /// Evaluate the fraction; `None` when a denominator factor vanishes.
    pub fn evaluate<F>(&self, ctx: &FieldCtx, assign: F) -> Result<Option<Element>>
    where
        F: Fn(Var) -> Option<Element>,
    {
        let mut den_val = ctx.one();
        for (&f, &e) in &self.den {
            let v = f.evaluate(ctx, &assign)?;
            if v.is_zero() {
                return Ok(None);
            }
            den_val = ctx.mul(den_val, ctx.pow(v, e as u64));
        }
        let num_val = self.num.evaluate(&assign)?;
        Ok(Some(
            ctx.div(num_val, den_val).expect("den checked nonzero"),
        ))
    }
}

/// Declared factors that could possibly match a polynomial with these
/// variables (used only to produce a typed match or a clean error).
fn declared_candidates(p: &SparsePoly) -> Vec<DenomFactor> {
    let mut out = Vec::new();
    for v in p.vars() {
        match v.class {
            super::poly::VarClass::A => {
                out.push(DenomFactor::A(v.index));
                out.push(DenomFactor::AMinusOne(v.index));
                out.push(DenomFactor::ArtinA(v.index));
            }
            super::poly::VarClass::C => out.push(DenomFactor::KummerC(v.index)),
            super::poly::VarClass::B => {}
        }
    }
    out
}

/// The numerator of a fraction over the declared multiplicative set: the
/// polynomial that vanishes on the relation variety wherever the fraction
/// does (away from the denominator locus).
pub fn clear_denominators(e: &RatExpr) -> SparsePoly {
    e.num().clone()
}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        if !self.den.is_empty() {
            let parts: Vec<String> = self
                .den
                .iter()
                .map(|(fac, e)| {
                    if *e == 1 {
                        format!("({fac})")
                    } else {
                        format!("({fac})^{e}")
                    }
                })
                .collect();
            write!(f, " / {}", parts.join(""))?;
        }
        Ok(())
    }
}
