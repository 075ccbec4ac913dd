//! Exact sparse multivariate polynomials in the indexed variables a_i, b_i,
//! c_i, with coefficients in a [`FieldCtx`](super::FieldCtx).
//!
//! Terms are kept in a canonical graded-lexicographic order (variables sorted
//! by class then index, total degree first), zero coefficients are never
//! stored, and the variable list always equals the set of variables actually
//! occurring, so structural equality is mathematical equality over a fixed
//! context.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::field::{Element, FieldCtx};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum VarClass {
    A,
    B,
    C,
}

impl VarClass {
    pub fn letter(self) -> char {
        match self {
            VarClass::A => 'a',
            VarClass::B => 'b',
            VarClass::C => 'c',
        }
    }
}

/// An indexed tower variable: a_i, b_i or c_i (i >= 1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Var {
    pub class: VarClass,
    pub index: u32,
}

impl Var {
    pub fn a(index: u32) -> Var {
        Var {
            class: VarClass::A,
            index,
        }
    }
    pub fn b(index: u32) -> Var {
        Var {
            class: VarClass::B,
            index,
        }
    }
    pub fn c(index: u32) -> Var {
        Var {
            class: VarClass::C,
            index,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.class.letter(), self.index)
    }
}

/// Exponent vector aligned with a sorted variable list. Ordered by total
/// degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

type TermList = Vec<(Monomial, Element)>;

#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    ctx: FieldCtx,
    vars: Vec<Var>,
    terms: BTreeMap<Monomial, Element>,
}

impl SparsePoly {
    pub fn zero(ctx: &FieldCtx) -> SparsePoly {
        SparsePoly {
            ctx: ctx.clone(),
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &FieldCtx, value: Element) -> SparsePoly {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial(Vec::new()), value);
        }
        SparsePoly {
            ctx: ctx.clone(),
            vars: Vec::new(),
            terms,
        }
    }

    pub fn one(ctx: &FieldCtx) -> SparsePoly {
        Self::constant(ctx, ctx.one())
    }

    pub fn from_int(ctx: &FieldCtx, i: i64) -> SparsePoly {
        Self::constant(ctx, ctx.from_int(i))
    }

    pub fn var(ctx: &FieldCtx, v: Var) -> SparsePoly {
        Self::monomial(ctx, ctx.one(), &[(v, 1)])
    }

    /// coeff * prod v^e over the given (variable, exponent) pairs.
    pub fn monomial(ctx: &FieldCtx, coeff: Element, powers: &[(Var, u32)]) -> SparsePoly {
        if coeff.is_zero() {
            return Self::zero(ctx);
        }
        let mut pairs: Vec<(Var, u32)> = powers.iter().copied().filter(|&(_, e)| e > 0).collect();
        pairs.sort();
        let mut vars = Vec::new();
        let mut exps = Vec::new();
        for (v, e) in pairs {
            if vars.last() == Some(&v) {
                let last = exps.last_mut().unwrap();
                *last += e;
            } else {
                vars.push(v);
                exps.push(e);
            }
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), coeff);
        SparsePoly {
            ctx: ctx.clone(),
            vars,
            terms,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order, leading (highest) first.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Element)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    /// Drop variables that no longer occur and re-key the exponent vectors.
    fn prune(mut self) -> SparsePoly {
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let vars: Vec<Var> = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(&v, _)| v)
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(m, c)| {
                let exps =
                    m.0.iter()
                        .zip(&used)
                        .filter(|(_, &u)| u)
                        .map(|(&e, _)| e)
                        .collect();
                (Monomial(exps), c)
            })
            .collect();
        SparsePoly {
            ctx: self.ctx,
            vars,
            terms,
        }
    }

    /// Remap both polynomials onto the union of their variable lists.
    fn aligned(&self, other: &SparsePoly) -> (Vec<Var>, TermList, TermList) {
        let mut vars: Vec<Var> = self.vars.iter().chain(other.vars.iter()).copied().collect();
        vars.sort();
        vars.dedup();
        let remap = |p: &SparsePoly, vars: &[Var]| -> TermList {
            let pos: Vec<usize> = p
                .vars
                .iter()
                .map(|v| vars.binary_search(v).unwrap())
                .collect();
            p.terms
                .iter()
                .map(|(m, &c)| {
                    let mut exps = vec![0u32; vars.len()];
                    for (i, &e) in m.0.iter().enumerate() {
                        exps[pos[i]] = e;
                    }
                    (Monomial(exps), c)
                })
                .collect()
        };
        let lhs = remap(self, &vars);
        let rhs = remap(other, &vars);
        (vars, lhs, rhs)
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let (vars, lhs, rhs) = self.aligned(other);
        let mut terms: BTreeMap<Monomial, Element> = lhs.into_iter().collect();
        for (m, c) in rhs {
            match terms.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = self.ctx.add(*e.get(), c);
                    if s.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
            }
        }
        SparsePoly {
            ctx: self.ctx.clone(),
            vars,
            terms,
        }
        .prune()
    }

    pub fn neg(&self) -> SparsePoly {
        SparsePoly {
            ctx: self.ctx.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), self.ctx.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ctx);
        }
        let (vars, lhs, rhs) = self.aligned(other);
        let mut terms: BTreeMap<Monomial, Element> = BTreeMap::new();
        for (ml, cl) in &lhs {
            for (mr, cr) in &rhs {
                let exps: Vec<u32> = ml.0.iter().zip(&mr.0).map(|(&a, &b)| a + b).collect();
                let prod = self.ctx.mul(*cl, *cr);
                if prod.is_zero() {
                    continue;
                }
                match terms.entry(Monomial(exps)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = self.ctx.add(*e.get(), prod);
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                }
            }
        }
        SparsePoly {
            ctx: self.ctx.clone(),
            vars,
            terms,
        }
        .prune()
    }

    pub fn mul_scalar(&self, c: Element) -> SparsePoly {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        SparsePoly {
            ctx: self.ctx.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, &t)| (m.clone(), self.ctx.mul(t, c)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        match self.vars.binary_search(&v) {
            Err(_) => 0,
            Ok(pos) => self.terms.keys().map(|m| m.0[pos]).max().unwrap_or(0),
        }
    }

    /// View as a univariate polynomial in `v`: coefficient polynomials by
    /// power of `v`, in the remaining variables.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<u32, SparsePoly> {
        let pos = match self.vars.binary_search(&v) {
            Ok(p) => p,
            Err(_) => {
                let mut out = BTreeMap::new();
                if !self.is_zero() {
                    out.insert(0, self.clone());
                }
                return out;
            }
        };
        let mut out: BTreeMap<u32, SparsePoly> = BTreeMap::new();
        for (m, &c) in &self.terms {
            let pow = m.0[pos];
            let mut exps = m.0.clone();
            exps[pos] = 0;
            let part = out
                .entry(pow)
                .or_insert_with(|| SparsePoly::zero(&self.ctx));
            let mono = SparsePoly {
                ctx: self.ctx.clone(),
                vars: self.vars.clone(),
                terms: BTreeMap::from([(Monomial(exps), c)]),
            }
            .prune();
            *part = part.add(&mono);
        }
        out
    }

    pub fn leading_coeff_in(&self, v: Var) -> SparsePoly {
        let d = self.degree_in(v);
        self.coefficients_in(v)
            .remove(&d)
            .unwrap_or_else(|| Self::zero(&self.ctx))
    }

    /// Evaluate at a full assignment of the occurring variables.
    pub fn evaluate<F>(&self, assign: F) -> Result<Element>
    where
        F: Fn(Var) -> Option<Element>,
    {
        let values: Vec<Element> = self
            .vars
            .iter()
            .map(|&v| assign(v).ok_or(Error::MissingCoordinate(v)))
            .collect::<Result<_>>()?;
        let mut acc = self.ctx.zero();
        for (m, &c) in &self.terms {
            let mut t = c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = self.ctx.mul(t, self.ctx.pow(values[i], e as u64));
                }
            }
            acc = self.ctx.add(acc, t);
        }
        Ok(acc)
    }

    /// Catalog form: list of (exponent sequence, nested coefficient digits)
    /// pairs, leading term first, plus the variable legend.
    pub fn serialized(&self) -> SerializedPoly {
        SerializedPoly {
            vars: self.vars.iter().map(|v| v.to_string()).collect(),
            terms: self
                .terms()
                .map(|(m, c)| (m.0.clone(), self.ctx.coeffs(c)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SerializedPoly {
    pub vars: Vec<String>,
    pub terms: Vec<(Vec<u32>, Vec<Vec<u32>>)>,
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|&(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            self.vars[i].to_string()
                        } else {
                            format!("{}^{}", self.vars[i], e)
                        }
                    })
                    .collect();
            if mono.is_empty() {
                write!(f, "{}", c.code())?;
            } else if c == self.ctx.one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", c.code(), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Result of fraction-free Euclidean reduction: multiplier * dividend =
/// quotient * divisor + remainder, with deg_var(remainder) < deg_var(divisor).
///
/// The multiplier is a power of the divisor's leading coefficient in the
/// eliminated variable, so the conceptual quotient in K(other vars)[var] is
/// quotient / multiplier.
#[derive(Clone, Debug)]
pub struct EuclidReduction {
    pub quotient: SparsePoly,
    pub remainder: SparsePoly,
    pub multiplier: SparsePoly,
    pub steps: u32,
}

/// Divide `p` by `r` as univariate polynomials in `var` over the fraction
/// field of the remaining variables, without forming fractions.
pub fn euclid_reduce(p: &SparsePoly, r: &SparsePoly, var: Var) -> Result<EuclidReduction> {
    let dr = r.degree_in(var);
    if dr == 0 {
        return Err(Error::VarAbsentFromDivisor(var));
    }
    let lc_r = r.leading_coeff_in(var);
    debug_assert!(!lc_r.is_zero());
    let ctx = p.ctx().clone();
    let mut rem = p.clone();
    let mut quot = SparsePoly::zero(&ctx);
    let mut mult = SparsePoly::one(&ctx);
    let mut steps = 0u32;
    while !rem.is_zero() && rem.degree_in(var) >= dr && rem.degree_in(var) > 0 {
        let dp = rem.degree_in(var);
        if dp < dr {
            break;
        }
        let lc_p = rem.leading_coeff_in(var);
        let shift = SparsePoly::monomial(&ctx, ctx.one(), &[(var, dp - dr)]);
        // rem <- lc_r * rem - lc_p * var^(dp-dr) * r
        rem = lc_r.mul(&rem).sub(&lc_p.mul(&shift).mul(r));
        quot = lc_r.mul(&quot).add(&lc_p.mul(&shift));
        mult = lc_r.mul(&mult);
        steps += 1;
        debug_assert!(rem.degree_in(var) < dp || rem.is_zero());
    }
    Ok(EuclidReduction {
        quotient: quot,
        remainder: rem,
        multiplier: mult,
        steps,
    })
}
