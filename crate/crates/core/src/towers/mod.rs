//! The coupled relation systems defining the recursive towers and the
//! machinery to enumerate their rational points over F_{ell^k}.
//!
//! Two models are materialized. The free model keeps every Kummer root
//! choice independent, so identities can be checked on all branches. The
//! canonical model pins the root-of-unity choices via c_i = a_i*b_{i-1} and
//! b_i = a_i*(a_{i-1}-1)*c_{i-1} for i >= 2, which makes degree and
//! field-equality statistics well-defined pointwise.

mod enumerate;
mod point;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{Element, FieldCtx, SparsePoly, Var};
use crate::error::{Error, Result};

pub use enumerate::{
    count_points, enumerate_points, extend_point, parallel_fold, partition_seed_ranges,
    write_points_csv, BranchHistogram, CountReport, EnumOpts, PointStream, Projection,
    DEFAULT_LEVEL_CAP, DEFAULT_POINT_CAP,
};
pub use point::{DegReason, TowerPoint};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Free,
    Canonical,
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Model> {
        match s {
            "free" => Ok(Model::Free),
            "canonical" => Ok(Model::Canonical),
            other => Err(Error::UnsupportedModel(other.to_string())),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Free => write!(f, "free"),
            Model::Canonical => write!(f, "canonical"),
        }
    }
}

/// One defining relation, as an identifier; the polynomial form and a direct
/// evaluator are derived from it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Relation {
    /// a_i*(1 - a_{i+1}) - a_{i+1}^q*(a_i^q + a_i - 1)
    A(u32),
    /// a_i*b_i^(q-1) + (a_i^q + a_i - 1)
    B(u32),
    /// a_i*c_i^(q-1) - (a_i - 1)
    C(u32),
    /// c_i - a_i*b_{i-1} (canonical pinning, i >= 2)
    PinC(u32),
    /// b_i - a_i*(a_{i-1} - 1)*c_{i-1} (canonical pinning, i >= 2)
    PinB(u32),
}

impl Relation {
    pub fn poly(self, ctx: &FieldCtx) -> SparsePoly {
        let q = ctx.q() as u32;
        let one = SparsePoly::one(ctx);
        let var = |v: Var| SparsePoly::var(ctx, v);
        let artin = |i: u32| {
            SparsePoly::monomial(ctx, ctx.one(), &[(Var::a(i), q)])
                .add(&var(Var::a(i)))
                .sub(&one)
        };
        match self {
            Relation::A(i) => var(Var::a(i))
                .mul(&one.sub(&var(Var::a(i + 1))))
                .sub(&SparsePoly::monomial(ctx, ctx.one(), &[(Var::a(i + 1), q)]).mul(&artin(i))),
            Relation::B(i) => var(Var::a(i))
                .mul(&SparsePoly::monomial(ctx, ctx.one(), &[(Var::b(i), q - 1)]))
                .add(&artin(i)),
            Relation::C(i) => var(Var::a(i))
                .mul(&SparsePoly::monomial(ctx, ctx.one(), &[(Var::c(i), q - 1)]))
                .sub(&var(Var::a(i)))
                .add(&one),
            Relation::PinC(i) => var(Var::c(i)).sub(&var(Var::a(i)).mul(&var(Var::b(i - 1)))),
            Relation::PinB(i) => var(Var::b(i)).sub(
                &var(Var::a(i))
                    .mul(&var(Var::a(i - 1)).sub(&one))
                    .mul(&var(Var::c(i - 1))),
            ),
        }
    }

    /// Evaluate the relation at a point without building the polynomial.
    pub fn eval(self, ctx: &FieldCtx, pt: &TowerPoint) -> Element {
        let q = ctx.q();
        let artin = |a: Element| ctx.sub(ctx.add(ctx.pow(a, q), a), ctx.one());
        match self {
            Relation::A(i) => {
                let a = pt.a(i);
                let an = pt.a(i + 1);
                ctx.sub(
                    ctx.mul(a, ctx.sub(ctx.one(), an)),
                    ctx.mul(ctx.pow(an, q), artin(a)),
                )
            }
            Relation::B(i) => ctx.add(ctx.mul(pt.a(i), ctx.pow(pt.b(i), q - 1)), artin(pt.a(i))),
            Relation::C(i) => ctx.add(
                ctx.sub(ctx.mul(pt.a(i), ctx.pow(pt.c(i), q - 1)), pt.a(i)),
                ctx.one(),
            ),
            Relation::PinC(i) => ctx.sub(pt.c(i), ctx.mul(pt.a(i), pt.b(i - 1))),
            Relation::PinB(i) => ctx.sub(
                pt.b(i),
                ctx.mul(
                    ctx.mul(pt.a(i), ctx.sub(pt.a(i - 1), ctx.one())),
                    pt.c(i - 1),
                ),
            ),
        }
    }

    /// Highest variable index mentioned.
    pub fn max_index(self) -> u32 {
        match self {
            Relation::A(i) => i + 1,
            Relation::B(i) | Relation::C(i) | Relation::PinC(i) | Relation::PinB(i) => i,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::A(i) => write!(f, "REL-A({i})"),
            Relation::B(i) => write!(f, "REL-B({i})"),
            Relation::C(i) => write!(f, "REL-C({i})"),
            Relation::PinC(i) => write!(f, "PIN-C({i})"),
            Relation::PinB(i) => write!(f, "PIN-B({i})"),
        }
    }
}

/// The complete relation system for levels 1..=level under a model.
#[derive(Clone, Debug)]
pub struct TowerSpec {
    q: u64,
    model: Model,
    level: u32,
    relations: Vec<Relation>,
}

impl TowerSpec {
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn model(&self) -> Model {
        self.model
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// The relation list of the free model at the same level: canonical
    /// points must satisfy it as well (the pinning replaces REL-B/REL-C but
    /// never contradicts them).
    pub fn free_relations(&self) -> Vec<Relation> {
        relations(self.q, Model::Free, self.level).relations
    }
}

/// Build the full deterministic relation list for levels 1..=n.
pub fn relations(q: u64, model: Model, n: u32) -> TowerSpec {
    assert!(n >= 1, "level must be at least 1");
    let mut rels = vec![Relation::C(1), Relation::B(1)];
    for i in 2..=n {
        rels.push(Relation::A(i - 1));
        match model {
            Model::Free => {
                rels.push(Relation::C(i));
                rels.push(Relation::B(i));
            }
            Model::Canonical => {
                rels.push(Relation::PinC(i));
                rels.push(Relation::PinB(i));
            }
        }
    }
    TowerSpec {
        q,
        model,
        level: n,
        relations: rels,
    }
}
