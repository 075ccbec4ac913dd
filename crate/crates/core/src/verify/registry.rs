//! The identity registry: every displayed equality of the tower construction,
//! instantiated at concrete indices as formal fractions over the declared
//! denominator set.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{DenomFactor, FieldCtx, RatExpr, SerializedPoly, SparsePoly, Var};
use crate::error::{Error, Result};

/// Core registry identifiers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum IdentityId {
    /// c_n^(q-1) = a_n^(q-1) * b_{n-1}^(q-1)
    CProd,
    /// b_n^(q-1) = a_n^(q-1) * (a_{n-1}-1)^(q-1) * c_{n-1}^(q-1)
    BProd,
    /// (c_{n+1}^q - c_{n+1})^(q-1) + 1 = -c_n^(q^2-q) / (c_n^(q-1) - 1)^(q-1)
    CRec,
    /// (a_{n+1} * b_n)^q - a_{n+1} * b_n = -b_n
    ASRec,
    /// c_n^(q-1) = 1 - 1/a_n
    AInv,
    /// (c_n / (a_n * b_{n-1}))^(q-1) = 1
    Wz,
    /// (b_n / (a_n * (a_{n-1}-1) * c_{n-1}))^(q-1) = 1
    Wx,
}

pub const ALL_IDENTITIES: [IdentityId; 7] = [
    IdentityId::CProd,
    IdentityId::BProd,
    IdentityId::CRec,
    IdentityId::ASRec,
    IdentityId::AInv,
    IdentityId::Wz,
    IdentityId::Wx,
];

impl IdentityId {
    pub fn name(self) -> &'static str {
        match self {
            IdentityId::CProd => "ID-CPROD",
            IdentityId::BProd => "ID-BPROD",
            IdentityId::CRec => "ID-CREC",
            IdentityId::ASRec => "ID-ASREC",
            IdentityId::AInv => "ID-AINV",
            IdentityId::Wz => "WZ",
            IdentityId::Wx => "WX",
        }
    }

    /// Least index at which the identity can be instantiated.
    pub fn min_index(self) -> u32 {
        match self {
            IdentityId::CProd | IdentityId::BProd | IdentityId::Wz | IdentityId::Wx => 2,
            IdentityId::CRec | IdentityId::ASRec | IdentityId::AInv => 1,
        }
    }

    /// Highest variable index occurring in the instantiation at n.
    pub fn max_var_index(self, n: u32) -> u32 {
        match self {
            IdentityId::CRec | IdentityId::ASRec => n + 1,
            _ => n,
        }
    }

    pub fn index_pattern(self) -> &'static str {
        match self {
            IdentityId::CProd | IdentityId::Wz => "n >= 2, relating levels n-1 and n",
            IdentityId::BProd | IdentityId::Wx => "n >= 2, relating levels n-1 and n",
            IdentityId::CRec | IdentityId::ASRec => "n >= 1, relating levels n and n+1",
            IdentityId::AInv => "n >= 1, within level n",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            IdentityId::CProd => "c_n^(q-1) = a_n^(q-1) * b_(n-1)^(q-1)",
            IdentityId::BProd => "b_n^(q-1) = a_n^(q-1) * (a_(n-1) - 1)^(q-1) * c_(n-1)^(q-1)",
            IdentityId::CRec => {
                "(c_(n+1)^q - c_(n+1))^(q-1) + 1 = -c_n^(q^2-q) / (c_n^(q-1) - 1)^(q-1)"
            }
            IdentityId::ASRec => "(a_(n+1)*b_n)^q - a_(n+1)*b_n = -b_n",
            IdentityId::AInv => "c_n^(q-1) = 1 - 1/a_n",
            IdentityId::Wz => "(c_n / (a_n * b_(n-1)))^(q-1) = 1",
            IdentityId::Wx => "(b_n / (a_n * (a_(n-1) - 1) * c_(n-1)))^(q-1) = 1",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<IdentityId> {
        ALL_IDENTITIES
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// A registry identity instantiated at a concrete index: an expression
/// asserted to vanish identically on the tower.
#[derive(Clone)]
pub struct IdentitySpec {
    pub id: IdentityId,
    pub index: u32,
    pub statement: String,
    pub expression: RatExpr,
}

impl IdentitySpec {
    pub fn max_var_index(&self) -> u32 {
        self.id.max_var_index(self.index)
    }

    /// Negative control: the same expression with one sign flipped. The
    /// graded-leading term's coefficient is negated; in characteristic 2,
    /// where negation is the identity, the term is dropped instead so the
    /// control is still a genuinely different expression.
    pub fn sign_corrupted(&self) -> IdentitySpec {
        let num = self.expression.num();
        let ctx = num.ctx().clone();
        let (mono, coeff) = num
            .terms()
            .next()
            .map(|(m, c)| (m.clone(), c))
            .expect("nonzero expression");
        let vars: Vec<(Var, u32)> = num
            .vars()
            .iter()
            .zip(&mono.0)
            .filter(|&(_, &e)| e > 0)
            .map(|(&v, &e)| (v, e))
            .collect();
        let lead = SparsePoly::monomial(&ctx, coeff, &vars);
        let scale = if ctx.p() == 2 { 1 } else { 2 };
        let corrupted = num.sub(&lead.mul_scalar(ctx.from_int(scale)));
        let den: Vec<(DenomFactor, u32)> = self.expression.den_factors().collect();
        IdentitySpec {
            id: self.id,
            index: self.index,
            statement: format!("{} [sign-corrupted control]", self.statement),
            expression: RatExpr::over_factors(corrupted, &den),
        }
    }
}

impl fmt::Debug for IdentitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}): {:?}", self.id, self.index, self.expression)
    }
}

fn pow_var(ctx: &FieldCtx, v: Var, e: u32) -> SparsePoly {
    SparsePoly::monomial(ctx, ctx.one(), &[(v, e)])
}

/// Instantiate one identity at index n over the given context.
pub fn instantiate(id: IdentityId, ctx: &FieldCtx, n: u32) -> Result<IdentitySpec> {
    if n < id.min_index() {
        return Err(Error::IndexTooSmall {
            id: id.name().to_string(),
            min: id.min_index(),
            got: n,
        });
    }
    let q = ctx.q() as u32;
    let r = q - 1;
    let one = SparsePoly::one(ctx);
    let expression =
        match id {
            IdentityId::CProd => {
                // c_n^(q-1) - a_n^(q-1) b_{n-1}^(q-1)
                let num = pow_var(ctx, Var::c(n), r)
                    .sub(&pow_var(ctx, Var::a(n), r).mul(&pow_var(ctx, Var::b(n - 1), r)));
                RatExpr::from_poly(num)
            }
            IdentityId::BProd => {
                // b_n^(q-1) - a_n^(q-1) (a_{n-1}-1)^(q-1) c_{n-1}^(q-1)
                let am1 = SparsePoly::var(ctx, Var::a(n - 1)).sub(&one).pow(r);
                let num = pow_var(ctx, Var::b(n), r).sub(
                    &pow_var(ctx, Var::a(n), r)
                        .mul(&am1)
                        .mul(&pow_var(ctx, Var::c(n - 1), r)),
                );
                RatExpr::from_poly(num)
            }
            IdentityId::CRec => {
                // (c_{n+1}^q - c_{n+1})^(q-1) + 1 + c_n^(q(q-1)) / (c_n^(q-1)-1)^(q-1)
                let cs = pow_var(ctx, Var::c(n + 1), q).sub(&SparsePoly::var(ctx, Var::c(n + 1)));
                let lhs = RatExpr::from_poly(cs.pow(r).add(&one));
                let rhs = RatExpr::over_factors(
                    pow_var(ctx, Var::c(n), q * r),
                    &[(DenomFactor::KummerC(n), r)],
                );
                lhs.add(&rhs)
            }
            IdentityId::ASRec => {
                // (a_{n+1} b_n)^q - a_{n+1} b_n + b_n
                let num =
                    SparsePoly::monomial(ctx, ctx.one(), &[(Var::a(n + 1), q), (Var::b(n), q)])
                        .sub(&SparsePoly::monomial(
                            ctx,
                            ctx.one(),
                            &[(Var::a(n + 1), 1), (Var::b(n), 1)],
                        ))
                        .add(&SparsePoly::var(ctx, Var::b(n)));
                RatExpr::from_poly(num)
            }
            IdentityId::AInv => {
                // a_n c_n^(q-1) - a_n + 1
                let num = SparsePoly::var(ctx, Var::a(n))
                    .mul(&pow_var(ctx, Var::c(n), r))
                    .sub(&SparsePoly::var(ctx, Var::a(n)))
                    .add(&one);
                RatExpr::from_poly(num)
            }
            IdentityId::Wz => {
                // (c_n/(a_n b_{n-1}))^(q-1) - 1, cleared of the b-power:
                // (c_n^(q-1) - a_n^(q-1) b_{n-1}^(q-1)) / a_n^(q-1)
                let num = pow_var(ctx, Var::c(n), r)
                    .sub(&pow_var(ctx, Var::a(n), r).mul(&pow_var(ctx, Var::b(n - 1), r)));
                RatExpr::over_factors(num, &[(DenomFactor::A(n), r)])
            }
            IdentityId::Wx => {
                // (b_n/(a_n (a_{n-1}-1) c_{n-1}))^(q-1) - 1, cleared of the
                // c-power: num / (a_n^(q-1) (a_{n-1}-1)^(q-1))
                let am1 = SparsePoly::var(ctx, Var::a(n - 1)).sub(&one).pow(r);
                let num = pow_var(ctx, Var::b(n), r).sub(
                    &pow_var(ctx, Var::a(n), r)
                        .mul(&am1)
                        .mul(&pow_var(ctx, Var::c(n - 1), r)),
                );
                RatExpr::over_factors(
                    num,
                    &[(DenomFactor::A(n), r), (DenomFactor::AMinusOne(n - 1), r)],
                )
            }
        };
    Ok(IdentitySpec {
        id,
        index: n,
        statement: id.statement().to_string(),
        expression,
    })
}

/// The full core registry instantiated at index n (all seven identities).
pub fn builtin_identities(ctx: &FieldCtx, n: u32) -> Result<Vec<IdentitySpec>> {
    ALL_IDENTITIES
        .into_iter()
        .map(|id| instantiate(id, ctx, n))
        .collect()
}

/// Every instantiation of every registry identity whose variables fit within
/// the given level.
pub fn identities_within_level(ctx: &FieldCtx, level: u32) -> Vec<IdentitySpec> {
    let mut out = Vec::new();
    for id in ALL_IDENTITIES {
        let mut n = id.min_index();
        while id.max_var_index(n) <= level {
            out.push(instantiate(id, ctx, n).expect("index validated"));
            n += 1;
        }
    }
    out
}

/// One documented catalog row for the JSON export.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub statement: String,
    pub index_pattern: String,
    pub instantiated_at: u32,
    pub numerator: SerializedPoly,
    pub denominator_factors: Vec<(String, u32)>,
}

/// Export the registry at index n as a documented catalog.
pub fn catalog(ctx: &FieldCtx, n: u32) -> Result<Vec<CatalogEntry>> {
    Ok(builtin_identities(ctx, n)?
        .into_iter()
        .map(|spec| CatalogEntry {
            id: spec.id.name().to_string(),
            statement: spec.statement.clone(),
            index_pattern: spec.id.index_pattern().to_string(),
            instantiated_at: spec.index,
            numerator: spec.expression.num().serialized(),
            denominator_factors: spec
                .expression
                .den_factors()
                .map(|(f, e)| (f.to_string(), e))
                .collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_size_is_seven() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        assert_eq!(builtin_identities(&ctx, 2).unwrap().len(), 7);
    }

    #[test]
    fn cprod_at_2_matches_hand_form() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        let spec = instantiate(IdentityId::CProd, &ctx, 2).unwrap();
        let q = ctx.q() as u32;
        let expect = SparsePoly::monomial(&ctx, ctx.one(), &[(Var::c(2), q - 1)]).sub(
            &SparsePoly::monomial(&ctx, ctx.one(), &[(Var::a(2), q - 1), (Var::b(1), q - 1)]),
        );
        assert_eq!(spec.expression.num(), &expect);
    }

    #[test]
    fn asrec_at_1_matches_hand_form() {
        // (a2 b1)^q - a2 b1 + b1
        let ctx = FieldCtx::new(2, 1, 1).unwrap();
        let spec = instantiate(IdentityId::ASRec, &ctx, 1).unwrap();
        let expect = SparsePoly::monomial(&ctx, ctx.one(), &[(Var::a(2), 2), (Var::b(1), 2)])
            .sub(&SparsePoly::monomial(
                &ctx,
                ctx.one(),
                &[(Var::a(2), 1), (Var::b(1), 1)],
            ))
            .add(&SparsePoly::var(&ctx, Var::b(1)));
        assert_eq!(spec.expression.num(), &expect);
    }

    #[test]
    fn index_too_small_is_rejected() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        assert!(matches!(
            instantiate(IdentityId::CProd, &ctx, 1),
            Err(Error::IndexTooSmall { .. })
        ));
        assert!(builtin_identities(&ctx, 1).is_err());
    }

    #[test]
    fn identity_name_round_trip() {
        for id in ALL_IDENTITIES {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!(matches!(
            "bogus-id".parse::<IdentityId>(),
            Err(Error::UnknownIdentity(_))
        ));
    }

    #[test]
    fn corrupted_expression_differs() {
        for (p, m) in [(2u32, 1u32), (3, 1)] {
            let ctx = FieldCtx::new(p, m, 1).unwrap();
            let spec = instantiate(IdentityId::CProd, &ctx, 2).unwrap();
            let bad = spec.sign_corrupted();
            assert_ne!(spec.expression.num(), bad.expression.num());
        }
    }

    #[test]
    fn catalog_has_statements_and_shapes() {
        let ctx = FieldCtx::new(3, 1, 1).unwrap();
        let cat = catalog(&ctx, 2).unwrap();
        assert_eq!(cat.len(), 7);
        let crec = cat.iter().find(|e| e.id == "ID-CREC").unwrap();
        assert_eq!(
            crec.denominator_factors,
            vec![("c2^(q-1)-1".to_string(), 2)]
        );
        assert!(!crec.numerator.terms.is_empty());
    }
}
