//! Property tests for the exact algebra kernel.

use proptest::prelude::*;

use towerlab_core::algebra::{euclid_reduce, FieldCtx, RatExpr, SparsePoly, Var};
use towerlab_core::verify::{instantiate, prove_identity, IdentityId, Verdict, ALL_IDENTITIES};

fn ctx9() -> FieldCtx {
    FieldCtx::new(3, 1, 1).unwrap()
}

const VARS: [Var; 4] = [
    Var {
        class: towerlab_core::VarClass::A,
        index: 1,
    },
    Var {
        class: towerlab_core::VarClass::A,
        index: 2,
    },
    Var {
        class: towerlab_core::VarClass::B,
        index: 1,
    },
    Var {
        class: towerlab_core::VarClass::C,
        index: 1,
    },
];

prop_compose! {
    fn arb_term()(coeff in 0u64..27, exps in proptest::collection::vec(0u32..4, 4)) -> (u64, Vec<u32>) {
        (coeff, exps)
    }
}

prop_compose! {
    fn arb_poly()(terms in proptest::collection::vec(arb_term(), 0..5)) -> Vec<(u64, Vec<u32>)> {
        terms
    }
}

fn build(ctx: &FieldCtx, spec: &[(u64, Vec<u32>)]) -> SparsePoly {
    let mut acc = SparsePoly::zero(ctx);
    for (coeff, exps) in spec {
        let c = ctx.element_from_code(*coeff).unwrap();
        let powers: Vec<(Var, u32)> = VARS.iter().copied().zip(exps.iter().copied()).collect();
        acc = acc.add(&SparsePoly::monomial(ctx, c, &powers));
    }
    acc
}

proptest! {
    #[test]
    fn poly_ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        let ctx = ctx9();
        let (pa, pb, pc) = (build(&ctx, &a), build(&ctx, &b), build(&ctx, &c));
        prop_assert_eq!(pa.add(&pb), pb.add(&pa));
        prop_assert_eq!(pa.mul(&pb), pb.mul(&pa));
        prop_assert_eq!(pa.add(&pb).add(&pc), pa.add(&pb.add(&pc)));
        prop_assert_eq!(pa.mul(&pb).mul(&pc), pa.mul(&pb.mul(&pc)));
        prop_assert_eq!(pa.mul(&pb.add(&pc)), pa.mul(&pb).add(&pa.mul(&pc)));
        prop_assert_eq!(pa.sub(&pa), SparsePoly::zero(&ctx));
    }

    #[test]
    fn euclid_reduce_reexpands(p in arb_poly(), r in arb_poly()) {
        let ctx = ctx9();
        let dividend = build(&ctx, &p);
        let var = Var::a(2);
        // force the divisor to mention a2
        let divisor = build(&ctx, &r).mul(&SparsePoly::var(&ctx, var)).add(&SparsePoly::one(&ctx));
        prop_assume!(divisor.degree_in(var) > 0);
        let red = euclid_reduce(&dividend, &divisor, var).unwrap();
        prop_assert_eq!(
            red.multiplier.mul(&dividend),
            red.quotient.mul(&divisor).add(&red.remainder)
        );
        prop_assert!(red.remainder.is_zero() || red.remainder.degree_in(var) < divisor.degree_in(var));
    }

    #[test]
    fn proved_identities_absorb_monomial_multipliers(
        id_pick in 0usize..7,
        a_exp in 0u32..3,
        b_exp in 0u32..3,
        c_exp in 0u32..3,
    ) {
        let ctx = ctx9();
        let id = ALL_IDENTITIES[id_pick];
        let spec = instantiate(id, &ctx, id.min_index().max(2)).unwrap();
        let monomial = SparsePoly::monomial(
            &ctx,
            ctx.one(),
            &[(Var::a(1), a_exp), (Var::b(1), b_exp), (Var::c(1), c_exp)],
        );
        let scaled = towerlab_core::verify::IdentitySpec {
            id: spec.id,
            index: spec.index,
            statement: spec.statement.clone(),
            expression: RatExpr::from_poly(spec.expression.num().mul(&monomial)),
        };
        let out = prove_identity(&scaled).unwrap();
        prop_assert_eq!(out.trace.verdict, Verdict::Proved);
    }
}

#[test]
fn enumeration_order_is_stable_across_contexts() {
    let a = FieldCtx::new(3, 1, 2).unwrap();
    let b = FieldCtx::new(3, 1, 2).unwrap();
    let codes_a: Vec<u64> = a.enumerate().map(|e| e.code()).collect();
    let codes_b: Vec<u64> = b.enumerate().map(|e| e.code()).collect();
    assert_eq!(codes_a, codes_b);
    assert_eq!(a.inner_modulus(), b.inner_modulus());
    assert_eq!(a.outer_modulus(), b.outer_modulus());
}

#[test]
fn kummer_sets_are_root_of_unity_closed() {
    for (p, m, k) in [(2u32, 1u32, 1u32), (3, 1, 1), (3, 1, 2)] {
        let ctx = FieldCtx::new(p, m, k).unwrap();
        let r = ctx.q() - 1;
        if r == 0 {
            continue;
        }
        let mu = ctx.roots_of_unity(r).unwrap();
        for rhs in ctx.enumerate() {
            let sols = ctx.kummer_solve(r, rhs).unwrap();
            if !rhs.is_zero() {
                assert!(sols.is_empty() || sols.len() as u64 == r);
            }
            for &s in &sols {
                for &z in &mu {
                    assert!(sols.contains(&ctx.mul(s, z)));
                }
            }
        }
    }
}

#[test]
fn ainv_exists_at_index_1_but_cprod_does_not() {
    let ctx = ctx9();
    assert!(instantiate(IdentityId::AInv, &ctx, 1).is_ok());
    assert!(instantiate(IdentityId::CProd, &ctx, 1).is_err());
}
