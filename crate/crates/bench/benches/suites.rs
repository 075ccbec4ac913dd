use criterion::{black_box, criterion_group, criterion_main, Criterion};

use towerlab_core::algebra::FieldCtx;
use towerlab_core::towers::{count_points, relations, EnumOpts, Model};
use towerlab_core::verify::{
    builtin_identities, fiber_histogram, partition_compare, prove_identity, witness_suite, GenSel,
    TowerLetter,
};

fn field_construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("field_construction");
    for (p, m, k) in [(2u32, 1u32, 2u32), (3, 1, 2), (2, 3, 1)] {
        g.bench_function(format!("p{p}_m{m}_k{k}"), |b| {
            b.iter(|| FieldCtx::new(black_box(p), black_box(m), black_box(k)).unwrap())
        });
    }
    g.finish();
}

fn field_arithmetic(c: &mut Criterion) {
    let ctx = FieldCtx::new(3, 1, 2).unwrap();
    let xs: Vec<_> = ctx.enumerate().skip(1).collect();
    c.bench_function("mul_inv_sweep_f729", |b| {
        b.iter(|| {
            let mut acc = ctx.one();
            for &x in &xs {
                acc = ctx.mul(acc, x);
                acc = ctx.add(acc, ctx.inv(x).unwrap());
            }
            black_box(acc)
        })
    });
}

fn solvers(c: &mut Criterion) {
    let ctx = FieldCtx::new(3, 1, 2).unwrap();
    let v = ctx.element_from_code(5).unwrap();
    let w = ctx.one();
    c.bench_function("additive_affine_solve_f729", |b| {
        b.iter(|| {
            ctx.additive_affine_solve(black_box(v), black_box(w), 3)
                .unwrap()
        })
    });
    let rhs = ctx.element_from_code(7).unwrap();
    c.bench_function("kummer_solve_f729", |b| {
        b.iter(|| ctx.kummer_solve(2, black_box(rhs)).unwrap())
    });
}

fn symbolic_proofs(c: &mut Criterion) {
    let mut g = c.benchmark_group("prove_identity");
    for (p, m) in [(2u32, 1u32), (3, 1), (2, 3)] {
        let ctx = FieldCtx::new(p, m, 1).unwrap();
        let specs = builtin_identities(&ctx, 3).unwrap();
        g.bench_function(format!("registry_q{}", ctx.q()), |b| {
            b.iter(|| {
                for spec in &specs {
                    black_box(prove_identity(spec).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let ctx = FieldCtx::new(3, 1, 2).unwrap();
    let free = relations(3, Model::Free, 3);
    c.bench_function("count_points_free_n3_f729", |b| {
        b.iter(|| count_points(&ctx, &free, &EnumOpts::default(), 1).unwrap())
    });
}

fn suites(c: &mut Criterion) {
    let ctx = FieldCtx::new(3, 1, 2).unwrap();
    c.bench_function("fiber_histogram_h_step", |b| {
        b.iter(|| fiber_histogram(&ctx, TowerLetter::H, 2, &EnumOpts::default(), 1).unwrap())
    });
    c.bench_function("partition_compare_h3_c3", |b| {
        b.iter(|| {
            partition_compare(
                &ctx,
                3,
                &GenSel::tower(TowerLetter::H, 3),
                &GenSel::tower(TowerLetter::C, 3),
                &EnumOpts::default(),
            )
            .unwrap()
        })
    });
    c.bench_function("witness_suite_n3", |b| {
        b.iter(|| witness_suite(&ctx, 3, &EnumOpts::default(), 1).unwrap())
    });
}

criterion_group!(
    benches,
    field_construction,
    field_arithmetic,
    solvers,
    symbolic_proofs,
    enumeration,
    suites
);
criterion_main!(benches);
