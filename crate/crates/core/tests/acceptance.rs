//! Acceptance suite: one test per criterion, each ending with a PASS line.
//!
//! Everything here is exact; there are no tolerances anywhere. Runtime
//! budgets are asserted where the criterion carries one.

use std::collections::BTreeMap;
use std::time::Instant;

use towerlab_core::algebra::{Element, FieldCtx};
use towerlab_core::report::{Rational, Report, RunConfig};
use towerlab_core::towers::{count_points, relations, EnumOpts, Model};
use towerlab_core::verify::{
    degree_report, fiber_histogram, instantiate, partition_compare, prove_identity, remark_suite,
    test_identity_points, witness_suite, EqVerdict, GenSel, IdentityId, RefutationVerdict,
    TowerLetter, Verdict, ALL_IDENTITIES,
};

fn q_params(q: u64) -> (u32, u32) {
    match q {
        2 => (2, 1),
        3 => (3, 1),
        4 => (2, 2),
        5 => (5, 1),
        8 => (2, 3),
        _ => panic!("unsupported q"),
    }
}

#[test]
fn criterion_1_symbolic_proof_suite() {
    let start = Instant::now();
    for q in [2u64, 3, 4, 5, 8] {
        let (p, m) = q_params(q);
        let ctx = FieldCtx::new(p, m, 1).unwrap();
        for n in [2u32, 3] {
            for id in ALL_IDENTITIES {
                let spec = instantiate(id, &ctx, n).unwrap();
                let out = prove_identity(&spec).unwrap();
                assert_eq!(
                    out.trace.verdict,
                    Verdict::Proved,
                    "{id} at n={n}, q={q}: remainder {:?}",
                    out.remainder
                );
                assert!(out.remainder.is_zero(), "{id} at n={n}, q={q}");
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "symbolic suite took {secs:.1}s (budget 60s)");
    println!("ACCEPTANCE 1 symbolic-proof-suite: PASS ({secs:.2}s, 70 proofs)");
}

#[test]
fn criterion_2_negative_control() {
    for q in [2u64, 3] {
        let (p, m) = q_params(q);
        let ctx = FieldCtx::new(p, m, 1).unwrap();
        let corrupted = instantiate(IdentityId::CProd, &ctx, 2)
            .unwrap()
            .sign_corrupted();
        let out = prove_identity(&corrupted).unwrap();
        assert_eq!(out.trace.verdict, Verdict::Failed, "q={q}");
        assert!(!out.remainder.is_zero(), "q={q}");
        let rep = test_identity_points(&corrupted, &ctx, 2, Model::Free, &EnumOpts::default(), 1)
            .unwrap();
        assert!(rep.failures >= 1, "q={q}: no failing point");
        assert!(rep.first_failure.is_some(), "q={q}");
    }
    println!("ACCEPTANCE 2 negative-control: PASS");
}

#[test]
fn criterion_3_oracle_agreement() {
    let start = Instant::now();
    for q in [2u64, 3] {
        let (p, m) = q_params(q);
        for k in [1u32, 2] {
            let ctx = FieldCtx::new(p, m, k).unwrap();
            for id in ALL_IDENTITIES {
                let mut n = id.min_index();
                while id.max_var_index(n) <= 3 {
                    let spec = instantiate(id, &ctx, n).unwrap();
                    let proved = prove_identity(&spec).unwrap().trace.verdict == Verdict::Proved;
                    let min_level = id.max_var_index(n);
                    for level in min_level..=3 {
                        let rep = test_identity_points(
                            &spec,
                            &ctx,
                            level,
                            Model::Free,
                            &EnumOpts::default(),
                            2,
                        )
                        .unwrap();
                        assert_eq!(
                            proved,
                            rep.failures == 0,
                            "{id}(n={n}) q={q} k={k} level={level}: verdicts disagree"
                        );
                        assert_eq!(
                            rep.failures, 0,
                            "{id}(n={n}) q={q} k={k} level={level}: {} violations",
                            rep.failures
                        );
                        // the Bezout flag certifies at the identity's own
                        // level, where every curve point is in play
                        if id != IdentityId::AInv && k == 2 && level == min_level {
                            let bz = rep.bezout.unwrap_or_else(|| {
                                panic!("{id}(n={n}) should reduce to a bivariate form")
                            });
                            assert!(
                                bz.certified,
                                "{id}(n={n}) q={q} k=2: margin {} of bound {}",
                                bz.margin, bz.degree_bound
                            );
                        }
                    }
                    n += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(
        secs < 300.0,
        "oracle agreement took {secs:.1}s (budget 300s)"
    );
    println!("ACCEPTANCE 3 oracle-agreement: PASS ({secs:.2}s)");
}

#[test]
fn criterion_4_degrees() {
    let opts = EnumOpts::default();
    // q = 3: C, H, A steps at n = 2 all have modal fiber 3 = q
    for letter in [TowerLetter::C, TowerLetter::H, TowerLetter::A] {
        let rep = degree_report(3, 1, 2, letter, 2, &opts, 2).unwrap();
        assert_eq!(
            rep.modal,
            Some(3),
            "{letter}-step at q=3: {:?}",
            rep.histogram
        );
        assert!(
            rep.base_tuples >= 10,
            "{letter}-step: {} bases",
            rep.base_tuples
        );
        let stab = rep.stability.expect("k+1 within cap");
        assert!(
            stab.stable,
            "{letter}-step unstable: k+1 modal {:?}",
            stab.modal_next
        );
    }
    // the older literature value q^2 - q = 6 is refuted by the H-step mode
    let remarks = remark_suite(3, 1, &opts, 2).unwrap();
    assert_eq!(remarks.h_step.literature_claim, 6);
    assert_eq!(remarks.h_step.computed_modal, Some(3));
    assert_eq!(remarks.h_step.verdict, RefutationVerdict::Refuted);
    // q = 2: every step has modal fiber 2 = q
    for letter in [
        TowerLetter::A,
        TowerLetter::C,
        TowerLetter::H,
        TowerLetter::G,
    ] {
        let rep = degree_report(2, 1, 2, letter, 2, &opts, 2).unwrap();
        assert_eq!(
            rep.modal,
            Some(2),
            "{letter}-step at q=2: {:?}",
            rep.histogram
        );
        assert!(rep.base_tuples >= 10);
        assert!(rep.stability.expect("k+1 within cap").stable);
    }
    // oracle-fixed extra datum: the H-step below the theorem's range has
    // modal fiber q(q-1) = 6 at q = 3
    let rep = degree_report(3, 1, 2, TowerLetter::H, 1, &opts, 2).unwrap();
    assert_eq!(rep.modal, Some(6), "H-step at n=1: {:?}", rep.histogram);
    assert!(rep.stability.unwrap().stable);
    println!("ACCEPTANCE 4 degrees: PASS");
}

#[test]
fn criterion_5_field_equality() {
    let opts = EnumOpts::default();
    for q in [2u64, 3] {
        let (p, m) = q_params(q);
        let ctx = FieldCtx::new(p, m, 2).unwrap();
        // (H_n, C_n) EQUAL for n = 2, 3 -- jointly with the witness suite
        for n in [2u32, 3] {
            let eq = partition_compare(
                &ctx,
                n,
                &GenSel::tower(TowerLetter::H, n),
                &GenSel::tower(TowerLetter::C, n),
                &opts,
            )
            .unwrap();
            assert_eq!(eq.verdict, EqVerdict::Equal, "H{n} vs C{n} at q={q}");
            let wit = witness_suite(&ctx, n, &opts, 2).unwrap();
            assert!(wit.pass, "witnesses at q={q} n={n}: {:?}", wit.failures);
        }
    }
    // (H_1, C_1) at q = 3: UNEQUAL with an explicit witness pair
    let ctx3 = FieldCtx::new(3, 1, 2).unwrap();
    let eq = partition_compare(
        &ctx3,
        1,
        &GenSel::tower(TowerLetter::H, 1),
        &GenSel::tower(TowerLetter::C, 1),
        &opts,
    )
    .unwrap();
    assert_eq!(eq.verdict, EqVerdict::Unequal);
    let ce = eq.counterexample.expect("witness pair");
    assert_eq!(ce.point1[0], ce.point2[0], "witness pair shares a1");
    assert_eq!(ce.point1[1], ce.point2[1], "witness pair shares b1");
    assert_ne!(ce.point1[2], ce.point2[2], "witness pair differs in c1");
    // q = 2 collapse: (A_n, C_n) and (G_n, H_n) EQUAL for n <= 4
    let remarks2 = remark_suite(2, 1, &opts, 2).unwrap();
    assert_eq!(remarks2.collapse_ac.len(), 4);
    for r in remarks2.collapse_ac.iter().chain(&remarks2.collapse_gh) {
        assert_eq!(r.verdict, EqVerdict::Equal, "{}", r.text_row());
    }
    // (G_n, H_n) EQUAL for n in {3, 4} at q = 3
    let remarks3 = remark_suite(3, 1, &opts, 2).unwrap();
    assert_eq!(remarks3.collapse_gh[2].verdict, EqVerdict::Equal);
    assert_eq!(remarks3.collapse_gh[3].verdict, EqVerdict::Equal);
    println!("ACCEPTANCE 5 field-equality: PASS");
}

#[test]
fn criterion_6_compositum() {
    let opts = EnumOpts::default();
    for q in [2u64, 3] {
        let (p, m) = q_params(q);
        let ctx = FieldCtx::new(p, m, 2).unwrap();
        for n in [3u32, 4] {
            let a_gens = TowerLetter::A.gens(n);
            let c2 = TowerLetter::C.gens(2);
            let left = GenSel::compositum(format!("A{n}*C2"), &[&a_gens, &c2]);
            let eq = partition_compare(&ctx, n, &left, &GenSel::tower(TowerLetter::C, n), &opts)
                .unwrap();
            assert_eq!(eq.verdict, EqVerdict::Equal, "A{n}*C2 vs C{n} at q={q}");
            assert!(eq.counterexample.is_none());

            let h2 = TowerLetter::H.gens(2);
            let left = GenSel::compositum(format!("A{n}*H2"), &[&a_gens, &h2]);
            let eq = partition_compare(&ctx, n, &left, &GenSel::tower(TowerLetter::H, n), &opts)
                .unwrap();
            assert_eq!(eq.verdict, EqVerdict::Equal, "A{n}*H2 vs H{n} at q={q}");
            assert!(eq.counterexample.is_none());
        }
    }
    println!("ACCEPTANCE 6 compositum: PASS");
}

#[test]
fn criterion_7_solver_exhaustive_equivalence() {
    let start = Instant::now();
    let fields = [
        (2u32, 1u32, 1u32), // 8
        (2, 1, 2),          // 64
        (2, 2, 1),          // 64, different layout
        (2, 1, 3),          // 512
        (2, 3, 1),          // 512, different layout
        (3, 1, 1),          // 27
        (3, 1, 2),          // 729
        (5, 1, 1),          // 125
        (7, 1, 1),          // 343
    ];
    for (p, m, k) in fields {
        let ctx = FieldCtx::new(p, m, k).unwrap();
        let size = ctx.size();
        assert!(size <= 729);
        let all: Vec<Element> = ctx.enumerate().collect();

        // kummer_solve vs whole-field scan, for every divisor r and every rhs
        let n = size - 1;
        let divisors: Vec<u64> = (1..=n).filter(|r| n.is_multiple_of(*r)).collect();
        for &r in &divisors {
            let mut brute: BTreeMap<u64, Vec<Element>> = BTreeMap::new();
            for &y in &all {
                brute.entry(ctx.pow(y, r).code()).or_default().push(y);
            }
            for &rhs in &all {
                let got = ctx.kummer_solve(r, rhs).unwrap();
                let want = brute.get(&rhs.code()).cloned().unwrap_or_default();
                assert_eq!(
                    got,
                    want,
                    "kummer r={r} rhs={} in ({p},{m},{k})",
                    rhs.code()
                );
                if !rhs.is_zero() {
                    assert!(got.is_empty() || got.len() as u64 == r);
                }
            }
        }

        // additive_affine_solve vs whole-field scan, for every (v, w)
        let q = ctx.q();
        for &v in &all {
            let mut brute: BTreeMap<u64, Vec<Element>> = BTreeMap::new();
            for &y in &all {
                let t = ctx.add(ctx.mul(v, ctx.pow(y, q)), y);
                brute.entry(t.code()).or_default().push(y);
            }
            for &w in &all {
                let got = ctx.additive_affine_solve(v, w, q).unwrap();
                let want = brute.get(&w.code()).cloned().unwrap_or_default();
                assert_eq!(
                    got,
                    want,
                    "additive v={} w={} in ({p},{m},{k})",
                    v.code(),
                    w.code()
                );
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    println!("ACCEPTANCE 7 solver-exhaustive-equivalence: PASS ({secs:.2}s)");
}

fn sample_report(workers: usize) -> Report {
    let config = RunConfig {
        command: "acceptance-sample".into(),
        p: 3,
        m: 1,
        k: 2,
        levels: 2,
        model: Model::Free,
        tower: None,
        step: Some("H".into()),
        from: Some(2),
        identity: Some("all".into()),
        mode: Some("both".into()),
        format: towerlab_core::report::ReportFormat::Json,
        out: None,
        workers,
        max_points: 10_000_000,
    };
    let ctx = FieldCtx::new(3, 1, 2).unwrap();
    let opts = EnumOpts::default();
    let mut report = Report::new(config);
    report.field = Some(towerlab_core::report::FieldInfo::of(&ctx));
    let spec = instantiate(IdentityId::CProd, &ctx, 2).unwrap();
    let points = test_identity_points(&spec, &ctx, 2, Model::Free, &opts, workers).unwrap();
    report
        .identities
        .push(towerlab_core::verify::IdentityOutcome {
            id: spec.id.name().to_string(),
            index: spec.index,
            pass: points.pass,
            symbolic: Some(prove_identity(&spec).unwrap().trace),
            points: Some(points),
        });
    report
        .degrees
        .push(degree_report(3, 1, 2, TowerLetter::H, 2, &opts, workers).unwrap());
    report.equalities.push(
        partition_compare(
            &ctx,
            2,
            &GenSel::tower(TowerLetter::H, 2),
            &GenSel::tower(TowerLetter::C, 2),
            &opts,
        )
        .unwrap(),
    );
    report
        .witnesses
        .push(witness_suite(&ctx, 2, &opts, workers).unwrap());
    let tower = relations(3, Model::Free, 2);
    report
        .counts
        .push(count_points(&ctx, &tower, &opts, workers).unwrap());
    report.reference_ratios = vec![
        (2, Report::reference_ratio(2)),
        (3, Report::reference_ratio(3)),
        (4, Report::reference_ratio(4)),
    ];
    report.finalize();
    report
}

#[test]
fn criterion_8_determinism() {
    // identical configuration twice: byte-identical JSON
    let a = sample_report(1).to_json();
    let b = sample_report(1).to_json();
    assert_eq!(a, b, "same config must serialize identically");
    // worker counts 1 vs 4: identical reports
    let c = sample_report(4).to_json();
    assert_eq!(a, c, "worker count must not affect report bytes");
    println!("ACCEPTANCE 8 determinism: PASS");
}

#[test]
fn criterion_9_reference_constants() {
    let expect = [(2u64, (3i64, 2i64)), (3, (16, 5)), (4, (5, 1))];
    for (q, (num, den)) in expect {
        let r = Report::reference_ratio(q);
        assert_eq!((r.numer(), r.denom()), (num, den), "q={q}");
    }
    assert_eq!(Rational::new(6, 4).to_string(), "3/2");
    assert_eq!(Report::reference_ratio(3).to_string(), "16/5");
    assert_eq!(Report::reference_ratio(4).to_string(), "5");
    // the text rendering carries the formula next to the exact value
    let report = sample_report(1);
    let text = report.to_text();
    assert!(text.contains("2(q^2-1)/(q+2)"));
    assert!(text.contains("3/2"));
    assert!(text.contains("16/5"));
    println!("ACCEPTANCE 9 reference-constants: PASS");
}

#[test]
fn fiber_histogram_csv_shape() {
    // csv of a fiber histogram: header (base_tuple_count, fiber_size, frequency)
    let opts = EnumOpts::default();
    let mut report = sample_report(1);
    report.degrees = vec![fiber_histogram(
        &FieldCtx::new(3, 1, 2).unwrap(),
        TowerLetter::C,
        2,
        &opts,
        1,
    )
    .unwrap()];
    let csv = report.to_csv().unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("base_tuple_count,fiber_size,frequency"));
    assert!(lines.next().is_some());
}
