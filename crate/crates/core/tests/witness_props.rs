use std::path::PathBuf;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sumfree_core::moore;
use sumfree_core::oracle::{self, Budget};
use sumfree_core::witness::{self, Clause, Criterion, Provenance, Status, Strategy, WitnessError, WitnessRecord};
use sumfree_core::{Elem, FieldCtx};

fn fixture(name: &str) -> Vec<WitnessRecord> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| WitnessRecord::from_json_line(l).unwrap())
        .collect()
}

fn zero_sum(ctx: &FieldCtx, v: &[Elem]) -> bool {
    let (d, d1) = moore::delta_and_delta1(ctx, v);
    !d.is_zero() && d1.is_zero()
}

#[test]
fn bundled_fixtures_verify() {
    for name in ["n13.jsonl", "n21.jsonl", "q5_n11_k4.jsonl"] {
        for r in fixture(name) {
            let c = r.verify().unwrap_or_else(|e| panic!("{name} k={}: {e}", r.k));
            assert!(c.delta_nonzero);
            assert_eq!(c.criterion_value, "0");
        }
    }
    let ks: Vec<usize> = fixture("n13.jsonl").iter().map(|r| r.k).collect();
    assert_eq!(ks, vec![4, 5, 6]);
}

#[test]
fn tampered_fixture_fails() {
    let mut r = fixture("n13.jsonl").remove(0);
    r.basis[3] = r.basis[3].replace("X^10 + ", "");
    assert!(matches!(r.verify(), Err(WitnessError::NotAWitness(_))));
    let mut r = fixture("n13.jsonl").remove(0);
    r.basis[1] = "1".into();
    assert_eq!(r.verify(), Err(WitnessError::NotAWitness(Clause::DeltaZero)));
    let mut r = fixture("n13.jsonl").remove(0);
    r.k = 5;
    assert!(matches!(r.verify(), Err(WitnessError::Record { field: "k", .. })));
}

#[test]
fn searches_at_thirteen() {
    let ctx = FieldCtx::from_modulus_text(2, "X^13 + X^12 + X^11 + X^8 + 1").unwrap();
    for k in 4..=6 {
        let r = witness::search_kernel(&ctx, k, 1000, 1).unwrap();
        assert_eq!(r.provenance, Provenance::Kernel);
        r.verify().unwrap();
    }
    let r = witness::search_random(&ctx, 4, 400_000, 2).unwrap();
    r.verify().unwrap();
}

#[test]
fn random_search_small_cases() {
    let ctx = FieldCtx::new(3, 8, None).unwrap();
    assert!(witness::search_random(&ctx, 2, 2000, 1).is_ok());
    let ctx = FieldCtx::new(2, 9, None).unwrap();
    let e = witness::search_random(&ctx, 2, 2000, 1).unwrap_err();
    assert_eq!(e.samples, 2000);
}

#[test]
fn factor_construction_even_n() {
    for q in [2u32, 3, 5] {
        for n in (4..=12).step_by(2) {
            if q == 5 && n > 10 {
                continue;
            }
            let ctx = FieldCtx::new(q, n, None).unwrap();
            let (r, choice) = witness::witness_from_factor(&ctx, 2, 1).unwrap().unwrap();
            assert_eq!(choice.factor.len(), 3);
            assert_eq!(r.k, 2);
            r.verify().unwrap();
        }
    }
    let ctx = FieldCtx::new(2, 6, None).unwrap();
    let (r, _) = witness::witness_from_factor(&ctx, 3, 1).unwrap().unwrap();
    assert_eq!(r.checks.unwrap().span_sum_zero, Some(true));
}

#[test]
fn sum_over_direct_sum_lemma() {
    // Σ_{E⊕F} = Σ_E + Δ(E)^((q-1)^2) Σ_{L_E(F)} for arbitrary independent E, F.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (q, n) in [(2u32, 9usize), (3, 6), (5, 4)] {
        let ctx = FieldCtx::new(q, n, None).unwrap();
        let qq = q as u128;
        for _ in 0..20 {
            let all: Vec<Elem> = loop {
                let v: Vec<Elem> = (0..3).map(|_| ctx.random(&mut rng)).collect();
                if moore::coordinate_rank(&ctx, &v) == 3 {
                    break v;
                }
            };
            let (e, f) = all.split_at(2);
            let le = moore::subspace_poly(&ctx, e).unwrap();
            let image: Vec<Elem> = f.iter().map(|&x| le.eval(&ctx, x)).collect();
            let d = moore::moore_delta(&ctx, e).unwrap();
            let rhs = ctx.add(
                oracle::gq_span_sum(&ctx, e),
                ctx.mul(ctx.pow(d, (qq - 1) * (qq - 1)), oracle::gq_span_sum(&ctx, &image)),
            );
            assert_eq!(oracle::gq_span_sum(&ctx, &all), rhs, "q={q} n={n}");
        }
    }
}

#[test]
fn composition_three_plus_three_at_thirteen() {
    let ctx = FieldCtx::from_modulus_text(2, "X^13 + X^12 + X^11 + X^8 + 1").unwrap();
    let a = witness::search_kernel(&ctx, 3, 1000, 1).unwrap().elements(&ctx).unwrap();
    let b = witness::search_kernel(&ctx, 3, 1000, 2).unwrap().elements(&ctx).unwrap();
    let r = witness::compose_witnesses(&ctx, &a, &b).unwrap();
    assert_eq!(r.k, 6);
    assert_eq!(r.provenance, Provenance::Compose);
    assert_eq!(r.checks.unwrap().span_sum_zero, Some(true));
    let big = witness::search_kernel(&ctx, 5, 1000, 1).unwrap().elements(&ctx).unwrap();
    assert_eq!(
        witness::compose_witnesses(&ctx, &big, &a),
        Err(WitnessError::DimensionProduct { k: 5, l: 3, n: 13 })
    );
}

#[test]
fn tower_chain_at_twenty_one() {
    let r = fixture("n21.jsonl").remove(0);
    let ctx = r.context().unwrap();
    let mut f = r.elements(&ctx).unwrap();
    assert!(ctx.in_subfield(f[1], 3).unwrap());
    let mut dims = Vec::new();
    for _ in 0..4 {
        f = witness::lift_tower(&ctx, &f, 3).unwrap();
        assert_eq!(moore::coordinate_rank(&ctx, &f), f.len());
        assert!(zero_sum(&ctx, &f));
        dims.push(f.len());
    }
    assert_eq!(dims, vec![7, 10, 13, 16]);
    assert!(oracle::gq_span_sum(&ctx, &f).is_zero());
    assert_eq!(witness::lift_tower(&ctx, &f, 3), Err(WitnessError::NoRoom));
    let rec = WitnessRecord::new(&ctx, &f, Criterion::Delta1, Provenance::Tower, None).unwrap();
    assert_eq!(rec.checks.unwrap().span_sum_zero, Some(true));
    let dual = witness::dual_witness(&ctx, &f).unwrap();
    assert_eq!(dual.k, 5);
}

#[test]
fn tower_rejects_nonzero_sum() {
    let ctx = FieldCtx::new(2, 6, None).unwrap();
    let f = [ctx.one(), ctx.x_pow(1)];
    assert!(!zero_sum(&ctx, &f));
    assert_eq!(witness::lift_tower(&ctx, &f, 2), Err(WitnessError::PreconditionSumNonzero));
}

#[test]
fn exhaustive_verdicts_respect_duality() {
    let b = Budget::new(1_000_000_000);
    for (q, n) in [(2u32, 4usize), (2, 5), (2, 6), (2, 7), (2, 8), (2, 9), (3, 4), (3, 5), (3, 6), (5, 3), (5, 4)] {
        let v = witness::compute_k(q, n, &Strategy::exhaustive_only(), b).unwrap();
        let set = witness::k_set(&v);
        for k in 1..n {
            assert_eq!(set.contains(&k), set.contains(&(n - k)), "q={q} n={n} k={k}");
        }
    }
}

#[test]
fn pipeline_examples() {
    let b = Budget::new(1_000_000_000);
    let v = witness::compute_k(2, 7, &Strategy::full(3), b).unwrap();
    assert_eq!(witness::k_set(&v), vec![3, 4]);
    for x in &v {
        if let Status::NotSumfree { witness } = &x.status {
            witness.verify().unwrap();
        }
    }
    let v = witness::compute_k(3, 7, &Strategy::full(3), b).unwrap();
    assert!(v.iter().all(|x| matches!(x.status, Status::SumfreeProved { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn searched_records_roundtrip(seed in any::<u64>(), n in 6usize..=10, k in 3usize..=4) {
        let ctx = FieldCtx::new(2, n, None).unwrap();
        if let Ok(r) = witness::search_kernel(&ctx, k, 200, seed) {
            let line = r.to_json_line();
            let back = WitnessRecord::from_json_line(&line).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert!(back.verify().is_ok());
            let replay = witness::search_kernel(&ctx, k, 200, seed).unwrap();
            prop_assert_eq!(replay, r);
        }
    }
}
