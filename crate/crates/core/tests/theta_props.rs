use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sumfree_core::moore;
use sumfree_core::oracle::{self, Budget};
use sumfree_core::theta;
use sumfree_core::witness::{self, Criterion};
use sumfree_core::{Elem, FieldCtx};

fn random_basis(ctx: &FieldCtx, k: usize, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    loop {
        let v: Vec<Elem> = (0..k).map(|_| ctx.random(rng)).collect();
        if moore::coordinate_rank(ctx, &v) == k {
            return v;
        }
    }
}

#[test]
fn theta_is_a_frobenius_power_of_the_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (k, n) in [(2, 5), (3, 7), (4, 7)] {
        let ctx = FieldCtx::new(2, n, None).unwrap();
        for _ in 0..50 {
            let u: Vec<Elem> = (0..k).map(|_| ctx.random(&mut rng)).collect();
            let direct = theta::eval_theta_direct(&ctx, k, &u, Budget::new(1 << 30)).unwrap();
            let t = theta::eval_theta_k(&ctx, k, &u).unwrap();
            assert_eq!(t, ctx.frobenius(direct, k - 1), "k={k} n={n}");
        }
    }
}

#[test]
fn theta_vanishes_exactly_when_the_trace_dual_has_zero_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (k, n) in [(2, 6), (3, 6), (3, 7), (4, 8)] {
        let ctx = FieldCtx::new(2, n, None).unwrap();
        let mut zeros = 0;
        for _ in 0..300 {
            let u = random_basis(&ctx, k, &mut rng);
            let t = theta::eval_theta_k(&ctx, k, &u).unwrap();
            let dual = moore::trace_dual(&ctx, &u);
            assert_eq!(dual.len(), n - k);
            let s = oracle::gq_span_sum(&ctx, &dual);
            assert_eq!(t.is_zero(), s.is_zero(), "k={k} n={n}");
            zeros += t.is_zero() as usize;
        }
        if k == 2 {
            // for k <= 2 the span itself decides as well
            let u = random_basis(&ctx, 2, &mut rng);
            let t = theta::eval_theta_k(&ctx, 2, &u).unwrap();
            assert_eq!(t.is_zero(), oracle::gq_span_sum(&ctx, &u).is_zero());
        }
        if n == 6 {
            assert!(zeros > 0, "k={k} n={n}");
        }
    }
}

#[test]
fn theta_witness_from_a_dual_space() {
    let ctx = FieldCtx::new(2, 9, None).unwrap();
    // 3 in K_9 via the subfield F_8, so Θ_6 vanishes on a basis of its trace dual.
    let e = witness::gcd_witness(&ctx, 3, 1).unwrap().elements(&ctx).unwrap();
    let u = moore::trace_dual(&ctx, &e);
    let checks = witness::check_witness(&ctx, &u, Criterion::Theta).unwrap();
    assert_eq!(checks.span_sum_zero, Some(true));
}

#[test]
fn n13_fixture_basis_has_nonzero_theta4() {
    let ctx = FieldCtx::from_modulus_text(2, "X^13 + X^12 + X^11 + X^8 + 1").unwrap();
    let u: Vec<Elem> = ["1", "X + X^2 + X^5 + X^8 + X^11", "X^4 + X^5 + X^7 + X^8 + X^11", "1 + X^2 + X^5 + X^8 + X^10 + X^11"]
        .iter()
        .map(|s| ctx.parse(s).unwrap())
        .collect();
    assert!(!theta::eval_theta_k(&ctx, 4, &u).unwrap().is_zero());
    assert!(witness::check_witness(&ctx, &u, Criterion::Delta1).is_ok());
}

#[test]
fn weight_and_congruence_lemmas() {
    for n in 1..=12 {
        assert_eq!(theta::weight_lemma_counterexample(n), None, "n={n}");
    }
    for n in 1..=10u32 {
        for k in 1..=5.min(n as usize) {
            assert_eq!(theta::congruence_lemma_counterexample(n, k), None, "n={n} k={k}");
        }
    }
}

#[test]
fn theta4_identities_at_n8() {
    let ctx = FieldCtx::new(2, 8, None).unwrap();
    let r = theta::verify_theta4_identities(&ctx, 300, 5).unwrap();
    assert!(r.passed(), "{:?}", r.violations);
    assert!(r.checks.iter().all(|(_, c)| *c > 0));
}

#[test]
fn small_zero_counts() {
    let ctx = FieldCtx::new(2, 4, None).unwrap();
    let c = theta::count_theta4_zeros(&ctx, Budget::new(1 << 30)).unwrap();
    assert_eq!(c.zeros, c.zeros_on_delta + c.zeros_off_delta);
    // four independent vectors span F_16; the trace dual is {0}, whose sum is empty
    assert_eq!(c.zeros_off_delta, 15 * 14 * 12 * 8);
    let x = theta::find_theta4_zero_off_delta(&FieldCtx::new(2, 6, None).unwrap(), 200, 3);
    assert!(x.is_some());
}
