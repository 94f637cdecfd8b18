use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sumfree_core::moore::{self, QPoly};
use sumfree_core::oracle;
use sumfree_core::{Elem, FieldCtx};

fn fields() -> Vec<FieldCtx> {
    vec![
        FieldCtx::new(2, 9, None).unwrap(),
        FieldCtx::new(3, 5, None).unwrap(),
        FieldCtx::new(5, 4, None).unwrap(),
    ]
}

/// An independent basis of size `k` and a point outside its span.
fn sample(ctx: &FieldCtx, k: usize, rng: &mut ChaCha8Rng) -> (Vec<Elem>, Elem) {
    loop {
        let v: Vec<Elem> = (0..k).map(|_| ctx.random(rng)).collect();
        let y = ctx.random(rng);
        let mut all = v.clone();
        all.push(y);
        if moore::coordinate_rank(ctx, &all) == k + 1 {
            return (v, y);
        }
    }
}

fn shifted_powers_sum(ctx: &FieldCtx, v: &[Elem], y: Elem, s: u128) -> Elem {
    ctx.sum(moore::span_elements(ctx, v).into_iter().map(|u| ctx.pow(ctx.inv0(ctx.add(y, u)), s)))
}

#[test]
fn moore_det_is_the_span_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for ctx in fields() {
        for k in 1..=3 {
            for _ in 0..20 {
                let (v, y) = sample(&ctx, k, &mut rng);
                let prod = moore::span_elements(&ctx, &v)
                    .into_iter()
                    .fold(ctx.one(), |acc, u| ctx.mul(acc, ctx.add(y, u)));
                let mut yv = vec![y];
                yv.extend_from_slice(&v);
                let mut rhs = ctx.div(moore::moore_delta(&ctx, &yv).unwrap(), moore::moore_delta(&ctx, &v).unwrap()).unwrap();
                if k % 2 == 1 {
                    rhs = ctx.neg(rhs);
                }
                assert_eq!(prod, rhs);
            }
        }
    }
}

#[test]
fn reciprocal_sums_match_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for ctx in fields() {
        let q = ctx.q() as u128;
        for k in 1..=3 {
            for _ in 0..20 {
                let (v, y) = sample(&ctx, k, &mut rng);
                let d = moore::moore_delta(&ctx, &v).unwrap();
                let d0 = moore::moore_delta_i(&ctx, 0, &v).unwrap();
                assert_eq!(d0, ctx.pow(d, q));
                assert_eq!(moore::moore_delta_i(&ctx, k, &v).unwrap(), d);
                let mut yv = vec![y];
                yv.extend_from_slice(&v);
                let ratio = ctx.div(d0, moore::moore_delta(&ctx, &yv).unwrap()).unwrap();
                for s in 1..q {
                    assert_eq!(shifted_powers_sum(&ctx, &v, y, s), ctx.pow(ratio, s), "s = {s}");
                }
                for l in 0..(2 * q * q) as u64 {
                    let direct = shifted_powers_sum(&ctx, &v, y, l as u128 + 1);
                    assert_eq!(moore::carlitz_power_sum(&ctx, &v, y, l).unwrap(), direct, "l = {l}");
                }
            }
        }
    }
}

#[test]
fn zero_sum_dichotomy() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for ctx in fields() {
        let q = ctx.q() as u128;
        for k in 1..=3 {
            for _ in 0..20 {
                let (v, _) = sample(&ctx, k, &mut rng);
                for s in 1..q {
                    let sum = ctx.sum(
                        moore::span_elements(&ctx, &v)
                            .into_iter()
                            .filter(|u| !u.is_zero())
                            .map(|u| ctx.pow(ctx.inv0(u), s)),
                    );
                    if s < q - 1 {
                        assert!(sum.is_zero());
                    } else {
                        let d = moore::moore_deltas(&ctx, &v).unwrap();
                        assert_eq!(sum, ctx.neg(ctx.div(d[1], d[0]).unwrap()));
                        assert_eq!(sum, oracle::gq_span_sum(&ctx, &v));
                    }
                }
            }
        }
    }
}

#[test]
fn subspace_polynomial_recursion_matches_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for ctx in fields() {
        let q = ctx.q() as u128;
        for k in 1..=ctx.n() {
            if q.pow(k as u32) > 4096 {
                break;
            }
            for _ in 0..3 {
                let (v, _) = sample(&ctx, k - 1, &mut rng);
                let mut v = v;
                let extra = loop {
                    let x = ctx.random(&mut rng);
                    let mut t = v.clone();
                    t.push(x);
                    if moore::coordinate_rank(&ctx, &t) == k {
                        break x;
                    }
                };
                v.push(extra);
                let a: QPoly = moore::subspace_poly(&ctx, &v).unwrap();
                let b = moore::subspace_poly_by_product(&ctx, &v).unwrap();
                assert_eq!(a, b);
                assert_eq!(a.q_degree(), Some(k));
                for u in moore::span_elements(&ctx, &v) {
                    assert!(a.eval(&ctx, u).is_zero());
                }
            }
        }
    }
}
