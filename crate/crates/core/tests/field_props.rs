use proptest::prelude::*;
use sumfree_core::FieldCtx;

fn fields() -> Vec<FieldCtx> {
    vec![
        FieldCtx::new(2, 8, None).unwrap(),
        FieldCtx::new(2, 13, None).unwrap(),
        FieldCtx::new(2, 21, None).unwrap(),
        FieldCtx::new(2, 64, None).unwrap(),
        FieldCtx::new(3, 7, None).unwrap(),
        FieldCtx::new(5, 11, None).unwrap(),
        FieldCtx::new(7, 3, None).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(fi in 0usize..7, a in any::<u128>(), b in any::<u128>(), c in any::<u128>()) {
        let ctx = &fields()[fi];
        let (a, b, c) = (ctx.from_index(a % ctx.order()), ctx.from_index(b % ctx.order()), ctx.from_index(c % ctx.order()));
        prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), ctx.zero());
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
        prop_assert_eq!(ctx.square(a), ctx.mul(a, a));
        prop_assert_eq!(ctx.mul(a, ctx.one()), a);
    }

    #[test]
    fn inverses_and_frobenius(fi in 0usize..7, a in any::<u128>(), b in any::<u128>()) {
        let ctx = &fields()[fi];
        let (a, b) = (ctx.from_index(a % ctx.order()), ctx.from_index(b % ctx.order()));
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
            prop_assert_eq!(ctx.pow(a, ctx.order() - 1), ctx.one());
        } else {
            prop_assert!(ctx.inv(a).is_err());
            prop_assert_eq!(ctx.inv0(a), ctx.zero());
        }
        prop_assert_eq!(ctx.frob(a), ctx.pow(a, ctx.q() as u128));
        prop_assert_eq!(ctx.frob(ctx.add(a, b)), ctx.add(ctx.frob(a), ctx.frob(b)));
        prop_assert_eq!(ctx.frobenius(a, ctx.n()), a);
        prop_assert!(ctx.in_subfield(ctx.trace(a, 1).unwrap(), 1).unwrap());
    }

    #[test]
    fn text_roundtrip(fi in 0usize..7, a in any::<u128>()) {
        let ctx = &fields()[fi];
        let a = ctx.from_index(a % ctx.order());
        prop_assert_eq!(ctx.parse(&ctx.format(a)).unwrap(), a);
        prop_assert_eq!(ctx.parse_compact(&ctx.format_compact(a)).unwrap(), a);
        prop_assert_eq!(ctx.from_index(ctx.index(a)), a);
    }
}
