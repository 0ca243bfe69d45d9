mod common;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use ivp_core::adelic::{adelic_closure_member, product_closure_member, AdelePrescription, IntegerSet};
use ivp_core::arith::{rat_from_int, Congruence};
use ivp_core::ivp::is_integer_valued;
use ivp_core::Config;

fn arb_integer_set() -> impl Strategy<Value = IntegerSet> {
    (
        prop::collection::vec((0i64..72, prop::sample::select(vec![2i64, 3, 4, 6, 8, 9, 12, 18, 24, 36, 72])), 0..3),
        prop::collection::vec(-100i64..100, 0..3),
        any::<bool>(),
    )
        .prop_map(|(excl, extra, finite)| {
            if finite {
                return IntegerSet::finite(extra.into_iter().chain([5, 17]).map(BigInt::from));
            }
            excl.into_iter()
                .fold(IntegerSet::all(), |e, (r, m)| e.excluding(Congruence::of(r, m)))
                .with_extra(extra.into_iter().map(BigInt::from))
        })
}

fn arb_prescription() -> impl Strategy<Value = AdelePrescription> {
    let at = |_: u64| prop::option::of((0i64..200, 1u32..4));
    (at(2), at(3), at(5)).prop_map(|cs| {
        let mut pres = AdelePrescription::new();
        for (p, c) in [(2u64, cs.0), (3, cs.1), (5, cs.2)] {
            if let Some((r, k)) = c {
                let m = BigInt::from(p).pow(k);
                pres = pres.with(prime(p), Congruence::new(BigInt::from(r).mod_floor(&m), m).unwrap()).unwrap();
            }
        }
        pres
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn adelic_closure_lies_in_product_closure(pres in arb_prescription(), e in arb_integer_set()) {
        let cfg = Config::default();
        let hat = adelic_closure_member(&pres, &e, &cfg).unwrap();
        let product = product_closure_member(&pres, &e, &cfg).unwrap();
        if hat.member {
            prop_assert!(product);
            let w = hat.witness.expect("members come with a witness");
            prop_assert!(e.contains(&w));
            for c in pres.constraints().values() {
                prop_assert!(c.contains(&w));
            }
        }
    }

    #[test]
    fn product_closure_is_checked_prime_by_prime(pres in arb_prescription(), e in arb_integer_set()) {
        let cfg = Config::default();
        let expected = pres.constraints().keys().all(|&p| {
            let ball = pres.ball_at(p).unwrap();
            e.closure_in_zp(p, &cfg).unwrap().meets_ball(&ball).unwrap()
        });
        prop_assert_eq!(product_closure_member(&pres, &e, &cfg).unwrap(), expected);
    }

    #[test]
    fn per_prime_closures_decide_int_e_z(f in arb_poly(), e in arb_integer_set()) {
        let cfg = Config::default();
        let by_closure = [2u64, 3].into_iter().all(|p| {
            is_integer_valued(&f, &e.closure_in_zp(prime(p), &cfg).unwrap(), &cfg).unwrap()
        });
        // every class mod lcm(period, 2^6 3^4) is visited
        let span: i64 = e.period().lcm(&BigInt::from(5184)).try_into().unwrap();
        let ints = (-span..span).map(BigInt::from).filter(|a| e.contains(a));
        let by_scan = ints.chain(e.extra().iter().cloned()).all(|a| f.eval(&rat_from_int(&a)).is_integer());
        prop_assert_eq!(by_closure, by_scan);
    }
}
