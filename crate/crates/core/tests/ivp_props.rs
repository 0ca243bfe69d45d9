mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;

use ivp_core::arith::in_zp;
use ivp_core::ivp::{is_integer_valued, separating_polynomial, witness_rational_function};
use ivp_core::Config;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn membership_agrees_with_residue_oracle(f in arb_poly(), s in arb_set()) {
        let cfg = Config::default();
        prop_assert_eq!(is_integer_valued(&f, &s, &cfg).unwrap(), oracle_integer_valued(&f, &s));
    }

    #[test]
    fn membership_is_closure_invariant(f in arb_poly(), s in arb_set()) {
        let cfg = Config::default();
        prop_assert_eq!(
            is_integer_valued(&f, &s, &cfg).unwrap(),
            is_integer_valued(&f, &s.closure(), &cfg).unwrap()
        );
        prop_assert_eq!(oracle_integer_valued(&f, &s), oracle_integer_valued(&f, &s.closure()));
    }

    #[test]
    fn integer_valued_polynomials_form_a_ring(f in arb_poly(), g in arb_poly(), s in arb_set()) {
        let cfg = Config::default();
        if is_integer_valued(&f, &s, &cfg).unwrap() && is_integer_valued(&g, &s, &cfg).unwrap() {
            prop_assert!(is_integer_valued(&(&f + &g), &s, &cfg).unwrap());
            prop_assert!(is_integer_valued(&(&f * &g), &s, &cfg).unwrap());
            prop_assert!(is_integer_valued(&(&f - &g), &s, &cfg).unwrap());
        }
    }

    #[test]
    fn larger_sets_give_smaller_rings(
        f in arb_poly(),
        (e, extra) in arb_prime().prop_flat_map(|p| (arb_set_at(p), arb_set_at(p))),
    ) {
        let cfg = Config::default();
        let big = e.union(&extra).unwrap();
        if is_integer_valued(&f, &big, &cfg).unwrap() {
            prop_assert!(is_integer_valued(&f, &e, &cfg).unwrap());
        }
    }

    #[test]
    fn separating_polynomial_separates(s in arb_set(), alpha in arb_zp_rat()) {
        let cfg = Config::default();
        let c = s.closure();
        prop_assume!(!c.member(&alpha).unwrap());
        let f = match separating_polynomial(&s, &alpha, &cfg) {
            Err(ivp_core::Error::ResourceCap { .. }) => return Err(TestCaseError::reject("beyond the degree cap")),
            other => other.unwrap(),
        };
        prop_assert!(oracle_integer_valued(&f, &s));
        prop_assert!(!in_zp(&f.eval(&alpha), s.prime()));
    }

    #[test]
    fn rational_witness_is_integral_on_the_family(
        q in arb_irreducible(),
        s2 in arb_set_at(prime(2)),
        s3 in arb_set_at(prime(3)),
    ) {
        let cfg = Config::default();
        let family: BTreeMap<_, _> = [(prime(2), s2.closure()), (prime(3), s3.closure())].into_iter().collect();
        match witness_rational_function(&q, &family, &cfg) {
            Ok(w) => {
                prop_assert!(w.verify(&family, &cfg).unwrap());
                for (p, set) in &family {
                    for x in set.sample_points(5) {
                        let y = w.eval(&x).expect("no root in the family");
                        prop_assert!(oracle_vp_rat(&y, p.get()).is_none_or(|v| v >= 0));
                    }
                }
            }
            // only when some closure holds a root of q
            Err(_) => {
                let rooted = family.values().any(|set| !ivp_core::roots::roots_in_set(&q, set, &cfg).unwrap().is_empty());
                prop_assert!(rooted);
            }
        }
    }
}
