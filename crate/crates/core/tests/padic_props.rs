mod common;

use common::*;
use num_integer::Integer;
use proptest::prelude::*;

use ivp_core::arith::{rat_from_int, Rat};
use ivp_core::padic::PAdicSet;

fn probes() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(arb_zp_rat(), 8)
}

/// Some `y != x` in `s` with `v_p(y - x) >= k`, searched among `x + p^j`
/// and sequence elements.
fn has_other_point_near(s: &PAdicSet, x: &Rat, k: u32) -> bool {
    let p = s.prime();
    let shifts = (k..k + 4).map(|j| x + rat_from_int(&p.pow(j)));
    let elements = s.seqs().iter().flat_map(|q| (q.start()..q.start() + 16).map(|n| q.element(n)));
    shifts.chain(elements).any(|y| {
        &y != x
            && oracle_vp_rat(&(&y - x), p.get()).is_some_and(|v| v >= k as i64)
            && s.member(&y).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closure_is_idempotent_and_extensive(s in arb_set()) {
        let c = s.closure();
        prop_assert_eq!(c.closure(), c.clone());
        prop_assert!(c.is_closed());
        prop_assert!(s.is_subset(&c).unwrap());
    }

    #[test]
    fn canonical_form_preserves_membership(s in arb_set(), xs in probes()) {
        let c = s.canonicalize();
        for x in xs.iter().chain(s.sample_points(3).iter()) {
            prop_assert_eq!(s.member(x).unwrap(), c.member(x).unwrap());
        }
        for x in s.sample_points(3) {
            prop_assert!(s.member(&x).unwrap());
        }
    }

    #[test]
    fn subset_is_a_partial_order(
        (a, b, c) in arb_prime().prop_flat_map(|p| (arb_set_at(p), arb_set_at(p), arb_set_at(p)))
    ) {
        let (a, b, c) = (a.closure(), b.closure(), c.closure());
        prop_assert!(a.is_subset(&a).unwrap());
        if a.is_subset(&b).unwrap() && b.is_subset(&a).unwrap() {
            prop_assert_eq!(&a, &b);
        }
        if a.is_subset(&b).unwrap() && b.is_subset(&c).unwrap() {
            prop_assert!(a.is_subset(&c).unwrap());
        }
        let ab = a.union(&b).unwrap();
        prop_assert!(a.is_subset(&ab).unwrap() && b.is_subset(&ab).unwrap());
    }

    #[test]
    fn isolated_points_law(s in arb_set()) {
        let iso = s.isolated_points();
        let c = s.closure();
        for x in &iso.points {
            prop_assert!(s.member(x).unwrap());
            prop_assert!(!s.remove_point(x).unwrap().closure().member(x).unwrap());
        }
        for t in &iso.tails {
            for n in t.start()..t.start() + 3 {
                let x = t.element(n);
                prop_assert!(s.member(&x).unwrap());
                prop_assert!(!s.remove_point(&x).unwrap().closure().member(&x).unwrap());
            }
        }
        for x in c.sample_points(3) {
            if !iso.contains(&x) && s.member(&x).unwrap() {
                for k in 1..6 {
                    prop_assert!(has_other_point_near(&s, &x, k), "{} should be a limit point", x);
                }
            }
        }
    }

    #[test]
    fn ball_sets_agree_with_residue_enumeration(
        (a, b) in arb_prime().prop_flat_map(|p| (arb_ball_set_at(p), arb_ball_set_at(p))),
        xs in prop::collection::vec(-400i64..400, 10),
    ) {
        let d = max_ball_depth(&[&a, &b]) + 1;
        let ra = ball_residues(&a, d);
        let rb = ball_residues(&b, d);
        let modulus = a.prime().pow(d);
        for x in xs {
            let x = num_bigint::BigInt::from(x);
            let r = x.mod_floor(&modulus);
            prop_assert_eq!(a.member(&rat_from_int(&x)).unwrap(), ra.binary_search(&r).is_ok());
        }
        let sub = ra.iter().all(|r| rb.binary_search(r).is_ok());
        prop_assert_eq!(a.is_subset(&b).unwrap(), sub);
        let dense = rb.iter().all(|r| ra.binary_search(r).is_ok());
        prop_assert_eq!(a.is_dense_in(&b).unwrap(), dense);
    }

    #[test]
    fn union_membership_is_disjunction(
        (a, b) in arb_prime().prop_flat_map(|p| (arb_set_at(p), arb_set_at(p))),
        xs in probes(),
    ) {
        let u = a.union(&b).unwrap();
        for x in xs.iter().chain(a.sample_points(2).iter()).chain(b.sample_points(2).iter()) {
            prop_assert_eq!(u.member(x).unwrap(), a.member(x).unwrap() || b.member(x).unwrap());
        }
    }
}

#[test]
fn equal_sets_share_canonical_form() {
    let p = prime(2);
    let halves = PAdicSet::from_parts(
        p,
        vec![ivp_core::Ball::from_int(p, &0.into(), 1), ivp_core::Ball::from_int(p, &1.into(), 1)],
        vec![],
        vec![],
    )
    .unwrap();
    assert_eq!(halves, PAdicSet::full(p));
}
