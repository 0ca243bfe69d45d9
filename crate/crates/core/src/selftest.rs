//! Regression corpus of worked examples, runnable from the command line.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::adelic::{adelic_closure_member, closures_differ, product_closure_member};
use crate::arith::{crt_solve, rat, ratio, vp, Congruence, Prime, Valuation};
use crate::config::Config;
use crate::dsl::{parse_intset, parse_pres, parse_representation, parse_ring, parse_set};
use crate::error::Result;
use crate::irreducible::IrreduciblePoly;
use crate::ivp::{is_integer_valued, polynomial_closure, separating_polynomial, witness_rational_function};
use crate::representation::{
    nonunitary_contains, representation_equals, ring_of, superfluous_nonunitary, superfluous_unitary, unitary_contains,
};
use crate::ring::{
    globalize, has_irredundant_representation, localize, minimal_extensions, ring_contains, ring_equal, RingSpec,
    TriState,
};
use crate::roots::{max_valuation, roots_in_set};
use crate::rule::DefaultRule;
use crate::simple::is_simple_integer_set_ring;

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Case = (&'static str, fn(&Config) -> Result<bool>);

fn p(n: u64) -> Prime {
    Prime::new(n).expect("prime literal")
}

fn q(s: &str, cfg: &Config) -> Result<IrreduciblePoly> {
    IrreduciblePoly::certify(&s.parse()?, cfg)
}

const CASES: &[Case] = &[
    ("crt: 1 mod 8 and 2 mod 9 give 65 mod 72", |_| {
        Ok(crt_solve(&[Congruence::of(1, 8), Congruence::of(2, 9)]) == Some(Congruence::of(65, 72)))
    }),
    ("crt: parity conflict is unsolvable", |_| Ok(crt_solve(&[Congruence::of(0, 2), Congruence::of(1, 4)]).is_none())),
    ("valuation of 1/9 at 3 is -2", |_| Ok(vp(&ratio(1, 9), p(3)) == Valuation::Finite(-2))),
    ("closure of the powers of 2 adds 0", |cfg| {
        let open = parse_set("seq(2; 0, 1, 0, -lim)", cfg)?;
        Ok(!open.contains(&rat(0)) && open.closure() == parse_set("seq(2; 0, 1, 0, +lim)", cfg)?)
    }),
    ("units+p at 3 is {3} with the two unit balls", |cfg| {
        Ok(DefaultRule::UnitsAndSelf.instantiate(p(3), cfg)? == parse_set("pts(3; 3) | ball(3, 1, 1) | ball(3, 2, 1)", cfg)?)
    }),
    ("isolated points of {2^n} and 0 are the powers", |cfg| {
        let iso = parse_set("seq(2; 0, 1, 0, +lim)", cfg)?.isolated_points();
        Ok(iso.points.is_empty() && iso.tails.len() == 1 && iso.contains(&rat(8)) && !iso.contains(&rat(0)))
    }),
    ("X^2 + 1 has no root in Z_2", |cfg| Ok(roots_in_set(&q("X^2 + 1", cfg)?, &parse_set("full(2)", cfg)?, cfg)?.is_empty())),
    ("X^2 - 17 has two certified roots in Z_2", |cfg| {
        let f = q("X^2 - 17", cfg)?;
        let roots = roots_in_set(&f, &parse_set("full(2)", cfg)?, cfg)?;
        Ok(roots.len() == 2 && roots.iter().all(|r| r.validate(&f).is_ok()))
    }),
    ("sup of v_2(X^2 + 1) over Z_2 is 1", |cfg| {
        let m = max_valuation(&q("X^2 + 1", cfg)?, &parse_set("full(2)", cfg)?, cfg)?;
        Ok(m.map(|m| m.value) == Some(Valuation::Finite(1)))
    }),
    ("binomial (X^2 - X)/2 is integer-valued on Z_2, (X^2 - X)/4 is not", |cfg| {
        let z2 = parse_set("full(2)", cfg)?;
        Ok(is_integer_valued(&"(X^2 - X)/2".parse()?, &z2, cfg)? && !is_integer_valued(&"(X^2 - X)/4".parse()?, &z2, cfg)?)
    }),
    ("everything is integer-valued on the empty set", |cfg| {
        is_integer_valued(&"X/8".parse()?, &parse_set("empty(2)", cfg)?, cfg)
    }),
    ("polynomial closure equals topological closure for {2^n}", |cfg| {
        let e = parse_set("seq(2; 0, 1, 0, -lim)", cfg)?;
        Ok(polynomial_closure(&e) == e.closure())
    }),
    ("X/2 separates 1 from 2Z_2", |cfg| {
        Ok(separating_polynomial(&parse_set("ball(2, 0, 1)", cfg)?, &rat(1), cfg)?.to_string() == "X/2")
    }),
    ("witness 2/(X^2 + 1) on Z_2", |cfg| {
        let fam: BTreeMap<_, _> = [(p(2), parse_set("full(2)", cfg)?)].into();
        let w = witness_rational_function(&q("X^2 + 1", cfg)?, &fam, cfg)?;
        Ok(w.to_string() == "2/(X^2 + 1)" && w.verify(&fam, cfg)?)
    }),
    ("Int(Z) is contained in Int(P,Z) and not conversely", |cfg| {
        Ok(ring_contains(&RingSpec::int_z(), &RingSpec::int_primes(), cfg)?
            && !ring_contains(&RingSpec::int_primes(), &RingSpec::int_z(), cfg)?)
    }),
    ("padding with the default instance changes nothing", |cfg| {
        ring_equal(&parse_ring("ring(full; 2: full(2))", cfg)?, &RingSpec::int_z(), cfg)
    }),
    ("all minimal q with E_2 = {2^n} gives the closed ring", |cfg| {
        let rep = parse_representation("rep(P = {all-min}; E = {2: seq(2; 0, 1, 0, -lim)}; tail empty)", false, cfg)?;
        let r = ring_of(&rep, cfg)?;
        Ok(r.polynomial && r.ring == parse_ring("ring(empty; 2: seq(2; 0, 1, 0, +lim))", cfg)?)
    }),
    ("all minimal q with nothing unitary is Q[X]", |cfg| {
        let r = ring_of(&parse_representation("rep(P = {all-min}; tail empty)", false, cfg)?, cfg)?;
        Ok(r.polynomial && r.ring == RingSpec::q_x())
    }),
    ("Int(Z) is the intersection of all V_{p,alpha}", |cfg| {
        let rep = parse_representation("rep(P = {all-min}; tail full)", false, cfg)?;
        Ok(representation_equals(&rep, &RingSpec::int_z(), cfg)?.answer == TriState::Yes)
    }),
    ("a single point is not dense in a ball", |cfg| {
        let rep = parse_representation("rep(P = {all-min}; E = {2: pts(2; 1)}; tail empty)", false, cfg)?;
        let r = parse_ring("ring(empty; 2: ball(2, 1, 2))", cfg)?;
        Ok(representation_equals(&rep, &r, cfg)?.answer == TriState::No)
    }),
    ("V_{2,0} contains the ring cut out by {2^n}", |cfg| {
        let rep = parse_representation("rep(E = {2: seq(2; 0, 1, 0, -lim)}; tail empty)", false, cfg)?;
        unitary_contains(&rep, p(2), &rat(0), cfg)
    }),
    ("V_X contains the ring with every V_{p,p}", |cfg| {
        let rep = parse_representation("rep(tail power(1))", false, cfg)?;
        Ok(nonunitary_contains(&rep, &q("X", cfg)?, cfg)?.answer == TriState::Yes)
    }),
    ("V_X does not contain V_{2,1}; witness 1/X", |cfg| {
        let rep = parse_representation("rep(E = {2: pts(2; 1)}; tail empty)", false, cfg)?;
        let a = nonunitary_contains(&rep, &q("X", cfg)?, cfg)?;
        let fam: BTreeMap<_, _> = [(p(2), parse_set("pts(2; 1)", cfg)?)].into();
        Ok(a.answer == TriState::No && a.witness.map(|w| w.to_string() == "1/(X)" && w.verify(&fam, cfg).unwrap_or(false)) == Some(true))
    }),
    ("V_X is superfluous next to every V_{p,p}, which are not", |cfg| {
        let rep = parse_representation("rep(P = {X}; tail power(1))", false, cfg)?;
        let mut ok = superfluous_nonunitary(&rep, &q("X", cfg)?, cfg)?.answer == TriState::Yes;
        for n in [2u64, 3, 5, 7, 11] {
            ok &= !superfluous_unitary(&rep, p(n), &rat(n as i64), cfg)?;
        }
        Ok(ok)
    }),
    ("minimal extensions of {2^n} and 0 are indexed by the powers", |cfg| {
        let r = parse_ring("ring(empty; 2: seq(2; 0, 1, 0, +lim))", cfg)?;
        let m = minimal_extensions(&r, p(2), cfg)?;
        let ball = minimal_extensions(&parse_ring("ring(empty; 2: ball(2, 1, 2))", cfg)?, p(2), cfg)?;
        Ok(m.points.is_empty() && m.families.len() == 1 && ball.is_empty())
    }),
    ("irredundance: Int(Z) no, {2^n} yes, Int(P,Z) no", |cfg| {
        Ok(has_irredundant_representation(&RingSpec::int_z(), cfg)? == TriState::No
            && has_irredundant_representation(&parse_ring("ring(empty; 2: seq(2; 0, 1, 0, +lim))", cfg)?, cfg)? == TriState::Yes
            && has_irredundant_representation(&RingSpec::int_primes(), cfg)? == TriState::No)
    }),
    ("localizing Int(Z) at 3 gives Int(Z_(3))", |cfg| {
        Ok(localize(&RingSpec::int_z(), p(3), cfg)? == parse_ring("ring(empty; 3: full(3))", cfg)?)
    }),
    ("globalize then localize returns the part", |cfg| {
        let g = globalize([(p(2), parse_set("pts(2; 0)", cfg)?)].into(), DefaultRule::FullZp, cfg)?;
        Ok(g.z_p(p(2), cfg)? == parse_set("pts(2; 0)", cfg)?)
    }),
    ("Int(P,Z) and Int(Z) are Int(E,Z) for sets of integers", |cfg| {
        Ok(is_simple_integer_set_ring(&RingSpec::int_primes(), cfg)?.answer == TriState::Yes
            && is_simple_integer_set_ring(&RingSpec::int_z(), cfg)?.answer == TriState::Yes)
    }),
    ("a window of non-integers is not from a set of integers", |cfg| {
        let r = parse_ring("ring(full; 2: seq(2; 1/3, 1, 0, +lim))", cfg)?;
        Ok(is_simple_integer_set_ring(&r, cfg)?.answer == TriState::No)
    }),
    ("(X^2 - X)/2 is integer-valued on the closure of the primes at 2", |cfg| {
        is_integer_valued(&"(X^2 - X)/2".parse()?, &RingSpec::int_primes().z_p(p(2), cfg)?, cfg)
    }),
    ("Z minus -7 mod 72 is dense in Z_2 and Z_5", |cfg| {
        let e = parse_intset("Z \\ (-7 mod 72)")?;
        Ok(e.closure_in_zp(p(2), cfg)?.is_full() && e.closure_in_zp(p(5), cfg)?.is_full())
    }),
    ("CRT obstruction: product closure yes, adelic closure no at 65 mod 72", |cfg| {
        let e = parse_intset("Z \\ (-7 mod 72)")?;
        let pres = parse_pres("2: 1 mod 8; 3: 2 mod 9")?;
        let hat = adelic_closure_member(&pres, &e, cfg)?;
        Ok(product_closure_member(&pres, &e, cfg)?
            && !hat.member
            && hat.combined == Some(Congruence::of(65, 72))
            && closures_differ(&pres, &e, cfg)?.differ)
    }),
    ("1 mod 8 and 1 mod 9 are met by 1", |cfg| {
        let e = parse_intset("Z \\ (-7 mod 72)")?;
        let hat = adelic_closure_member(&parse_pres("2: 1 mod 8; 3: 1 mod 9")?, &e, cfg)?;
        Ok(hat.member && hat.witness.is_some_and(|w| e.contains(&w)))
    }),
];

pub fn run(cfg: &Config) -> Vec<CaseResult> {
    CASES
        .iter()
        .map(|(name, f)| match f(cfg) {
            Ok(true) => CaseResult { name, passed: true, detail: String::new() },
            Ok(false) => CaseResult { name, passed: false, detail: "wrong answer".into() },
            Err(e) => CaseResult { name, passed: false, detail: e.to_string() },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn corpus_passes() {
        let results = super::run(&crate::config::Config::default());
        let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(results.len() >= 30);
    }
}
