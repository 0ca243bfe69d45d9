//! Representations of an overring as an intersection of valuation-type
//! rings: `V_q` for irreducible `q` in a family `𝒫`, and `V_{p,α}` for `α`
//! in sets `E_p` given per prime.
//!
//! Containment of a single `V_q` reduces to one dichotomy: either `q` has a
//! root in some closed `E_p`, or infinitely many primes carry some `α ∈ E_p`
//! with `vp(q(α)) ≥ 1`. Failing both, `∏ p^{m_p}/q` is a rational function
//! that is integral on every `E_p` but not in `V_q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{factor, fmt_rat, rat_from_int, require_zp, Prime, Rat};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::irreducible::IrreduciblePoly;
use crate::ivp::{witness_rational_function, RationalWitness};
use crate::padic::PAdicSet;
use crate::poly::RatPoly;
use crate::ring::{decision_primes, PrimeFamily, RingSpec, TriState};
use crate::roots::{roots_in_set, RootCertificate};
use crate::rule::DefaultRule;

/// `R_{𝒫,(E_p)}`. With `all_min` the family is every irreducible `q`
/// without a root in any closed `E_p`, on top of those listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub nonunitary: Vec<IrreduciblePoly>,
    pub all_min: bool,
    pub unitary: BTreeMap<Prime, PAdicSet>,
    pub tail: DefaultRule,
}

impl PrimeFamily for Representation {
    fn explicit(&self) -> &BTreeMap<Prime, PAdicSet> {
        &self.unitary
    }
    fn rule(&self) -> &DefaultRule {
        &self.tail
    }
}

impl Representation {
    pub fn new(
        nonunitary: Vec<IrreduciblePoly>,
        all_min: bool,
        unitary: BTreeMap<Prime, PAdicSet>,
        tail: DefaultRule,
    ) -> Result<Representation> {
        for (&p, s) in &unitary {
            if s.prime() != p {
                return Err(Error::PrimeMismatch(p.get(), s.prime().get()));
            }
        }
        Ok(Representation { nonunitary, all_min, unitary, tail })
    }

    /// Every `Z_p(R)` as a representation: `𝒫 = ∅`, `E_p = Z_p(R)`.
    pub fn unitary_of(r: &RingSpec) -> Representation {
        Representation {
            nonunitary: Vec::new(),
            all_min: false,
            unitary: r.exceptional().clone(),
            tail: r.default_rule().clone(),
        }
    }

    pub fn lists(&self, q: &IrreduciblePoly) -> bool {
        self.nonunitary.iter().any(|x| x.coeffs() == q.coeffs())
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut qs: Vec<String> = self.nonunitary.iter().map(|q| q.to_string()).collect();
        if self.all_min {
            qs.push("all-min".into());
        }
        let es: Vec<String> = self.unitary.iter().map(|(p, s)| format!("{p}: {s}")).collect();
        write!(f, "rep(P = {{{}}}; E = {{{}}}; tail {})", qs.join(", "), es.join("; "), self.tail)
    }
}

/// Whether infinitely many tail primes see every polynomial: then no `V_q`
/// is ever needed.
fn tail_is_rich(rule: &DefaultRule, cfg: &Config) -> Result<bool> {
    Ok(match rule {
        DefaultRule::FullZp | DefaultRule::UnitsAndSelf => true,
        DefaultRule::FromIntegerSet(e) => e.finite_members(cfg)?.is_none(),
        DefaultRule::SinglePower(_) | DefaultRule::EmptySet => false,
    })
}

/// The polynomial ring a representation cuts out, whether the
/// representation equals it, and if not a `q` whose `V_q` is missing.
#[derive(Debug, Clone)]
pub struct RingOf {
    pub ring: RingSpec,
    pub polynomial: bool,
    pub missing: Option<IrreduciblePoly>,
}

pub fn ring_of(rep: &Representation, cfg: &Config) -> Result<RingOf> {
    let closures: BTreeMap<Prime, PAdicSet> = rep.unitary.iter().map(|(&p, s)| (p, s.closure())).collect();
    let ring = RingSpec::new(closures, rep.tail.clone(), cfg)?;
    if rep.all_min || tail_is_rich(&rep.tail, cfg)? {
        return Ok(RingOf { ring, polynomial: true, missing: None });
    }
    let missing = missing_minimal(&ring, &rep.nonunitary, cfg)?;
    Ok(RingOf { ring, polynomial: false, missing: Some(missing) })
}

/// A rootless `q` with only finitely many primes of positive value, not in
/// `listed`. Exists whenever the tail is poor (empty, a single power, or a
/// finite integer set).
fn missing_minimal(r: &RingSpec, listed: &[IrreduciblePoly], cfg: &Config) -> Result<IrreduciblePoly> {
    let window = r.exceptional();
    let finite_tail = match r.default_rule() {
        DefaultRule::FromIntegerSet(e) => e.finite_members(cfg)?.unwrap_or_default(),
        _ => Default::default(),
    };
    let fresh = |q: &IrreduciblePoly| !listed.iter().any(|x| x.coeffs() == q.coeffs());
    let rootless = |q: &IrreduciblePoly| -> Result<bool> {
        for s in window.values() {
            if !roots_in_set(q, s, cfg)?.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    // X + c: the tail root -c is negative, so never a prime power
    for c in 1..=64i64 {
        let neg = BigInt::from(-c);
        if finite_tail.contains(&neg) {
            continue;
        }
        let q = IrreduciblePoly::certify(&RatPoly::from_int_poly(&[BigInt::from(c), BigInt::one()]), cfg)?;
        if fresh(&q) && rootless(&q)? {
            return Ok(q);
        }
    }
    // X^2 - P·k with k prime to P: odd valuation at every window prime
    let pw: BigInt = window.keys().map(|p| p.big()).product();
    let mut k = BigInt::one();
    loop {
        let c = &pw * &k;
        let square = {
            let s = c.sqrt();
            &s * &s == c
        };
        if num_integer::Integer::gcd(&k, &pw).is_one() && !square {
            let q = IrreduciblePoly::certify(&RatPoly::from_int_poly(&[-c, BigInt::zero(), BigInt::one()]), cfg)?;
            if fresh(&q) && rootless(&q)? {
                return Ok(q);
            }
        }
        k += 1;
    }
}

/// Outcome of `R_{𝒫,(E_p)} = R`.
#[derive(Debug, Clone)]
pub struct RepresentationCheck {
    pub answer: TriState,
    /// First prime where `E_p` is not dense in `Z_p(R)`.
    pub not_dense_at: Option<Prime>,
    /// A `V_q` the family would need but lacks.
    pub missing: Option<IrreduciblePoly>,
}

pub fn representation_equals(rep: &Representation, r: &RingSpec, cfg: &Config) -> Result<RepresentationCheck> {
    let primes = decision_primes(&[rep, r], cfg)?;
    for &p in &primes {
        let e = rep.set_at(p, cfg)?;
        if !e.is_subset(&r.z_p(p, cfg)?)? {
            return Err(Error::Precondition(format!("E_{p} is not contained in Z_{p}(R)")));
        }
    }
    let mut not_dense_at = None;
    for &p in &primes {
        if !rep.set_at(p, cfg)?.is_dense_in(&r.z_p(p, cfg)?)? {
            not_dense_at = Some(p);
            break;
        }
    }
    let mut missing = None;
    if !rep.all_min && !tail_is_rich(r.default_rule(), cfg)? {
        missing = Some(missing_minimal(r, &rep.nonunitary, cfg)?);
    }
    let answer = TriState::from_bool(not_dense_at.is_none() && missing.is_none());
    Ok(RepresentationCheck { answer, not_dense_at, missing })
}

/// `V_{p,α} ⊇ R_{𝒫,(E_p)}` iff `α` lies in the closure of `E_p`.
pub fn unitary_contains(rep: &Representation, p: Prime, alpha: &Rat, cfg: &Config) -> Result<bool> {
    require_zp(alpha, p)?;
    Ok(rep.set_at(p, cfg)?.closure().contains(alpha))
}

/// `V_{p,α}` can be dropped iff `α` is not isolated in `E_p`.
pub fn superfluous_unitary(rep: &Representation, p: Prime, alpha: &Rat, cfg: &Config) -> Result<bool> {
    let e = rep.set_at(p, cfg)?;
    if !e.member(alpha)? {
        return Err(Error::Precondition(format!("{} is not in E_{p}", fmt_rat(alpha))));
    }
    Ok(!e.isolated_points().contains(alpha))
}

/// Answer about some `V_q`, with the evidence behind it.
#[derive(Debug, Clone)]
pub struct NonunitaryAnswer {
    pub answer: TriState,
    pub reason: String,
    pub root: Option<RootCertificate>,
    pub witness: Option<RationalWitness>,
}

impl NonunitaryAnswer {
    fn yes(reason: impl Into<String>) -> Self {
        NonunitaryAnswer { answer: TriState::Yes, reason: reason.into(), root: None, witness: None }
    }
}

/// `V_q ⊇ R_{𝒫,(E_p)}`.
pub fn nonunitary_contains(rep: &Representation, q: &IrreduciblePoly, cfg: &Config) -> Result<NonunitaryAnswer> {
    if rep.lists(q) {
        return Ok(NonunitaryAnswer::yes(format!("{q} is in the family")));
    }
    let a = unitary_part_contains(rep, q, cfg)?;
    if rep.all_min && a.answer != TriState::Yes {
        return Ok(NonunitaryAnswer::yes(format!("{q} has no root in any closed E_p, so it is among the minimal family")));
    }
    Ok(a)
}

/// Whether `V_q` may be dropped from the family, which it must belong to.
pub fn superfluous_nonunitary(rep: &Representation, q: &IrreduciblePoly, cfg: &Config) -> Result<NonunitaryAnswer> {
    let member = rep.lists(q) || (rep.all_min && !has_root_somewhere(rep, q, cfg)?);
    if !member {
        return Err(Error::Precondition(format!("{q} is not in the family")));
    }
    // no other V_q' contains V_q, so only the unitary part can replace it
    unitary_part_contains(rep, q, cfg)
}

fn rational_root(q: &IrreduciblePoly) -> Option<Rat> {
    let c = q.coeffs();
    (c.len() == 2).then(|| Rat::new(-c[0].clone(), c[1].clone()))
}

/// Whether `q` has a root in the closure of some `E_p`.
fn has_root_somewhere(rep: &Representation, q: &IrreduciblePoly, cfg: &Config) -> Result<bool> {
    for s in rep.unitary.values() {
        if !roots_in_set(q, &s.closure(), cfg)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(match &rep.tail {
        // a root mod p for infinitely many p lifts once p is past the discriminant
        DefaultRule::FullZp => true,
        DefaultRule::FromIntegerSet(e) => match e.finite_members(cfg)? {
            None => true,
            Some(s) => s.iter().any(|n| q.eval(&rat_from_int(n)).is_zero()),
        },
        // nonzero roots mod p are units; only X escapes
        DefaultRule::UnitsAndSelf => !q.coeffs()[0].is_zero(),
        DefaultRule::SinglePower(e) => rational_root(q).is_some_and(|r| prime_power_outside(&r, *e, rep)),
        DefaultRule::EmptySet => false,
    })
}

/// `r = p^e` for a prime `p` outside the explicit window.
fn prime_power_outside(r: &Rat, e: u32, rep: &Representation) -> bool {
    if !r.is_integer() || !r.is_positive() {
        return false;
    }
    let n = r.to_integer();
    let root = n.nth_root(e);
    if num_traits::pow(root.clone(), e as usize) != n {
        return false;
    }
    let Ok(u) = u64::try_from(&root) else { return false };
    crate::arith::is_prime_u64(u) && !rep.unitary.contains_key(&Prime::new(u).expect("checked prime"))
}

/// Decides `V_q ⊇ ⋂ V_{p,α}` over the closed `E_p`, ignoring `𝒫`.
fn unitary_part_contains(rep: &Representation, q: &IrreduciblePoly, cfg: &Config) -> Result<NonunitaryAnswer> {
    for (p, s) in &rep.unitary {
        if let Some(root) = roots_in_set(q, &s.closure(), cfg)?.into_iter().next() {
            return Ok(NonunitaryAnswer {
                answer: TriState::Yes,
                reason: format!("{q} has a root in the closure of E_{p}"),
                root: Some(root),
                witness: None,
            });
        }
    }
    let q0 = q.coeffs()[0].clone();
    // tail primes with α and vp(q(α)) ≥ 1, when only finitely many
    let extra: BTreeMap<Prime, PAdicSet> = match &rep.tail {
        DefaultRule::FullZp => {
            return Ok(NonunitaryAnswer::yes(format!("{q} has roots modulo infinitely many primes")));
        }
        DefaultRule::UnitsAndSelf => {
            return Ok(NonunitaryAnswer::yes(format!(
                "{q} vanishes modulo infinitely many primes p at a unit or at p itself"
            )));
        }
        DefaultRule::EmptySet => BTreeMap::new(),
        DefaultRule::SinglePower(e) => {
            if q0.is_zero() {
                return Ok(NonunitaryAnswer::yes(format!("{q}(p^{e}) is divisible by every prime p")));
            }
            if let Some(r) = rational_root(q).filter(|r| prime_power_outside(r, *e, rep)) {
                return Ok(NonunitaryAnswer::yes(format!("{q} vanishes at the prime power {}", fmt_rat(&r))));
            }
            match divisor_primes(&q0, cfg) {
                Some(ps) => tail_sets(rep, ps, cfg)?,
                None => return no_without_witness(q, "the constant term could not be factored"),
            }
        }
        DefaultRule::FromIntegerSet(e) => match e.finite_members(cfg)? {
            None => {
                return Ok(NonunitaryAnswer::yes(format!(
                    "the tail sets are all of Z_p for infinitely many p, where {q} has roots"
                )));
            }
            Some(s) => {
                if let Some(n) = s.iter().find(|n| q.eval(&rat_from_int(n)).is_zero()) {
                    return Ok(NonunitaryAnswer::yes(format!("{q} vanishes at the tail point {n}")));
                }
                let mut ps = Vec::new();
                for n in &s {
                    match divisor_primes(&q.eval(&rat_from_int(n)).to_integer(), cfg) {
                        Some(found) => ps.extend(found),
                        None => return no_without_witness(q, "a value of q on the tail could not be factored"),
                    }
                }
                tail_sets(rep, ps, cfg)?
            }
        },
    };
    let mut family: BTreeMap<Prime, PAdicSet> = rep.unitary.iter().map(|(&p, s)| (p, s.closure())).collect();
    family.extend(extra);
    let witness = witness_rational_function(q, &family, cfg)?;
    Ok(NonunitaryAnswer {
        answer: TriState::No,
        reason: format!("{q} has no root in any closed E_p and only finitely many primes give it positive value"),
        root: None,
        witness: Some(witness),
    })
}

fn no_without_witness(q: &IrreduciblePoly, why: &str) -> Result<NonunitaryAnswer> {
    Ok(NonunitaryAnswer {
        answer: TriState::No,
        reason: format!("{q} has no root and only finitely many primes give it positive value; {why}, so no witness"),
        root: None,
        witness: None,
    })
}

fn divisor_primes(n: &BigInt, cfg: &Config) -> Option<Vec<Prime>> {
    Some(factor(&n.abs(), cfg.prime_scan_bound)?.into_iter().map(|(p, _)| p).collect())
}

fn tail_sets(rep: &Representation, ps: Vec<Prime>, cfg: &Config) -> Result<BTreeMap<Prime, PAdicSet>> {
    let mut out = BTreeMap::new();
    for p in ps {
        if !rep.unitary.contains_key(&p) {
            out.insert(p, rep.tail.instantiate(p, cfg)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::padic::{Ball, SeqWithLimit};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn q(s: &str) -> IrreduciblePoly {
        IrreduciblePoly::certify(&s.parse().unwrap(), &Config::default()).unwrap()
    }

    fn rep(nonunitary: Vec<IrreduciblePoly>, all_min: bool, unitary: Vec<(u64, PAdicSet)>, tail: DefaultRule) -> Representation {
        Representation::new(nonunitary, all_min, unitary.into_iter().map(|(n, s)| (p(n), s)).collect(), tail).unwrap()
    }

    #[test]
    fn ring_of_examples() {
        let cfg = Config::default();
        let r = ring_of(&rep(vec![], true, vec![], DefaultRule::EmptySet), &cfg).unwrap();
        assert!(r.polynomial);
        assert_eq!(r.ring, RingSpec::q_x());
        let r = ring_of(&rep(vec![], false, vec![], DefaultRule::FullZp), &cfg).unwrap();
        assert!(r.polynomial);
        assert_eq!(r.ring, RingSpec::int_z());
        let ones = PAdicSet::points(p(2), [rat(1)]).unwrap();
        let r = ring_of(&rep(vec![], false, vec![(2, ones)], DefaultRule::EmptySet), &cfg).unwrap();
        assert!(!r.polynomial);
        assert_eq!(r.missing.unwrap().to_string(), "X + 1");
        let full2 = PAdicSet::full(p(2));
        let r = ring_of(&rep(vec![], false, vec![(2, full2)], DefaultRule::EmptySet), &cfg).unwrap();
        assert_eq!(r.missing.unwrap().to_string(), "X^2 - 2");
    }

    #[test]
    fn nonunitary_examples() {
        let cfg = Config::default();
        let a = nonunitary_contains(&rep(vec![], false, vec![], DefaultRule::SinglePower(1)), &q("X"), &cfg).unwrap();
        assert_eq!(a.answer, TriState::Yes);
        let ones = PAdicSet::points(p(2), [rat(1)]).unwrap();
        let a = nonunitary_contains(&rep(vec![], false, vec![(2, ones.clone())], DefaultRule::EmptySet), &q("X"), &cfg)
            .unwrap();
        assert_eq!(a.answer, TriState::No);
        let w = a.witness.unwrap();
        assert_eq!(w.to_string(), "1/(X)");
        assert!(w.verify(&[(p(2), ones)].into(), &cfg).unwrap());
        let ball = PAdicSet::ball(Ball::new(p(2), &rat(1), 2).unwrap());
        let a = nonunitary_contains(&rep(vec![], false, vec![(2, ball)], DefaultRule::EmptySet), &q("X - 1"), &cfg)
            .unwrap();
        assert_eq!(a.answer, TriState::Yes);
        a.root.unwrap().validate(&q("X - 1")).unwrap();
    }

    #[test]
    fn power_tail_witness_uses_constant_term() {
        let cfg = Config::default();
        let r = rep(vec![], false, vec![], DefaultRule::SinglePower(1));
        let a = nonunitary_contains(&r, &q("X - 6"), &cfg).unwrap();
        assert_eq!(a.answer, TriState::No);
        let w = a.witness.unwrap();
        assert_eq!(w.exponents.keys().map(|p| p.get()).collect::<Vec<_>>(), vec![2, 3]);
        // X - 6 at 2 has value -4, at 3 value -3
        assert_eq!(w.numerator, int(12));
        let a = nonunitary_contains(&r, &q("X - 5"), &cfg).unwrap();
        assert_eq!(a.answer, TriState::Yes);
    }

    #[test]
    fn superfluity() {
        let cfg = Config::default();
        let zero = PAdicSet::points(p(2), [rat(0)]).unwrap();
        let r = rep(vec![q("X")], false, vec![(2, zero)], DefaultRule::EmptySet);
        assert_eq!(superfluous_nonunitary(&r, &q("X"), &cfg).unwrap().answer, TriState::Yes);
        let r = rep(vec![q("X^2 + 1")], false, vec![], DefaultRule::EmptySet);
        assert_eq!(superfluous_nonunitary(&r, &q("X^2 + 1"), &cfg).unwrap().answer, TriState::No);
        assert!(matches!(superfluous_nonunitary(&r, &q("X"), &cfg), Err(Error::Precondition(_))));
        let r = rep(vec![q("X")], false, vec![], DefaultRule::SinglePower(1));
        assert_eq!(superfluous_nonunitary(&r, &q("X"), &cfg).unwrap().answer, TriState::Yes);
        let r = rep(vec![], true, vec![], DefaultRule::UnitsAndSelf);
        assert_eq!(superfluous_nonunitary(&r, &q("X"), &cfg).unwrap().answer, TriState::Yes);
        assert!(superfluous_nonunitary(&r, &q("X - 1"), &cfg).is_err());

        let seq = PAdicSet::seq(SeqWithLimit::new(p(2), rat(0), rat(1), 0, true).unwrap());
        let r = rep(vec![], false, vec![(2, seq)], DefaultRule::EmptySet);
        assert!(superfluous_unitary(&r, p(2), &rat(0), &cfg).unwrap());
        assert!(!superfluous_unitary(&r, p(2), &rat(4), &cfg).unwrap());
        assert!(superfluous_unitary(&r, p(2), &rat(3), &cfg).is_err());
        assert!(unitary_contains(&r, p(2), &rat(0), &cfg).unwrap());
        assert!(!unitary_contains(&r, p(2), &rat(3), &cfg).unwrap());
    }

    #[test]
    fn representation_check() {
        let cfg = Config::default();
        let ok = representation_equals(&rep(vec![], false, vec![], DefaultRule::FullZp), &RingSpec::int_z(), &cfg).unwrap();
        assert_eq!(ok.answer, TriState::Yes);
        let qx = representation_equals(&rep(vec![], false, vec![], DefaultRule::EmptySet), &RingSpec::q_x(), &cfg).unwrap();
        assert_eq!(qx.answer, TriState::No);
        assert!(qx.missing.is_some());
        let qx = representation_equals(&rep(vec![], true, vec![], DefaultRule::EmptySet), &RingSpec::q_x(), &cfg).unwrap();
        assert_eq!(qx.answer, TriState::Yes);
        let sparse = PAdicSet::points(p(2), [rat(0)]).unwrap();
        let r = representation_equals(&rep(vec![], false, vec![(2, sparse)], DefaultRule::FullZp), &RingSpec::int_z(), &cfg)
            .unwrap();
        assert_eq!(r.answer, TriState::No);
        assert_eq!(r.not_dense_at, Some(p(2)));
        let too_big = rep(vec![], false, vec![], DefaultRule::FullZp);
        assert!(matches!(representation_equals(&too_big, &RingSpec::q_x(), &cfg), Err(Error::Precondition(_))));
    }
}
