//! Polynomial overrings of `Int(Z)` described by their sets `Z_p(R)`: a
//! finite window of explicit primes plus a [`DefaultRule`] for the rest.
//!
//! Every rule behaves uniformly beyond a small bound, so a statement about
//! all primes is decided on the explicit primes, every prime up to that
//! bound, and one representative prime above it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::adelic::Base;
use crate::arith::{factor, fmt_rat, next_prime, primes_up_to, Prime, Rat};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::ivp::is_integer_valued;
use crate::padic::{PAdicSet, SeqWithLimit};
use crate::poly::RatPoly;
use crate::rule::DefaultRule;

/// Three-valued answer; `Unknown` carries the prime bound that was explored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriState {
    Yes,
    No,
    Unknown(u64),
}

impl TriState {
    pub fn from_bool(b: bool) -> TriState {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == TriState::Yes
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriState::Yes => write!(f, "yes"),
            TriState::No => write!(f, "no"),
            TriState::Unknown(b) => write!(f, "unknown (primes explored up to {b})"),
        }
    }
}

impl Serialize for TriState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TriState::Yes => s.serialize_str("yes"),
            TriState::No => s.serialize_str("no"),
            TriState::Unknown(b) => s.serialize_str(&format!("unknown({b})")),
        }
    }
}

/// A finite window of explicit sets plus a rule elsewhere.
pub trait PrimeFamily {
    fn explicit(&self) -> &BTreeMap<Prime, PAdicSet>;
    fn rule(&self) -> &DefaultRule;

    fn set_at(&self, p: Prime, cfg: &Config) -> Result<PAdicSet> {
        match self.explicit().get(&p) {
            Some(s) => Ok(s.clone()),
            None => self.rule().instantiate(p, cfg),
        }
    }
}

/// Beyond this bound the rule's instances all look alike.
pub fn uniformity_bound(rule: &DefaultRule) -> u64 {
    match rule {
        DefaultRule::FullZp | DefaultRule::EmptySet => 2,
        DefaultRule::UnitsAndSelf | DefaultRule::SinglePower(_) => 3,
        DefaultRule::FromIntegerSet(e) => {
            let mut b = 3u64;
            for p in e.period_primes() {
                b = b.max(p.get());
            }
            let finite: Vec<&BigInt> = match e.base() {
                Base::Finite(items) => items.iter().chain(e.extra()).collect(),
                Base::All => e.extra().iter().collect(),
            };
            for n in finite {
                b = b.max(n.abs().to_u64().unwrap_or(u64::MAX));
            }
            b
        }
    }
}

/// Primes on which a statement about every prime is decided.
pub fn decision_primes(families: &[&dyn PrimeFamily], cfg: &Config) -> Result<Vec<Prime>> {
    let bound = families.iter().map(|f| uniformity_bound(f.rule())).max().unwrap_or(2);
    if bound > cfg.prime_scan_bound {
        return Err(Error::Unsupported(format!(
            "comparing these default rules needs every prime up to {bound}, beyond the prime-scan bound {}",
            cfg.prime_scan_bound
        )));
    }
    let mut primes: BTreeSet<Prime> = primes_up_to(bound).into_iter().collect();
    for f in families {
        primes.extend(f.explicit().keys().copied());
    }
    let mut rep = next_prime(bound);
    while families.iter().any(|f| f.explicit().contains_key(&rep)) {
        rep = next_prime(rep.get());
    }
    primes.insert(rep);
    Ok(primes.into_iter().collect())
}

/// The overring `R` with `Z_p(R)` given per prime; sets are closed and
/// canonical, and explicit entries equal to the rule's instance are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    exceptional: BTreeMap<Prime, PAdicSet>,
    default: DefaultRule,
}

impl PrimeFamily for RingSpec {
    fn explicit(&self) -> &BTreeMap<Prime, PAdicSet> {
        &self.exceptional
    }
    fn rule(&self) -> &DefaultRule {
        &self.default
    }
}

impl RingSpec {
    pub fn new(exceptional: BTreeMap<Prime, PAdicSet>, default: DefaultRule, cfg: &Config) -> Result<RingSpec> {
        let mut kept = BTreeMap::new();
        for (p, set) in exceptional {
            if set.prime() != p {
                return Err(Error::PrimeMismatch(p.get(), set.prime().get()));
            }
            let closed = set.closure();
            if closed != default.instantiate(p, cfg)? {
                kept.insert(p, closed);
            }
        }
        Ok(RingSpec { exceptional: kept, default })
    }

    /// `Int(Z)`.
    pub fn int_z() -> RingSpec {
        RingSpec { exceptional: BTreeMap::new(), default: DefaultRule::FullZp }
    }

    /// `Int(P, Z)` for the set `P` of primes.
    pub fn int_primes() -> RingSpec {
        RingSpec { exceptional: BTreeMap::new(), default: DefaultRule::UnitsAndSelf }
    }

    /// `Q[X]`.
    pub fn q_x() -> RingSpec {
        RingSpec { exceptional: BTreeMap::new(), default: DefaultRule::EmptySet }
    }

    pub fn exceptional(&self) -> &BTreeMap<Prime, PAdicSet> {
        &self.exceptional
    }

    pub fn default_rule(&self) -> &DefaultRule {
        &self.default
    }

    pub fn z_p(&self, p: Prime, cfg: &Config) -> Result<PAdicSet> {
        self.set_at(p, cfg)
    }

    /// `f ∈ R`, decided at the primes dividing the denominator of `f`.
    pub fn contains_poly(&self, f: &RatPoly, cfg: &Config) -> Result<bool> {
        let primes = factor(f.denominator(), cfg.prime_scan_bound).ok_or_else(|| {
            Error::Unsupported(format!("cannot factor the denominator {}", f.denominator()))
        })?;
        for (p, _) in primes {
            if !is_integer_valued(f, &self.z_p(p, cfg)?, cfg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exceptional.iter().map(|(p, s)| format!("{p}: {s}")).collect();
        if parts.is_empty() {
            write!(f, "ring({})", self.default)
        } else {
            write!(f, "ring({}; {})", self.default, parts.join("; "))
        }
    }
}

/// `R1 ⊆ R2`, i.e. `Z_p(R2) ⊆ Z_p(R1)` at every prime.
pub fn ring_contains(r1: &RingSpec, r2: &RingSpec, cfg: &Config) -> Result<bool> {
    for p in decision_primes(&[r1, r2], cfg)? {
        if !r2.z_p(p, cfg)?.is_subset(&r1.z_p(p, cfg)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn ring_equal(r1: &RingSpec, r2: &RingSpec, cfg: &Config) -> Result<bool> {
    for p in decision_primes(&[r1, r2], cfg)? {
        if r1.z_p(p, cfg)? != r2.z_p(p, cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `R_(p)`: keep `Z_p(R)` and nothing elsewhere.
pub fn localize(r: &RingSpec, p: Prime, cfg: &Config) -> Result<RingSpec> {
    RingSpec::new([(p, r.z_p(p, cfg)?)].into(), DefaultRule::EmptySet, cfg)
}

/// The overring whose localizations are the given parts.
pub fn globalize(parts: BTreeMap<Prime, PAdicSet>, tail: DefaultRule, cfg: &Config) -> Result<RingSpec> {
    RingSpec::new(parts, tail, cfg)
}

/// Minimal ring extensions at `p`: one per isolated point of `Z_p(R)`,
/// with sequence tails reported as families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalExtensions {
    pub p: Prime,
    pub points: Vec<Rat>,
    pub families: Vec<SeqWithLimit>,
}

impl MinimalExtensions {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.families.is_empty()
    }

    /// The extension dropping `alpha` (which must be isolated).
    pub fn extension_for(&self, r: &RingSpec, alpha: &Rat, cfg: &Config) -> Result<RingSpec> {
        let mut ex = r.exceptional.clone();
        ex.insert(self.p, r.z_p(self.p, cfg)?.remove_point(alpha)?);
        RingSpec::new(ex, r.default.clone(), cfg)
    }

    /// The `n`-th member of the `i`-th family.
    pub fn family_member(&self, r: &RingSpec, i: usize, n: u32, cfg: &Config) -> Result<(Rat, RingSpec)> {
        let s = self.families.get(i).ok_or_else(|| Error::Invalid(format!("no family {i}")))?;
        let alpha = s.element(s.start() + n);
        let ext = self.extension_for(r, &alpha, cfg)?;
        Ok((alpha, ext))
    }

    pub fn describe(&self) -> Vec<String> {
        let mut out: Vec<String> = self.points.iter().map(|x| format!("drop {}", fmt_rat(x))).collect();
        for s in &self.families {
            out.push(format!("drop any element of {s}"));
        }
        out
    }
}

pub fn minimal_extensions(r: &RingSpec, p: Prime, cfg: &Config) -> Result<MinimalExtensions> {
    let iso = r.z_p(p, cfg)?.isolated_points();
    Ok(MinimalExtensions { p, points: iso.points.into_iter().collect(), families: iso.tails })
}

/// Irredundant representations exist iff at every prime the isolated points
/// of `Z_p(R)` are dense in it.
pub fn has_irredundant_representation(r: &RingSpec, cfg: &Config) -> Result<TriState> {
    for p in decision_primes(&[r], cfg)? {
        let z = r.z_p(p, cfg)?;
        if !z.isolated_points().as_set().is_dense_in(&z)? {
            return Ok(TriState::No);
        }
    }
    Ok(TriState::Yes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::padic::Ball;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn powers_of_two() -> PAdicSet {
        PAdicSet::seq(SeqWithLimit::new(p(2), rat(0), rat(1), 0, true).unwrap())
    }

    #[test]
    fn z_p_examples() {
        let cfg = Config::default();
        assert!(RingSpec::int_z().z_p(p(7), &cfg).unwrap().is_full());
        let u = RingSpec::int_primes().z_p(p(3), &cfg).unwrap();
        assert!(u.contains(&rat(3)) && u.contains(&rat(4)) && !u.contains(&rat(6)));
        let r = RingSpec::new([(p(2), PAdicSet::points(p(2), [rat(0)]).unwrap())].into(), DefaultRule::FullZp, &cfg)
            .unwrap();
        assert_eq!(r.z_p(p(2), &cfg).unwrap(), PAdicSet::points(p(2), [rat(0)]).unwrap());
    }

    #[test]
    fn containment_and_equality() {
        let cfg = Config::default();
        let z = RingSpec::int_z();
        let pr = RingSpec::int_primes();
        assert!(ring_contains(&z, &pr, &cfg).unwrap());
        assert!(!ring_contains(&pr, &z, &cfg).unwrap());
        assert!(ring_contains(&pr, &pr, &cfg).unwrap());
        let padded = RingSpec::new([(p(2), PAdicSet::full(p(2)))].into(), DefaultRule::FullZp, &cfg).unwrap();
        assert_eq!(padded, z);
        assert!(ring_equal(&padded, &z, &cfg).unwrap());
        let a = RingSpec::new([(p(2), PAdicSet::points(p(2), [rat(0)]).unwrap())].into(), DefaultRule::EmptySet, &cfg)
            .unwrap();
        let b = RingSpec::new([(p(2), PAdicSet::points(p(2), [rat(1)]).unwrap())].into(), DefaultRule::EmptySet, &cfg)
            .unwrap();
        assert!(!ring_equal(&a, &b, &cfg).unwrap());
        // a non-closed input is stored closed
        let open = PAdicSet::seq(SeqWithLimit::new(p(2), rat(0), rat(1), 0, false).unwrap());
        let c = RingSpec::new([(p(2), open)].into(), DefaultRule::EmptySet, &cfg).unwrap();
        let d = RingSpec::new([(p(2), powers_of_two())].into(), DefaultRule::EmptySet, &cfg).unwrap();
        assert!(ring_equal(&c, &d, &cfg).unwrap());
    }

    #[test]
    fn rules_agreeing_everywhere_are_equal() {
        let cfg = Config::default();
        let all = RingSpec::new(
            BTreeMap::new(),
            DefaultRule::FromIntegerSet(crate::adelic::IntegerSet::all()),
            &cfg,
        )
        .unwrap();
        assert!(ring_equal(&all, &RingSpec::int_z(), &cfg).unwrap());
    }

    #[test]
    fn localization() {
        let cfg = Config::default();
        let l = localize(&RingSpec::int_z(), p(3), &cfg).unwrap();
        assert_eq!(l.exceptional().len(), 1);
        assert_eq!(l.default_rule(), &DefaultRule::EmptySet);
        assert_eq!(localize(&l, p(3), &cfg).unwrap(), l);
        let l = localize(&RingSpec::int_primes(), p(2), &cfg).unwrap();
        let z2 = l.z_p(p(2), &cfg).unwrap();
        assert!(z2.contains(&rat(2)) && z2.contains(&rat(1)) && !z2.contains(&rat(4)));
        let g = globalize([(p(2), PAdicSet::points(p(2), [rat(0)]).unwrap())].into(), DefaultRule::FullZp, &cfg)
            .unwrap();
        assert_eq!(localize(&g, p(2), &cfg).unwrap().z_p(p(2), &cfg).unwrap().point_set().len(), 1);
        assert_eq!(globalize(BTreeMap::new(), DefaultRule::FullZp, &cfg).unwrap(), RingSpec::int_z());
    }

    #[test]
    fn extensions_and_irredundance() {
        let cfg = Config::default();
        let r = RingSpec::new([(p(2), powers_of_two())].into(), DefaultRule::EmptySet, &cfg).unwrap();
        let m = minimal_extensions(&r, p(2), &cfg).unwrap();
        assert!(m.points.is_empty());
        assert_eq!(m.families.len(), 1);
        let (alpha, ext) = m.family_member(&r, 0, 3, &cfg).unwrap();
        assert_eq!(alpha, rat(8));
        assert!(ring_contains(&r, &ext, &cfg).unwrap());
        assert!(!ring_equal(&r, &ext, &cfg).unwrap());
        let ball = RingSpec::new(
            [(p(2), PAdicSet::ball(Ball::new(p(2), &rat(1), 2).unwrap()))].into(),
            DefaultRule::EmptySet,
            &cfg,
        )
        .unwrap();
        assert!(minimal_extensions(&ball, p(2), &cfg).unwrap().is_empty());

        assert_eq!(has_irredundant_representation(&RingSpec::int_z(), &cfg).unwrap(), TriState::No);
        assert_eq!(has_irredundant_representation(&r, &cfg).unwrap(), TriState::Yes);
        assert_eq!(has_irredundant_representation(&RingSpec::int_primes(), &cfg).unwrap(), TriState::No);
    }

    #[test]
    fn polynomial_membership() {
        let cfg = Config::default();
        let f: RatPoly = "(X^2 - X)/2".parse().unwrap();
        assert!(RingSpec::int_z().contains_poly(&f, &cfg).unwrap());
        assert!(RingSpec::int_primes().contains_poly(&f, &cfg).unwrap());
        let g: RatPoly = "X/2".parse().unwrap();
        assert!(!RingSpec::int_z().contains_poly(&g, &cfg).unwrap());
        assert!(RingSpec::q_x().contains_poly(&g, &cfg).unwrap());
    }
}
