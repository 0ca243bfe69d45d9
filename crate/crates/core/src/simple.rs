//! Whether an overring is `Int(E, Z)` for a set of integers `E`.
//!
//! The only candidate is `E = ⋂_p (Z_p(R) ∩ Z)`, and it works iff `E` is
//! dense in every `Z_p(R)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{fmt_rat, inv_mod, modulo, primes_up_to, rat_from_int, Prime, Rat};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::padic::{Ball, PAdicSet, SeqWithLimit};
use crate::ring::{RingSpec, TriState};
use crate::rule::DefaultRule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleAnswer {
    pub answer: TriState,
    pub reason: String,
}

fn answer(answer: TriState, reason: impl Into<String>) -> Result<SimpleAnswer> {
    Ok(SimpleAnswer { answer, reason: reason.into() })
}

pub fn is_simple_integer_set_ring(r: &RingSpec, cfg: &Config) -> Result<SimpleAnswer> {
    match r.default_rule() {
        DefaultRule::EmptySet => {
            if r.exceptional().is_empty() {
                answer(TriState::Yes, "R = Q[X] = Int(∅, Z)")
            } else {
                answer(TriState::No, "E is empty but some Z_p(R) is not")
            }
        }
        DefaultRule::SinglePower(e) => answer(
            TriState::No,
            format!("the integers p^{e} differ from prime to prime, so E is empty while every Z_p(R) is not"),
        ),
        DefaultRule::FromIntegerSet(set) if set.finite_members(cfg)?.is_some() => {
            if r.exceptional().is_empty() {
                answer(TriState::Yes, "R = Int(S, Z) for the finite tail set S")
            } else {
                let p = r.exceptional().keys().next().expect("nonempty");
                answer(TriState::No, format!("E is finite and would have to equal both Z_{p}(R) and the tail set"))
            }
        }
        DefaultRule::UnitsAndSelf => units_tail(r, cfg),
        DefaultRule::FullZp | DefaultRule::FromIntegerSet(_) => full_tail(r, cfg),
    }
}

fn window(r: &RingSpec) -> BTreeSet<Prime> {
    let mut w: BTreeSet<Prime> = r.exceptional().keys().copied().collect();
    if let DefaultRule::FromIntegerSet(e) = r.default_rule() {
        w.extend(e.period_primes());
    }
    w
}

/// Tail `{ℓ} ∪ units`: `E` is the primes outside the window, the `±` products
/// of window primes, cut down by each window set.
fn units_tail(r: &RingSpec, cfg: &Config) -> Result<SimpleAnswer> {
    let w = window(r);
    if w.is_empty() {
        return answer(TriState::Yes, "R = Int(E, Z) with E the primes together with ±1");
    }
    for &p in &w {
        let z = r.z_p(p, cfg)?;
        for u in 1..p.get() {
            if !PAdicSet::ball(Ball::from_int(p, &BigInt::from(u), 1)).is_subset(&z)? {
                // every tail prime ℓ is isolated in Z_ℓ(R), so it must lie in E
                for l in primes_up_to(cfg.prime_scan_bound) {
                    if !w.contains(&l) && !z.contains(&rat_from_int(&l.big())) {
                        return answer(
                            TriState::No,
                            format!("the prime {l} must be in E but is not in Z_{p}(R)"),
                        );
                    }
                }
                return answer(TriState::Unknown(cfg.prime_scan_bound), "no tail prime outside the units part was found");
            }
        }
    }
    let smooth = |x: &Rat| -> bool {
        if !x.is_integer() || x.is_zero() {
            return false;
        }
        let mut n = x.to_integer().abs();
        for p in &w {
            while n.is_multiple_of(&p.big()) {
                n /= p.big();
            }
        }
        n.is_one()
    };
    for &p in &w {
        let z = r.z_p(p, cfg)?;
        // away from the units, only ± window-smooth integers are in E
        if z.balls().iter().any(|b| b.depth() == 0 || modulo(b.center(), &p.big()).is_zero()) {
            if w.len() == 1 {
                return answer(TriState::No, format!("E meets pZ_{p} only in ±{p}^k, not dense in a ball of Z_{p}(R)"));
            }
            return answer(TriState::Unknown(cfg.prime_scan_bound), format!("density of window-smooth integers in a ball of Z_{p}(R) is not decided"));
        }
        let iso = z.isolated_points();
        for x in &iso.points {
            if !in_unit_part(x, p) && !(smooth(x) && in_others(r, &w, p, x, cfg)?) {
                return answer(TriState::No, format!("the isolated point {} of Z_{p}(R) is not in E", fmt_rat(x)));
            }
        }
        for s in &iso.tails {
            for n in 0..64 {
                let x = s.element(s.start() + n);
                if !in_unit_part(&x, p) && !(smooth(&x) && in_others(r, &w, p, &x, cfg)?) {
                    return answer(TriState::No, format!("the isolated point {} of Z_{p}(R) is not in E", fmt_rat(&x)));
                }
            }
            // a·p^n stays a unit at every other window prime when a is
            let ok = s.limit().is_zero()
                && smooth(s.scale())
                && w.iter().all(|&q| q == p || in_unit_part(s.scale(), q));
            if !ok {
                return answer(TriState::Unknown(cfg.prime_scan_bound), format!("membership in E of every element of {s} is not decided"));
            }
        }
    }
    answer(TriState::Yes, "primes outside the window are dense in every unit group, and the remaining isolated points lie in E")
}

fn in_unit_part(x: &Rat, p: Prime) -> bool {
    crate::arith::vp(x, p) == crate::arith::Valuation::Finite(0)
}

fn in_others(r: &RingSpec, w: &BTreeSet<Prime>, p: Prime, x: &Rat, cfg: &Config) -> Result<bool> {
    for &q in w {
        if q != p && !r.z_p(q, cfg)?.contains(x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Tail `Z_ℓ`: ball parts meet across the window by CRT, so everything
/// hinges on the isolated points.
fn full_tail(r: &RingSpec, cfg: &Config) -> Result<SimpleAnswer> {
    let w = window(r);
    let sets: Vec<(Prime, PAdicSet)> = w.iter().map(|&p| Ok((p, r.z_p(p, cfg)?))).collect::<Result<_>>()?;
    if let Some((p, _)) = sets.iter().find(|(_, z)| z.is_empty()) {
        return answer(TriState::No, format!("Z_{p}(R) is empty, so E is empty while Z_ℓ(R) = Z_ℓ elsewhere"));
    }
    if let Some((p, z)) = sets.iter().find(|(_, z)| z.balls().is_empty()) {
        return thin_window(*p, z, &w, cfg);
    }
    for (p, z) in &sets {
        let iso = z.isolated_points();
        for x in &iso.points {
            if !x.is_integer() {
                return answer(TriState::No, format!("the isolated point {} of Z_{p}(R) is not an integer", fmt_rat(x)));
            }
            if let Some(q) = excluded_by(&sets, *p, x) {
                return answer(TriState::No, format!("the isolated point {} of Z_{p}(R) is not in Z_{q}(R)", fmt_rat(x)));
            }
        }
        for s in &iso.tails {
            if let Some(a) = tail_elements_in_e(s, *p, &sets, cfg)? {
                return Ok(a);
            }
        }
    }
    answer(TriState::Yes, "congruence parts meet by CRT and every isolated point lies in E")
}

fn excluded_by(sets: &[(Prime, PAdicSet)], p: Prime, x: &Rat) -> Option<Prime> {
    sets.iter().find(|(q, z)| *q != p && !z.contains(x)).map(|(q, _)| *q)
}

/// Checks one period of the sequence's elements against integrality and
/// the ball parts elsewhere; `None` means all elements are in `E`.
fn tail_elements_in_e(s: &SeqWithLimit, p: Prime, sets: &[(Prime, PAdicSet)], cfg: &Config) -> Result<Option<SimpleAnswer>> {
    let den = s.limit().denom().lcm(s.scale().denom());
    let mut modulus = den.clone();
    for (q, z) in sets {
        if *q != p {
            let k = z.balls().iter().map(|b| b.depth()).max().unwrap_or(0);
            modulus *= q.pow(k);
        }
    }
    let period = order(&p.big(), &modulus, cfg)?;
    let fails = |x: &Rat| -> Option<String> {
        if !x.is_integer() {
            return Some("not an integer".into());
        }
        excluded_by(sets, p, x).map(|q| format!("not in Z_{q}(R)"))
    };
    for n in 0..period {
        let x = s.element(s.start() + n as u32);
        let in_balls = x.is_integer()
            && sets.iter().all(|(q, z)| *q == p || z.balls().iter().any(|b| b.contains(&x)));
        if in_balls {
            continue;
        }
        // the same residue pattern recurs every period; by S-unit finiteness
        // only finitely many of these can hit isolated points elsewhere
        for j in 0..64u64 {
            let y = s.element(s.start() + (n + j * period) as u32);
            if let Some(why) = fails(&y) {
                return Ok(Some(SimpleAnswer {
                    answer: TriState::No,
                    reason: format!("the isolated point {} of Z_{p}(R) is {why}", fmt_rat(&y)),
                }));
            }
        }
        return Ok(Some(SimpleAnswer {
            answer: TriState::Unknown(cfg.prime_scan_bound),
            reason: format!("elements of {s} keep landing on isolated points elsewhere"),
        }));
    }
    Ok(None)
}

/// Multiplicative order of `a` modulo `m` (coprime), capped.
fn order(a: &BigInt, m: &BigInt, cfg: &Config) -> Result<u64> {
    if m.is_one() {
        return Ok(1);
    }
    let a = modulo(a, m);
    let mut x = a.clone();
    for k in 1..=cfg.residue_cap {
        if x.is_one() {
            return Ok(k);
        }
        x = (&x * &a) % m;
    }
    Err(Error::cap("period of a geometric sequence", m, cfg.residue_cap))
}

/// Some window set has no balls: `E` sits inside its countable discrete
/// part. Look for a tail prime `ℓ` and a class mod `ℓ` or `ℓ²` it avoids.
fn thin_window(p: Prime, z: &PAdicSet, w: &BTreeSet<Prime>, cfg: &Config) -> Result<SimpleAnswer> {
    let dens: BigInt = z
        .point_set()
        .iter()
        .map(|x| x.denom().clone())
        .chain(z.seqs().iter().flat_map(|s| [s.limit().denom().clone(), s.scale().denom().clone()]))
        .fold(BigInt::one(), |a, b| a.lcm(&b));
    for l in primes_up_to(cfg.prime_scan_bound) {
        if w.contains(&l) || dens.is_multiple_of(&l.big()) {
            continue;
        }
        let mut m = l.get();
        if l.get() <= 97 {
            m *= l.get();
        }
        if m > cfg.residue_cap {
            break;
        }
        if let Some(r) = missed_residue(z, p, m) {
            return answer(
                TriState::No,
                format!("Z_{p}(R) has no balls and no element of it is {r} mod {m}, yet Z_{l}(R) = Z_{l}"),
            );
        }
    }
    answer(TriState::Unknown(cfg.prime_scan_bound), format!("E lies in the discrete set Z_{p}(R); no avoided class was found"))
}

fn reduce(x: &Rat, m: &BigInt) -> BigInt {
    let inv = inv_mod(x.denom(), m).expect("denominator prime to the modulus");
    modulo(&(x.numer() * inv), m)
}

fn missed_residue(z: &PAdicSet, p: Prime, m: u64) -> Option<u64> {
    let mb = BigInt::from(m);
    let mut hit = vec![false; m as usize];
    let mut mark = |r: BigInt| hit[r.to_usize().expect("residue below modulus")] = true;
    for x in z.point_set() {
        mark(reduce(x, &mb));
    }
    for s in z.seqs() {
        if s.include_limit() {
            mark(reduce(s.limit(), &mb));
        }
        let c = reduce(s.limit(), &mb);
        let a = reduce(s.scale(), &mb);
        let pm = BigInt::from(p.get()) % &mb;
        let mut pw = modulo(&num_traits::pow(BigInt::from(p.get()), s.start() as usize), &mb);
        let first = pw.clone();
        loop {
            mark(modulo(&(&c + &a * &pw), &mb));
            pw = (&pw * &pm) % &mb;
            if pw == first {
                break;
            }
        }
    }
    hit.iter().position(|h| !h).map(|r| r as u64)
}
