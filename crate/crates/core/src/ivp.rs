//! Integer-valuedness of rational polynomials on p-adic sets, separating
//! polynomials, and rational witnesses for valuation-ring exclusion.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{fmt_rat, rat_from_int, require_zp, residue, vp, vp_int, Prime, Rat, Valuation};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::irreducible::IrreduciblePoly;
use crate::padic::PAdicSet;
use crate::poly::{eval_int, RatPoly};
use crate::roots::{max_valuation, roots_in_set};

/// Decides `f(S) ⊆ Z_p`.
///
/// With `d = p^m·u`, `f(α) ∈ Z_p` iff `g(α) ≡ 0 mod p^m`, which only depends
/// on `α mod p^m`. Balls deeper than `m` are decided by their center. On a
/// shallower ball `c + p^k Z_p`, `g(c + p^k Y)/p^m` is integer-valued on `Z_p`
/// iff its forward differences at 0 are (Z is dense in Z_p and the binomials
/// are a basis), so at most `deg + 1` values are needed. Sequence tails share
/// the class of their limit, so the answer is the same for a set and its
/// closure.
pub fn is_integer_valued(f: &RatPoly, s: &PAdicSet, cfg: &Config) -> Result<bool> {
    let p = s.prime();
    let m = vp_int(f.denominator(), p).finite().expect("positive denominator");
    if m == 0 || s.is_empty() {
        return Ok(true);
    }
    f.check_degree(cfg)?;
    let m = m as u32;
    let modulus = p.pow(m);
    let ok_int = |x: &BigInt| (eval_int(f.numerator(), x) % &modulus).is_zero();
    let degree = f.degree().unwrap_or(0);
    for ball in s.balls() {
        if ball.depth() >= m {
            if !ok_int(ball.center()) {
                return Ok(false);
            }
            continue;
        }
        let step = p.pow(ball.depth());
        let count = p.pow(m - ball.depth());
        let ok = if count <= BigInt::from(degree + 1) {
            let count = usize::try_from(&count).expect("at most deg + 1");
            (0..count).all(|i| ok_int(&(ball.center() + &step * i)))
        } else {
            let mut values: Vec<BigInt> =
                (0..=degree).map(|i| eval_int(f.numerator(), &(ball.center() + &step * i))).collect();
            forward_differences(&mut values);
            values.iter().all(|v| (v % &modulus).is_zero())
        };
        if !ok {
            return Ok(false);
        }
    }
    let ok = |x: &Rat| vp(&f.eval(x), p).at_least(0);
    if !s.point_set().iter().all(ok) {
        return Ok(false);
    }
    for seq in s.seqs() {
        let va = vp(seq.scale(), p).finite().expect("nonzero scale");
        let horizon = (i64::from(m) - va).max(i64::from(seq.start())) as u32;
        if !(seq.start()..horizon).all(|n| ok(&seq.element(n))) || !ok(seq.limit()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replaces `v[0..]` by `Δ^j v(0)` in place.
fn forward_differences(v: &mut [BigInt]) {
    for j in 1..v.len() {
        for i in (j..v.len()).rev() {
            let prev = v[i - 1].clone();
            v[i] -= prev;
        }
    }
}

/// The polynomial closure, which is the topological closure.
pub fn polynomial_closure(e: &PAdicSet) -> PAdicSet {
    e.closure()
}

/// Largest `vp(α - x)` over `x` in the closure of `e` (finite when `α` is outside).
fn max_proximity(e: &PAdicSet, alpha: &Rat) -> i64 {
    let p = e.prime();
    let d = |x: &Rat| vp(&(alpha - x), p).finite().expect("alpha outside the closure");
    let mut best = 0i64;
    for b in e.balls() {
        best = best.max(vp(&(alpha - rat_from_int(b.center())), p).finite().unwrap_or(i64::MAX));
    }
    for x in e.point_set() {
        best = best.max(d(x));
    }
    for s in e.seqs() {
        let c = d(s.limit());
        best = best.max(c);
        let va = vp(s.scale(), p).finite().expect("nonzero scale");
        for n in s.start()..((c - va + 1).max(0) as u32).max(s.start()) {
            best = best.max(d(&s.element(n)));
        }
    }
    best
}

/// Residue classes mod `p^level` met by the closure of `e`.
fn classes_met(e: &PAdicSet, level: u32, cfg: &Config) -> Result<BTreeSet<BigInt>> {
    let p = e.prime();
    let mut out = BTreeSet::new();
    for b in e.balls() {
        if b.depth() >= level {
            out.insert(crate::arith::modulo(b.center(), &p.pow(level)));
            continue;
        }
        let count = p.pow(level - b.depth());
        if count > BigInt::from(cfg.residue_cap) {
            return Err(Error::cap("residue classes", &count, cfg.residue_cap));
        }
        let step = p.pow(b.depth());
        let mut i = BigInt::zero();
        while i < count {
            out.insert(b.center() + &step * &i);
            i += 1;
        }
    }
    for x in e.point_set() {
        out.insert(residue(x, p, level)?);
    }
    for s in e.seqs() {
        out.insert(residue(s.limit(), p, level)?);
        let va = vp(s.scale(), p).finite().expect("nonzero scale");
        for n in s.start()..((i64::from(level) - va).max(0) as u32).max(s.start()) {
            out.insert(residue(&s.element(n), p, level)?);
        }
    }
    Ok(out)
}

/// `∏(X - r)^{m_r} / p^t` over the classes `r mod p^L` met by `e`, where no
/// class is within `p^L` of `alpha`.
///
/// With `j_r = vp(alpha - r)`, a point `x` in class `r0` gains at least
/// `L - j_{r0}` on its own factor, nothing on same-level factors, and loses
/// `j_r - j_{r0}` on each deeper one; every other factor matches `alpha`.
/// Multiplicities are fixed from the deepest level up so that gains beat
/// losses by one, which makes `t = vp(g(alpha)) + 1` work everywhere.
fn weighted_candidate(closed: &PAdicSet, alpha: &Rat, level: u32, cfg: &Config) -> Result<Option<RatPoly>> {
    let p = closed.prime();
    let classes = match classes_met(closed, level, cfg) {
        Ok(c) => c,
        Err(Error::ResourceCap { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut by_depth: Vec<(i64, BigInt)> = classes
        .into_iter()
        .map(|r| (vp(&(alpha - rat_from_int(&r)), p).finite().expect("alpha outside every class"), r))
        .collect();
    by_depth.sort_by_key(|entry| std::cmp::Reverse(entry.0));
    let mut chosen: Vec<(i64, u64)> = Vec::new();
    let mut degree = 0u64;
    let mut roots = Vec::new();
    for (j, r) in &by_depth {
        let loss: i64 = chosen.iter().filter(|(i, _)| i > j).map(|(i, m)| (i - j) * *m as i64).sum();
        let gain = i64::from(level) - j;
        let m = ((1 + loss + gain - 1) / gain) as u64;
        degree += m;
        if degree > cfg.degree_bound as u64 {
            return Ok(None);
        }
        chosen.push((*j, m));
        roots.extend(std::iter::repeat_n(r.clone(), m as usize));
    }
    let g = RatPoly::from_roots(&roots);
    let t = vp(&g.eval(alpha), p).finite().expect("alpha is not a root") + 1;
    Ok(Some(g.scale(&Rat::new(BigInt::one(), p.pow(t as u32)))))
}

/// A polynomial integer-valued on `e` but not at `alpha`.
///
/// Candidates are `∏(X - r)/p^t` over the classes `r mod p^L` met by `e`,
/// for growing `L`, then the same product at `L = s + 1` with multiplicities
/// (see `weighted_candidate`). If none validates, the product over every class mod
/// `p^{s+1}` except that of `alpha` always works with
/// `t = 1 + Σ_{j=1..s} (p^{s+1-j} - 1)`.
pub fn separating_polynomial(e: &PAdicSet, alpha: &Rat, cfg: &Config) -> Result<RatPoly> {
    let p = e.prime();
    require_zp(alpha, p)?;
    let closed = e.closure();
    if closed.contains(alpha) {
        return Err(Error::Precondition(format!(
            "{} lies in the closure of {e}; no polynomial separates it",
            fmt_rat(alpha)
        )));
    }
    let witness_ok = |f: &RatPoly| -> Result<bool> {
        Ok(vp(&f.eval(alpha), p) < Valuation::Finite(0) && is_integer_valued(f, &closed, cfg)?)
    };
    if closed.is_empty() {
        return Ok(RatPoly::constant(&Rat::new(BigInt::one(), p.big())));
    }
    let s = max_proximity(&closed, alpha);
    for level in 1..=(s + 1) as u32 {
        let classes = match classes_met(&closed, level, cfg) {
            Ok(c) if c.len() <= cfg.degree_bound => c,
            Ok(_) | Err(Error::ResourceCap { .. }) => break,
            Err(e) => return Err(e),
        };
        let g = RatPoly::from_roots(&classes.into_iter().collect::<Vec<_>>());
        // alpha itself can be a representative while its class is still met
        let Some(t) = vp(&g.eval(alpha), p).finite().map(|v| v + 1) else { continue };
        let f = g.scale(&Rat::new(BigInt::one(), p.pow(t as u32)));
        if witness_ok(&f)? {
            return Ok(f);
        }
    }
    let level = (s + 1) as u32;
    if let Some(f) = weighted_candidate(&closed, alpha, level, cfg)? {
        if witness_ok(&f)? {
            return Ok(f);
        }
    }
    let modulus = p.pow(level);
    let degree = &modulus - 1;
    if degree > BigInt::from(cfg.degree_bound as u64) {
        return Err(Error::cap("separating polynomial degree", &degree, cfg.degree_bound as u64));
    }
    let a = residue(alpha, p, level)?;
    let mut roots = Vec::new();
    let mut r = BigInt::zero();
    while r < modulus {
        if r != a {
            roots.push(r.clone());
        }
        r += 1;
    }
    let t: BigInt = (1..=level - 1).map(|j| p.pow(level - j) - 1).sum::<BigInt>() + 1;
    let t = u32::try_from(&t).map_err(|_| Error::cap("separating exponent", &t, u64::from(u32::MAX)))?;
    let f = RatPoly::from_roots(&roots).scale(&Rat::new(BigInt::one(), p.pow(t)));
    if witness_ok(&f)? {
        Ok(f)
    } else {
        Err(Error::Invalid("separating construction failed validation".into()))
    }
}

/// `φ = N / q` with `N = ∏ p^{m_p}` and `m_p = sup vp(q)` on `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalWitness {
    #[serde(serialize_with = "ser_int")]
    pub numerator: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub denominator: IrreduciblePoly,
    pub exponents: BTreeMap<Prime, i64>,
}

fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_display<S: serde::Serializer>(v: &IrreduciblePoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl RationalWitness {
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.denominator.eval(x);
        (!d.is_zero()).then(|| rat_from_int(&self.numerator) / d)
    }

    /// Re-checks `φ(α) ∈ Z_p` on every set through the supremum, plus
    /// direct evaluation at sample points.
    pub fn verify(&self, family: &BTreeMap<Prime, PAdicSet>, cfg: &Config) -> Result<bool> {
        for (&p, set) in family {
            let m = vp_int(&self.numerator, p).finite().unwrap_or(0);
            if let Some(mv) = max_valuation(&self.denominator, set, cfg)? {
                match mv.value {
                    Valuation::Infinite => return Ok(false),
                    Valuation::Finite(v) if v > m => return Ok(false),
                    _ => {}
                }
            }
            for x in set.sample_points(4) {
                match self.eval(&x) {
                    Some(y) if vp(&y, p).at_least(0) => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }
}

impl std::fmt::Display for RationalWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/({})", self.numerator, self.denominator)
    }
}

pub fn witness_rational_function(
    q: &IrreduciblePoly,
    family: &BTreeMap<Prime, PAdicSet>,
    cfg: &Config,
) -> Result<RationalWitness> {
    let mut numerator = BigInt::one();
    let mut exponents = BTreeMap::new();
    for (&p, set) in family {
        let Some(mv) = max_valuation(q, set, cfg)? else { continue };
        match mv.value {
            Valuation::Infinite => {
                let roots = roots_in_set(q, &set.closure(), cfg)?;
                let shown = roots.first().map(|c| c.to_string()).unwrap_or_default();
                return Err(Error::Precondition(format!("{q} has a root in the set at p = {p}: {shown}")));
            }
            Valuation::Finite(m) => {
                if m > 0 {
                    numerator *= p.pow(m as u32);
                }
                exponents.insert(p, m);
            }
        }
    }
    Ok(RationalWitness { numerator, denominator: q.clone(), exponents })
}
