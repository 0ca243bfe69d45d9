//! Brute-force oracles and proptest strategies shared by the integration
//! suites. Oracles work on plain residues and never call the decision
//! procedures they check.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use ivp_core::arith::{ratio, Prime, Rat};
use ivp_core::padic::{Ball, PAdicSet, SeqWithLimit};
use ivp_core::poly::RatPoly;
use ivp_core::rule::DefaultRule;
use ivp_core::{Config, IrreduciblePoly};

pub fn prime(n: u64) -> Prime {
    Prime::new(n).expect("prime")
}

/// `v_p(n)` by repeated division; `None` for zero.
pub fn oracle_vp(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    Some(k)
}

pub fn oracle_vp_rat(x: &Rat, p: u64) -> Option<i64> {
    let a = oracle_vp(x.numer(), p)? as i64;
    let b = oracle_vp(x.denom(), p).unwrap_or(0) as i64;
    Some(a - b)
}

/// The integer in `[0, m)` congruent to `x`, for `x` with denominator prime to `m`.
pub fn residue_of(x: &Rat, m: &BigInt) -> BigInt {
    let eg = x.denom().extended_gcd(m);
    assert!(eg.gcd.is_one(), "denominator not invertible");
    (x.numer() * eg.x).mod_floor(m)
}

pub fn eval_int_poly(g: &[BigInt], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Residues mod `p^m` met by the set, enumerated component by component.
/// Exhaustive: a sequence element `c + a p^n` agrees with its limit mod
/// `p^m` once `n + v(a) >= m`.
pub fn oracle_residues(s: &PAdicSet, m: u32) -> Vec<BigInt> {
    let p = s.prime().get();
    let modulus = BigInt::from(p).pow(m);
    let mut out = Vec::new();
    for b in s.balls() {
        if b.depth() >= m {
            out.push(b.center().mod_floor(&modulus));
        } else {
            let step = BigInt::from(p).pow(b.depth());
            let count = BigInt::from(p).pow(m - b.depth());
            let mut i = BigInt::zero();
            while i < count {
                out.push((b.center() + &step * &i).mod_floor(&modulus));
                i += 1;
            }
        }
    }
    for x in s.point_set() {
        out.push(residue_of(x, &modulus));
    }
    for q in s.seqs() {
        let va = oracle_vp_rat(q.scale(), p).unwrap_or(0);
        let stop = q.start() as i64 + m as i64 + va.abs() + 1;
        for n in q.start() as i64..=stop {
            out.push(residue_of(&q.element(n as u32), &modulus));
        }
        if q.include_limit() {
            out.push(residue_of(q.limit(), &modulus));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Residue enumerations above this size switch to Mahler coefficients.
const ENUMERATION_LIMIT: u32 = 1 << 16;

/// `f(S) ⊆ Z_p` by residue enumeration at depth `v_p(den f)`. Balls too
/// shallow to enumerate are checked through the coefficients
/// `Σ_i (-1)^{j-i} C(j, i) g(c + p^k i)` of `g(c + p^k Y)` in the binomial
/// basis, which are all divisible by `p^m` exactly when `g/p^m` is
/// integer-valued on the ball.
pub fn oracle_integer_valued(f: &RatPoly, s: &PAdicSet) -> bool {
    let p = s.prime().get();
    let Some(m) = oracle_vp(f.denominator(), p) else { return true };
    if m == 0 {
        return true;
    }
    let modulus = BigInt::from(p).pow(m);
    let g = f.numerator();
    let divisible = |v: &BigInt| v.mod_floor(&modulus).is_zero();
    let mut rest = s.clone();
    let mut shallow = Vec::new();
    if s.balls().iter().any(|b| BigInt::from(p).pow(m.saturating_sub(b.depth())) > BigInt::from(ENUMERATION_LIMIT)) {
        shallow = s.balls().to_vec();
        rest = PAdicSet::from_parts(s.prime(), Vec::new(), s.point_set().iter().cloned().collect(), s.seqs().to_vec())
            .expect("same components");
    }
    for b in &shallow {
        let step = BigInt::from(p).pow(b.depth());
        let values: Vec<BigInt> = (0..g.len()).map(|i| eval_int_poly(g, &(b.center() + &step * i))).collect();
        for j in 0..values.len() {
            let mut c = BigInt::zero();
            let mut binom = BigInt::one();
            for (i, v) in values.iter().enumerate().take(j + 1) {
                let term = &binom * v;
                if (j - i) % 2 == 0 {
                    c += term;
                } else {
                    c -= term;
                }
                binom = binom * (j - i) / (i + 1);
            }
            if !divisible(&c) {
                return false;
            }
        }
    }
    oracle_residues(&rest, m).iter().all(|r| divisible(&eval_int_poly(g, r)))
}

/// Residues mod `p^d` inside a ball-only set.
pub fn ball_residues(s: &PAdicSet, d: u32) -> Vec<BigInt> {
    assert!(s.point_set().is_empty() && s.seqs().is_empty());
    oracle_residues(s, d)
}

pub fn max_ball_depth(sets: &[&PAdicSet]) -> u32 {
    sets.iter().flat_map(|s| s.balls().iter().map(|b| b.depth())).max().unwrap_or(0)
}

/// Irreducible polynomials used by the suites.
pub const IRREDUCIBLES: &[&str] = &[
    "X", "X + 1", "X - 3", "2X + 1", "3X - 1", "5X + 2", "X^2 + 1", "X^2 - 2", "X^2 + X + 1", "X^2 - 17",
    "X^2 + 7", "X^2 - 3", "X^2 + 3", "X^3 - 2", "X^3 + X + 1", "X^2 - 5", "X^2 + 2", "X^3 - 3X + 1",
];

pub fn irreducible(s: &str) -> IrreduciblePoly {
    IrreduciblePoly::certify(&s.parse().expect("poly"), &Config::default()).expect("certified")
}

pub fn arb_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5]).prop_map(prime)
}

pub fn arb_irreducible() -> impl Strategy<Value = IrreduciblePoly> {
    prop::sample::select(IRREDUCIBLES.to_vec()).prop_map(irreducible)
}

/// Rationals in `Z_p` for every `p ≤ 5`.
pub fn arb_zp_rat() -> impl Strategy<Value = Rat> {
    arb_zp_rat_at(prime(5))
}

pub fn arb_zp_rat_at(p: Prime) -> impl Strategy<Value = Rat> {
    (-60i64..60, prop::sample::select(vec![1i64, 1, 1, 7, 11, 13]))
        .prop_map(move |(n, d)| ratio(n, if d % p.get() as i64 == 0 { 1 } else { d }))
}

pub fn arb_ball(p: Prime) -> impl Strategy<Value = Ball> {
    (0i64..250, prop::sample::select(vec![0u32, 1, 1, 2, 2, 3, 3, 4]))
        .prop_map(move |(c, k)| Ball::from_int(p, &BigInt::from(c), k))
}

pub fn arb_seq(p: Prime) -> impl Strategy<Value = SeqWithLimit> {
    (arb_zp_rat_at(p), -3i64..4, 0u32..3, 0u32..3, any::<bool>()).prop_filter_map("zero scale", move |(lim, u, j, start, inc)| {
        if u == 0 || u % p.get() as i64 == 0 {
            return None;
        }
        let scale = Rat::from_integer(BigInt::from(u) * p.pow(j));
        SeqWithLimit::new(p, lim, scale, start, inc).ok()
    })
}

/// A set in the representable algebra with at most a few components.
pub fn arb_set_at(p: Prime) -> impl Strategy<Value = PAdicSet> {
    (
        prop::collection::vec(arb_ball(p), 0..3),
        prop::collection::vec(arb_zp_rat_at(p), 0..3),
        prop::collection::vec(arb_seq(p), 0..2),
    )
        .prop_map(move |(b, x, s)| PAdicSet::from_parts(p, b, x, s).expect("valid parts"))
}

pub fn arb_ball_set_at(p: Prime) -> impl Strategy<Value = PAdicSet> {
    prop::collection::vec(arb_ball(p), 0..4)
        .prop_map(move |b| PAdicSet::from_parts(p, b, Vec::new(), Vec::new()).expect("valid parts"))
}

pub fn arb_set() -> impl Strategy<Value = PAdicSet> {
    arb_prime().prop_flat_map(arb_set_at)
}

/// `num / (2^a 3^b)` with `deg ≤ 6` and `a ≤ 6`, `b ≤ 4`.
pub fn arb_poly() -> impl Strategy<Value = RatPoly> {
    (prop::collection::vec(-30i64..30, 1..8), 0u32..7, 0u32..5).prop_map(|(c, a, b)| {
        let den = BigInt::from(2).pow(a) * BigInt::from(3).pow(b);
        RatPoly::new(c.into_iter().map(BigInt::from).collect(), den).expect("nonzero denominator")
    })
}

pub fn arb_rule() -> impl Strategy<Value = DefaultRule> {
    prop::sample::select(vec![
        DefaultRule::FullZp,
        DefaultRule::EmptySet,
        DefaultRule::UnitsAndSelf,
        DefaultRule::SinglePower(1),
        DefaultRule::SinglePower(2),
    ])
}

/// Closed exceptional sets at a few of the primes 2, 3, 5, 7.
pub fn arb_exceptional() -> impl Strategy<Value = BTreeMap<Prime, PAdicSet>> {
    let at = |p: u64| prop::option::weighted(0.6, arb_set_at(prime(p)).prop_map(|s| s.closure()));
    (at(2), at(3), at(5), at(7)).prop_map(|(a, b, c, d)| {
        [(2, a), (3, b), (5, c), (7, d)].into_iter().filter_map(|(p, s)| s.map(|s| (prime(p), s))).collect()
    })
}
