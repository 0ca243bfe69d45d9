//! Exact integers, rationals, p-adic valuations and congruences.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};

/// Exact rational number, always reduced with a positive denominator.
pub type Rat = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A p-adic valuation: finite, or infinite for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `true` iff the valuation is at least `k`.
    pub fn at_least(self, k: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A rational prime. Construction certifies primality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Result<Prime> {
        if is_prime_u64(n) {
            Ok(Prime(n))
        } else {
            Err(Error::NotPrime(n.to_string()))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^k` as a big integer.
    pub fn pow(self, k: u32) -> BigInt {
        num_traits::pow(self.big(), k as usize)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(n: u64) -> Result<Prime> {
        Prime::new(n)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin; the twelve prime bases are exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Certified primality for non-negative integers within the configured bit bound.
pub fn is_prime(n: &BigInt, cfg: &Config) -> Result<bool> {
    if n.is_negative() {
        return Err(Error::Invalid(format!("is_prime expects n >= 0, got {n}")));
    }
    if n.bits() > cfg.primality_bits as u64 {
        return Err(Error::PrimalityBound { value: n.to_string(), bits: cfg.primality_bits });
    }
    Ok(is_prime_u64(n.to_u64().expect("bit length checked")))
}

/// Valuation of an integer.
pub fn vp_int(n: &BigInt, p: Prime) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let pb = p.big();
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    Valuation::Finite(v)
}

fn vp_int_finite(n: &BigInt, p: Prime) -> i64 {
    vp_int(n, p).finite().expect("nonzero")
}

/// `v_p(x)`: infinite exactly for `x = 0`.
pub fn vp(x: &Rat, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(vp_int_finite(x.numer(), p) - vp_int_finite(x.denom(), p))
}

/// `true` iff `x ∈ Z_p`.
pub fn in_zp(x: &Rat, p: Prime) -> bool {
    vp(x, p).at_least(0)
}

pub fn require_zp(x: &Rat, p: Prime) -> Result<()> {
    if in_zp(x, p) {
        Ok(())
    } else {
        Err(Error::NotInZp(fmt_rat(x), p.get()))
    }
}

/// Least non-negative residue.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = modulo(a, m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(modulo(&e.x, m))
    } else {
        None
    }
}

/// Canonical residue of a p-adic integer `x` modulo `p^k`.
pub fn residue(x: &Rat, p: Prime, k: u32) -> Result<BigInt> {
    require_zp(x, p)?;
    let m = p.pow(k);
    if x.denom().is_one() {
        return Ok(modulo(x.numer(), &m));
    }
    let inv = inv_mod(x.denom(), &m).expect("denominator is a p-adic unit");
    Ok(modulo(&(x.numer() * inv), &m))
}

/// One congruence class `residue mod modulus` with `0 ≤ residue < modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    residue: BigInt,
    modulus: BigInt,
}

impl Congruence {
    pub fn new(residue: BigInt, modulus: BigInt) -> Result<Congruence> {
        if modulus.sign() != Sign::Plus {
            return Err(Error::Invalid(format!("modulus must be positive, got {modulus}")));
        }
        Ok(Congruence { residue: modulo(&residue, &modulus), modulus })
    }

    /// Small-number shorthand; panics on a non-positive modulus.
    pub fn of(residue: i64, modulus: i64) -> Congruence {
        Congruence::new(int(residue), int(modulus)).expect("positive modulus")
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn contains(&self, a: &BigInt) -> bool {
        modulo(a, &self.modulus) == self.residue
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

impl Serialize for Congruence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Congruence", 2)?;
        st.serialize_field("residue", &self.residue.to_string())?;
        st.serialize_field("modulus", &self.modulus.to_string())?;
        st.end()
    }
}

pub(crate) fn ser_opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.serialize_some(&n.to_string()),
        None => s.serialize_none(),
    }
}

/// Combines a system of congruences; `None` when inconsistent.
///
/// An empty system is the trivial class `0 mod 1`.
pub fn crt_solve(cs: &[Congruence]) -> Option<Congruence> {
    let mut acc = Congruence { residue: BigInt::zero(), modulus: BigInt::one() };
    for c in cs {
        let g = acc.modulus.gcd(&c.modulus);
        let diff = &c.residue - &acc.residue;
        if !(&diff % &g).is_zero() {
            return None;
        }
        let m1 = &acc.modulus / &g;
        let m2 = &c.modulus / &g;
        // acc.residue + acc.modulus * t ≡ c.residue (mod c.modulus)
        let t = if m2.is_one() {
            BigInt::zero()
        } else {
            let inv = inv_mod(&m1, &m2).expect("coprime after dividing by gcd");
            modulo(&((&diff / &g) * inv), &m2)
        };
        let lcm = &acc.modulus * &m2;
        acc = Congruence { residue: modulo(&(&acc.residue + &acc.modulus * t), &lcm), modulus: lcm };
    }
    Some(acc)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// Primes `≤ n` by a sieve.
pub fn primes_up_to(n: u64) -> Vec<Prime> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(Prime(i as u64));
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> Prime {
    let mut m = n + 1;
    while !is_prime_u64(m) {
        m += 1;
    }
    Prime(m)
}

/// Prime factorization of a nonzero integer by trial division up to `bound`.
///
/// Returns `None` when a cofactor remains that cannot be certified prime
/// within 64 bits.
pub fn factor(n: &BigInt, bound: u64) -> Option<Vec<(Prime, u32)>> {
    assert!(!n.is_zero(), "factor(0)");
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    while d <= bound {
        let db = BigInt::from(d);
        if &db * &db > m {
            break;
        }
        let mut e = 0;
        while (&m % &db).is_zero() {
            m /= &db;
            e += 1;
        }
        if e > 0 {
            out.push((Prime(d), e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let small = m.to_u64()?;
        let db = BigInt::from(d);
        if &db * &db > m || is_prime_u64(small) {
            out.push((Prime::new(small).ok()?, 1));
        } else {
            return None;
        }
    }
    Some(out)
}

/// The finitely many primes at which a nonzero rational has nonzero valuation.
pub fn valuation_support(x: &Rat, cfg: &Config) -> Result<Vec<(Prime, i64)>> {
    if x.is_zero() {
        return Err(Error::Invalid("zero has infinite valuation everywhere".into()));
    }
    let fail = || Error::cap("factorization", fmt_rat(x), cfg.prime_scan_bound);
    let mut out: Vec<(Prime, i64)> = factor(x.numer(), cfg.prime_scan_bound)
        .ok_or_else(fail)?
        .into_iter()
        .map(|(p, e)| (p, e as i64))
        .collect();
    for (p, e) in factor(x.denom(), cfg.prime_scan_bound).ok_or_else(fail)? {
        out.push((p, -(e as i64)));
    }
    out.sort();
    Ok(out)
}
