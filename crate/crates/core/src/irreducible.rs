//! Irreducibility certificates for primitive integer polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{factor, primes_up_to, Prime, Rat};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::{derivative, eval_rat, fmt_int_poly, primitive, resultant, RatPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "prime", rename_all = "kebab-case")]
pub enum Certificate {
    Degree1,
    /// Degree 2 or 3 without rational roots.
    RationalRootFree,
    /// Irreducible modulo this prime, which does not divide the leading coefficient.
    ModPWitness(Prime),
    CallerAsserted,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Degree1 => write!(f, "degree 1"),
            Certificate::RationalRootFree => write!(f, "no rational roots (degree <= 3)"),
            Certificate::ModPWitness(p) => write!(f, "irreducible mod {p}"),
            Certificate::CallerAsserted => write!(f, "caller-asserted (not verified)"),
        }
    }
}

/// A primitive, squarefree integer polynomial with positive leading
/// coefficient together with the reason it is believed irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IrreduciblePoly {
    q: Vec<BigInt>,
    cert: Certificate,
}

impl IrreduciblePoly {
    /// Certifies irreducibility or fails with `Reducible` / `Uncertified`.
    pub fn certify(f: &RatPoly, cfg: &Config) -> Result<IrreduciblePoly> {
        let q = Self::prepare(f, cfg)?;
        let n = q.len() - 1;
        if n == 1 {
            return Ok(IrreduciblePoly { q, cert: Certificate::Degree1 });
        }
        if let Some(r) = rational_root(&q, cfg) {
            return Err(Error::Reducible(format!(
                "{} has the rational root {}",
                fmt_int_poly(&q),
                crate::arith::fmt_rat(&r)
            )));
        }
        if n == 2 {
            // no rational root means irreducible for quadratics
            if !is_square(&(&q[1] * &q[1] - BigInt::from(4) * &q[0] * &q[2])) {
                return Ok(IrreduciblePoly { q, cert: Certificate::RationalRootFree });
            }
        } else if n == 3 && rational_roots_decided(&q, cfg) {
            return Ok(IrreduciblePoly { q, cert: Certificate::RationalRootFree });
        }
        if let Some(p) = mod_p_witness(&q, cfg) {
            return Ok(IrreduciblePoly { q, cert: Certificate::ModPWitness(p) });
        }
        Err(Error::Uncertified(format!(
            "could not certify irreducibility of {} (degree {n}, primes up to {})",
            fmt_int_poly(&q),
            cfg.irreducibility_prime_bound
        )))
    }

    /// Accepts the caller's word, after the checks that are cheap and sure.
    pub fn asserted(f: &RatPoly, cfg: &Config) -> Result<IrreduciblePoly> {
        match Self::certify(f, cfg) {
            Err(Error::Uncertified(_)) => Ok(IrreduciblePoly { q: Self::prepare(f, cfg)?, cert: Certificate::CallerAsserted }),
            other => other,
        }
    }

    fn prepare(f: &RatPoly, cfg: &Config) -> Result<Vec<BigInt>> {
        f.check_degree(cfg)?;
        match f.degree() {
            None | Some(0) => return Err(Error::Invalid("q must be nonconstant".into())),
            _ => {}
        }
        let q = primitive(f.numerator());
        if q.len() > 2 && resultant(&q, &derivative(&q)).is_zero() {
            return Err(Error::Reducible(format!("{} is not squarefree", fmt_int_poly(&q))));
        }
        Ok(q)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.q
    }

    pub fn certificate(&self) -> Certificate {
        self.cert
    }

    pub fn degree(&self) -> usize {
        self.q.len() - 1
    }

    pub fn as_poly(&self) -> RatPoly {
        RatPoly::from_int_poly(&self.q)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        eval_rat(&self.q, x)
    }

    pub fn derivative(&self) -> Vec<BigInt> {
        derivative(&self.q)
    }

    /// `Res(q, q')`, nonzero by construction.
    pub fn discriminant_resultant(&self) -> BigInt {
        resultant(&self.q, &derivative(&self.q))
    }
}

impl fmt::Display for IrreduciblePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_int_poly(&self.q))
    }
}

fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

fn divisors(n: &BigInt, cfg: &Config) -> Option<Vec<BigInt>> {
    let fs = factor(&n.abs(), cfg.prime_scan_bound)?;
    let mut ds = vec![BigInt::one()];
    for (p, e) in fs {
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= p.big();
            }
        }
        ds = next;
    }
    Some(ds)
}

/// A rational root found by the rational root test, if the divisors of the
/// end coefficients can be enumerated.
fn rational_root(q: &[BigInt], cfg: &Config) -> Option<Rat> {
    if q[0].is_zero() {
        return Some(Rat::zero());
    }
    let num = divisors(&q[0], cfg)?;
    let den = divisors(q.last().unwrap(), cfg)?;
    for a in &num {
        for b in &den {
            for s in [a.clone(), -a] {
                let r = Rat::new(s, b.clone());
                if eval_rat(q, &r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

fn rational_roots_decided(q: &[BigInt], cfg: &Config) -> bool {
    !q[0].is_zero() && divisors(&q[0], cfg).is_some() && divisors(q.last().unwrap(), cfg).is_some()
}

/// Searches for a prime modulo which `q` stays of full degree and irreducible.
fn mod_p_witness(q: &[BigInt], cfg: &Config) -> Option<Prime> {
    // products of residues must fit in u64
    primes_up_to(cfg.irreducibility_prime_bound.min(1 << 31)).into_iter().find(|&p| {
        let m = BigInt::from(p.get());
        let f: Vec<u64> = q.iter().map(|c| c.mod_floor(&m).to_u64().unwrap()).collect();
        *f.last().unwrap() != 0 && irreducible_mod_p(&f, p.get())
    })
}

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_rem(a: &Fp, m: &Fp, p: u64) -> Fp {
    let mut a = fp_trim(a.clone());
    let inv = fp_inv(*m.last().unwrap(), p);
    while a.len() >= m.len() {
        let c = a.last().unwrap() * inv % p;
        let shift = a.len() - m.len();
        for (i, mi) in m.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p * p - c * mi % p) % p;
        }
        a = fp_trim(a);
    }
    a
}

fn fp_mulmod(a: &Fp, b: &Fp, m: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_rem(&out, m, p)
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (fp_trim(a.clone()), fp_trim(b.clone()));
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or: `f` of degree `n` is irreducible over `F_p` iff
/// `gcd(f, X^{p^i} - X) = 1` for every `i ≤ n/2`.
fn irreducible_mod_p(f: &Fp, p: u64) -> bool {
    let n = f.len() - 1;
    let x: Fp = fp_rem(&vec![0, 1], f, p);
    let mut h = x.clone();
    for _ in 0..n / 2 {
        // h := h^p mod f
        let mut acc: Fp = vec![1];
        let (mut base, mut e) = (h.clone(), p);
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, f, p);
            }
            base = fp_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        if fp_gcd(f, &fp_trim(diff), p).len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(s: &str) -> Result<IrreduciblePoly> {
        IrreduciblePoly::certify(&s.parse().unwrap(), &Config::default())
    }

    #[test]
    fn certificates() {
        assert_eq!(cert("X").unwrap().certificate(), Certificate::Degree1);
        assert_eq!(cert("X^2 + 1").unwrap().certificate(), Certificate::RationalRootFree);
        assert_eq!(cert("X^3 - 2").unwrap().certificate(), Certificate::RationalRootFree);
        assert!(matches!(cert("X^5 - X - 1").unwrap().certificate(), Certificate::ModPWitness(_)));
        assert!(matches!(cert("X^2 - 1"), Err(Error::Reducible(_))));
        assert!(matches!(cert("X^2 - 2X + 1"), Err(Error::Reducible(_))));
        assert!(matches!(cert("3"), Err(Error::Invalid(_))));
        // reducible modulo every prime, so only the caller can vouch for it
        assert!(matches!(cert("X^4 + 1"), Err(Error::Uncertified(_))));
        let a = IrreduciblePoly::asserted(&"X^4 + 1".parse().unwrap(), &Config::default()).unwrap();
        assert_eq!(a.certificate(), Certificate::CallerAsserted);
    }

    #[test]
    fn normalization() {
        let q = cert("(-2X + 6)/5").unwrap();
        assert_eq!(q.to_string(), "X - 3");
    }

    #[test]
    fn ben_or_small_cases() {
        // X^2 + 1 is irreducible mod 3, splits mod 5
        assert!(irreducible_mod_p(&vec![1, 0, 1], 3));
        assert!(!irreducible_mod_p(&vec![1, 0, 1], 5));
        // X^4 + X + 1 irreducible over F_2
        assert!(irreducible_mod_p(&vec![1, 1, 0, 0, 1], 2));
        // (X^2 + X + 1)^2 = X^4 + X^2 + 1 over F_2
        assert!(!irreducible_mod_p(&vec![1, 0, 1, 0, 1], 2));
    }
}
