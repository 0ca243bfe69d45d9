//! Congruence-defined sets of integers, their closures in each `Z_p`, and the
//! gap between the closure in the profinite integers and the product of the
//! per-prime closures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::arith::{crt_solve, lcm, rat_from_int, vp_int, Congruence, Prime};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::padic::{Ball, PAdicSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    All,
    Finite(BTreeSet<BigInt>),
}

/// `(base \ excluded progressions) ∪ extra`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerSet {
    base: Base,
    excluded: Vec<Congruence>,
    extra: BTreeSet<BigInt>,
}

impl IntegerSet {
    pub fn all() -> IntegerSet {
        IntegerSet { base: Base::All, excluded: Vec::new(), extra: BTreeSet::new() }
    }

    pub fn finite(items: impl IntoIterator<Item = BigInt>) -> IntegerSet {
        IntegerSet { base: Base::Finite(items.into_iter().collect()), excluded: Vec::new(), extra: BTreeSet::new() }
    }

    pub fn excluding(mut self, c: Congruence) -> IntegerSet {
        if !self.excluded.contains(&c) {
            self.excluded.push(c);
            self.excluded.sort();
        }
        self
    }

    pub fn with_extra(mut self, items: impl IntoIterator<Item = BigInt>) -> IntegerSet {
        self.extra.extend(items);
        self
    }

    /// The progression `residue mod modulus` as a set.
    pub fn progression(c: &Congruence) -> IntegerSet {
        let mut s = IntegerSet::all();
        let m = c.modulus();
        for r in num_iter(m) {
            if r != *c.residue() {
                s = s.excluding(Congruence::new(r, m.clone()).expect("positive modulus"));
            }
        }
        s
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn excluded(&self) -> &[Congruence] {
        &self.excluded
    }

    pub fn extra(&self) -> &BTreeSet<BigInt> {
        &self.extra
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        let in_base = match &self.base {
            Base::All => true,
            Base::Finite(items) => items.contains(n),
        };
        (in_base && !self.excluded.iter().any(|c| c.contains(n))) || self.extra.contains(n)
    }

    /// lcm of the excluded moduli (1 when nothing is excluded).
    pub fn period(&self) -> BigInt {
        self.excluded.iter().fold(BigInt::one(), |acc, c| lcm(&acc, c.modulus()))
    }

    /// Residues modulo [`period`](Self::period) that survive the exclusions.
    pub fn allowed_residues(&self, cfg: &Config) -> Result<Vec<BigInt>> {
        let m = self.period();
        if m > BigInt::from(cfg.residue_cap) {
            return Err(Error::cap("residues modulo the exclusion period", &m, cfg.residue_cap));
        }
        Ok(num_iter(&m).filter(|r| !self.excluded.iter().any(|c| c.contains(r))).collect())
    }

    /// The finitely many members, or `None` when the set is infinite.
    pub fn finite_members(&self, cfg: &Config) -> Result<Option<BTreeSet<BigInt>>> {
        let mut out: BTreeSet<BigInt> = self.extra.clone();
        match &self.base {
            Base::Finite(items) => {
                out.extend(items.iter().filter(|n| self.contains(n)).cloned());
                Ok(Some(out))
            }
            Base::All => {
                if self.allowed_residues(cfg)?.is_empty() {
                    Ok(Some(out))
                } else {
                    Ok(None)
                }
            }
        }
    }

    /// Closure in `Z_p`. With period `M = p^v·u`, each allowed class mod `M`
    /// is dense in its ball mod `p^v`.
    pub fn closure_in_zp(&self, p: Prime, cfg: &Config) -> Result<PAdicSet> {
        let extras = self.extra.iter().map(rat_from_int);
        match &self.base {
            Base::Finite(items) => PAdicSet::points(
                p,
                items.iter().filter(|n| self.contains(n)).map(rat_from_int).chain(extras),
            ),
            Base::All => {
                let m = self.period();
                let v = vp_int(&m, p).finite().expect("positive period") as u32;
                let balls: BTreeSet<Ball> =
                    self.allowed_residues(cfg)?.iter().map(|a| Ball::from_int(p, a, v)).collect();
                PAdicSet::from_parts(p, balls.into_iter().collect(), extras.collect(), Vec::new())
            }
        }
    }

    /// Primes dividing the period.
    pub fn period_primes(&self) -> Vec<Prime> {
        let mut primes = BTreeSet::new();
        for c in &self.excluded {
            let mut m = c.modulus().clone();
            let mut d = 2u64;
            while m > BigInt::one() {
                let bd = BigInt::from(d);
                if (&bd * &bd) > m {
                    primes.insert(m.to_u64().expect("period fits u64"));
                    break;
                }
                while m.is_multiple_of(&bd) {
                    m /= &bd;
                    primes.insert(d);
                }
                d += 1;
            }
        }
        primes.into_iter().map(|q| Prime::new(q).expect("factor is prime")).collect()
    }
}

fn num_iter(m: &BigInt) -> impl Iterator<Item = BigInt> {
    let n = m.to_u64().unwrap_or(u64::MAX);
    (0..n).map(BigInt::from)
}

impl fmt::Display for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            Base::All => write!(f, "Z")?,
            Base::Finite(items) => write!(f, "{{{}}}", join(items))?,
        }
        if !self.excluded.is_empty() {
            let parts: Vec<String> = self.excluded.iter().map(|c| c.to_string()).collect();
            write!(f, " \\ ({})", parts.join("; "))?;
        }
        if !self.extra.is_empty() {
            write!(f, " + {{{}}}", join(&self.extra))?;
        }
        Ok(())
    }
}

fn join(items: &BTreeSet<BigInt>) -> String {
    items.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
}

/// Finitely many congruence constraints, each modulo a power of its prime.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AdelePrescription {
    constraints: BTreeMap<Prime, Congruence>,
}

impl AdelePrescription {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, p: Prime, c: Congruence) -> Result<Self> {
        if prime_power_exponent(c.modulus(), p).is_none() {
            return Err(Error::Invalid(format!("modulus {} is not a power of {p}", c.modulus())));
        }
        if self.constraints.insert(p, c).is_some() {
            return Err(Error::Invalid(format!("two constraints at prime {p}")));
        }
        Ok(self)
    }

    pub fn constraints(&self) -> &BTreeMap<Prime, Congruence> {
        &self.constraints
    }

    /// The ball `residue + p^k Z_p` prescribed at `p`.
    pub fn ball_at(&self, p: Prime) -> Option<Ball> {
        let c = self.constraints.get(&p)?;
        let k = prime_power_exponent(c.modulus(), p).expect("validated modulus");
        Some(Ball::from_int(p, c.residue(), k))
    }
}

impl fmt::Display for AdelePrescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.constraints.iter().map(|(p, c)| format!("{p}: {c}")).collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn prime_power_exponent(m: &BigInt, p: Prime) -> Option<u32> {
    let k = vp_int(m, p).finite()? as u32;
    (p.pow(k) == *m).then_some(k)
}

/// Does the prescribed cylinder meet the product of the per-prime closures?
pub fn product_closure_member(pres: &AdelePrescription, e: &IntegerSet, cfg: &Config) -> Result<bool> {
    for &p in pres.constraints.keys() {
        let ball = pres.ball_at(p).expect("constrained prime");
        if !e.closure_in_zp(p, cfg)?.meets_ball(&ball)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the single-integer test: the combined class and a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdelicMembership {
    pub member: bool,
    pub combined: Option<Congruence>,
    #[serde(serialize_with = "crate::arith::ser_opt_int")]
    pub witness: Option<BigInt>,
}

/// Does some single `a ∈ E` satisfy every constraint at once?
pub fn adelic_closure_member(pres: &AdelePrescription, e: &IntegerSet, cfg: &Config) -> Result<AdelicMembership> {
    let cs: Vec<Congruence> = pres.constraints.values().cloned().collect();
    let Some(combined) = crt_solve(&cs) else {
        return Ok(AdelicMembership { member: false, combined: None, witness: None });
    };
    let hit = |a: &BigInt| combined.contains(a) && e.contains(a);
    let mut witness = match &e.base {
        Base::Finite(items) => items.iter().find(|a| hit(a)).cloned(),
        Base::All => {
            // Membership along r0 + M·k is periodic in k with period L/M.
            let l = lcm(combined.modulus(), &e.period());
            let steps = &l / combined.modulus();
            if steps > BigInt::from(cfg.residue_cap) {
                return Err(Error::cap("classes along the combined progression", &steps, cfg.residue_cap));
            }
            num_iter(&steps)
                .map(|k| combined.residue() + combined.modulus() * k)
                .find(|a| !e.excluded.iter().any(|c| c.contains(a)))
        }
    };
    if witness.is_none() {
        witness = e.extra.iter().find(|a| hit(a)).cloned();
    }
    if let Some(w) = &witness {
        debug_assert!(hit(w));
    }
    Ok(AdelicMembership { member: witness.is_some(), combined: Some(combined), witness })
}

/// Both closure tests, and whether they certify `Ê ⊊ E̲`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureComparison {
    pub product: bool,
    pub adelic: AdelicMembership,
    pub differ: bool,
}

pub fn closures_differ(pres: &AdelePrescription, e: &IntegerSet, cfg: &Config) -> Result<ClosureComparison> {
    let product = product_closure_member(pres, e, cfg)?;
    let adelic = adelic_closure_member(pres, e, cfg)?;
    let differ = product && !adelic.member;
    Ok(ClosureComparison { product, adelic, differ })
}
