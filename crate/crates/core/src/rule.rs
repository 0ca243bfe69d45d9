//! Rules that describe `Z_p(R)` at every prime outside a finite window.

use std::fmt;

use num_bigint::BigInt;

use crate::adelic::IntegerSet;
use crate::arith::{rat_from_int, Prime};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::padic::{Ball, PAdicSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DefaultRule {
    /// All of `Z_p`.
    FullZp,
    /// `{p} ∪ (Z_p \ pZ_p)`, the closure of the set of primes.
    UnitsAndSelf,
    /// The single point `p^e`, `e ≥ 1`.
    SinglePower(u32),
    /// The closure of a congruence-defined set of integers.
    FromIntegerSet(IntegerSet),
    EmptySet,
}

impl DefaultRule {
    pub fn single_power(e: u32) -> Result<DefaultRule> {
        if e == 0 {
            return Err(Error::Invalid("power(e) needs e >= 1".into()));
        }
        Ok(DefaultRule::SinglePower(e))
    }

    pub fn instantiate(&self, p: Prime, cfg: &Config) -> Result<PAdicSet> {
        match self {
            DefaultRule::FullZp => Ok(PAdicSet::full(p)),
            DefaultRule::EmptySet => Ok(PAdicSet::empty(p)),
            DefaultRule::SinglePower(e) => PAdicSet::points(p, [rat_from_int(&p.pow(*e))]),
            DefaultRule::UnitsAndSelf => {
                if p.get() > cfg.residue_cap {
                    return Err(Error::cap("unit residue balls", p.get(), cfg.residue_cap));
                }
                let balls = (1..p.get()).map(|r| Ball::from_int(p, &BigInt::from(r), 1)).collect();
                PAdicSet::from_parts(p, balls, vec![rat_from_int(&p.big())], Vec::new())
            }
            DefaultRule::FromIntegerSet(e) => e.closure_in_zp(p, cfg),
        }
    }
}

impl fmt::Display for DefaultRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefaultRule::FullZp => write!(f, "full"),
            DefaultRule::UnitsAndSelf => write!(f, "units+p"),
            DefaultRule::SinglePower(e) => write!(f, "power({e})"),
            DefaultRule::FromIntegerSet(e) => write!(f, "intset({e})"),
            DefaultRule::EmptySet => write!(f, "empty"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn instances() {
        let cfg = Config::default();
        let p3 = Prime::new(3).unwrap();
        let u = DefaultRule::UnitsAndSelf.instantiate(p3, &cfg).unwrap();
        assert_eq!(u.balls().len(), 2);
        assert!(u.contains(&rat(3)) && u.contains(&rat(1)) && u.contains(&rat(5)));
        assert!(!u.contains(&rat(9)) && !u.contains(&rat(0)));
        let s = DefaultRule::SinglePower(1).instantiate(Prime::new(5).unwrap(), &cfg).unwrap();
        assert_eq!(s.point_set().iter().cloned().collect::<Vec<_>>(), vec![rat(5)]);
        assert!(DefaultRule::FullZp.instantiate(Prime::new(2).unwrap(), &cfg).unwrap().is_full());
        assert!(DefaultRule::single_power(0).is_err());
    }
}
