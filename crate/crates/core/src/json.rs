//! Versioned JSON for rings and representations. Sets, rules and
//! polynomials travel as their text forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dsl::{parse_irreducible, parse_prime, parse_rule, parse_set};
use crate::error::{Error, Result};
use crate::padic::PAdicSet;
use crate::representation::Representation;
use crate::ring::RingSpec;
use crate::arith::Prime;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PrimeSetJson {
    pub p: u64,
    pub set: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RingJson {
    pub schema: u32,
    pub exceptional: Vec<PrimeSetJson>,
    pub default: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RepresentationJson {
    pub schema: u32,
    pub nonunitary: Vec<String>,
    pub all_min: bool,
    pub unitary: Vec<PrimeSetJson>,
    pub tail: String,
}

fn sets_out(m: &BTreeMap<Prime, PAdicSet>) -> Vec<PrimeSetJson> {
    m.iter().map(|(p, s)| PrimeSetJson { p: p.get(), set: s.to_string() }).collect()
}

fn sets_in(v: &[PrimeSetJson], cfg: &Config) -> Result<BTreeMap<Prime, PAdicSet>> {
    let mut out = BTreeMap::new();
    for e in v {
        let p = parse_prime(&e.p.to_string())?;
        let s = parse_set(&e.set, cfg)?;
        if s.prime() != p {
            return Err(Error::PrimeMismatch(p.get(), s.prime().get()));
        }
        if out.insert(p, s).is_some() {
            return Err(Error::Invalid(format!("prime {p} listed twice")));
        }
    }
    Ok(out)
}

fn check_schema(found: u32) -> Result<()> {
    if found != SCHEMA {
        return Err(Error::Invalid(format!("unsupported schema {found}, expected {SCHEMA}")));
    }
    Ok(())
}

fn decode<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.column().saturating_sub(1), e.to_string()))
}

pub fn ring_to_json(r: &RingSpec) -> RingJson {
    RingJson { schema: SCHEMA, exceptional: sets_out(r.exceptional()), default: r.default_rule().to_string() }
}

pub fn ring_from_json(j: &RingJson, cfg: &Config) -> Result<RingSpec> {
    check_schema(j.schema)?;
    RingSpec::new(sets_in(&j.exceptional, cfg)?, parse_rule(&j.default)?, cfg)
}

pub fn ring_from_json_str(text: &str, cfg: &Config) -> Result<RingSpec> {
    ring_from_json(&decode(text)?, cfg)
}

pub fn representation_to_json(rep: &Representation) -> RepresentationJson {
    RepresentationJson {
        schema: SCHEMA,
        nonunitary: rep.nonunitary.iter().map(|q| q.to_string()).collect(),
        all_min: rep.all_min,
        unitary: sets_out(&rep.unitary),
        tail: rep.tail.to_string(),
    }
}

pub fn representation_from_json(j: &RepresentationJson, assert: bool, cfg: &Config) -> Result<Representation> {
    check_schema(j.schema)?;
    let family = j.nonunitary.iter().map(|q| parse_irreducible(q, assert, cfg)).collect::<Result<_>>()?;
    Representation::new(family, j.all_min, sets_in(&j.unitary, cfg)?, parse_rule(&j.tail)?)
}

pub fn representation_from_json_str(text: &str, assert: bool, cfg: &Config) -> Result<Representation> {
    representation_from_json(&decode(text)?, assert, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_representation, parse_ring};

    #[test]
    fn ring_round_trip() {
        let cfg = Config::default();
        for s in ["Int(Z)", "Int(P,Z)", "Q[X]", "ring(power(2); 3: seq(3; 0, 1, 0, +lim))", "ring(intset(Z \\ (65 mod 72)); 5: pts(5; 0))"] {
            let r = parse_ring(s, &cfg).unwrap();
            let text = serde_json::to_string(&ring_to_json(&r)).unwrap();
            assert!(text.contains("\"schema\":1"));
            assert_eq!(ring_from_json_str(&text, &cfg).unwrap(), r, "{s}");
        }
    }

    #[test]
    fn representation_round_trip() {
        let cfg = Config::default();
        let rep = parse_representation("rep(P = {X^2 + 1}; E = {2: seq(2; 0, 1, 0, -lim)}; tail units+p)", false, &cfg)
            .unwrap();
        let text = serde_json::to_string(&representation_to_json(&rep)).unwrap();
        assert_eq!(representation_from_json_str(&text, false, &cfg).unwrap(), rep);
    }

    #[test]
    fn bad_schema_rejected() {
        let cfg = Config::default();
        let text = r#"{"schema": 2, "exceptional": [], "default": "full"}"#;
        assert!(matches!(ring_from_json_str(text, &cfg), Err(Error::Invalid(_))));
        assert!(matches!(ring_from_json_str("{", &cfg), Err(Error::Parse { .. })));
    }
}
