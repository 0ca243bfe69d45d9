//! Text forms for sets, rules, integer sets, prescriptions, rings and
//! representations. Every `Display` in the crate parses back here.
//!
//! ```text
//! set    ball(2, 1, 3) | pts(2; 0, 1/3) | seq(2; 0, 1, 0, +lim) | full(2)
//!        units+p(3) | power(5, 2) | empty(7)
//! rule   full | units+p | power(e) | empty | intset(<intset>)
//! intset Z \ (-7 mod 72; 0 mod 5) + {1, 2}     {0, 4, 9}
//! pres   2: 1 mod 8; 3: 2 mod 9
//! ring   ring(full; 2: pts(2; 0); 3: ball(3, 0, 1))   Int(Z)   Int(P,Z)   Q[X]
//! rep    rep(P = {X, X^2 + 1, all-min}; E = {2: pts(2; 1)}; tail empty)
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::adelic::{AdelePrescription, IntegerSet};
use crate::arith::{rat_from_int, Congruence, Prime, Rat};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::irreducible::IrreduciblePoly;
use crate::padic::{Ball, PAdicSet, SeqWithLimit};
use crate::poly::RatPoly;
use crate::representation::Representation;
use crate::ring::RingSpec;
use crate::rule::DefaultRule;

/// A slice of the input remembered with its byte offset.
#[derive(Clone, Copy)]
struct Piece<'a> {
    at: usize,
    s: &'a str,
}

impl<'a> Piece<'a> {
    fn new(s: &'a str) -> Self {
        Piece { at: 0, s }.trim()
    }

    fn trim(self) -> Self {
        let lead = self.s.len() - self.s.trim_start().len();
        Piece { at: self.at + lead, s: self.s.trim() }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.at, msg))
    }

    /// Splits on `sep` outside any brackets.
    fn split(self, sep: char) -> Vec<Piece<'a>> {
        let mut out = Vec::new();
        let (mut depth, mut start) = (0i32, 0usize);
        for (i, c) in self.s.char_indices() {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                c if c == sep && depth == 0 => {
                    out.push(Piece { at: self.at + start, s: &self.s[start..i] }.trim());
                    start = i + c.len_utf8();
                }
                _ => {}
            }
        }
        out.push(Piece { at: self.at + start, s: &self.s[start..] }.trim());
        out
    }

    /// `name(inner)` → `inner`.
    fn call(self, name: &str) -> Option<Piece<'a>> {
        let rest = self.s.strip_prefix(name)?.trim_start();
        let offset = self.s.len() - rest.len();
        let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
        Some(Piece { at: self.at + offset + 1, s: inner }.trim())
    }

    /// `{inner}` → `inner`.
    fn braces(self) -> Option<Piece<'a>> {
        let inner = self.s.strip_prefix('{')?.strip_suffix('}')?;
        Some(Piece { at: self.at + 1, s: inner }.trim())
    }

    /// Splits once on `sep` at top level.
    fn split_once(self, sep: char) -> Option<(Piece<'a>, Piece<'a>)> {
        let parts = self.split(sep);
        if parts.len() < 2 {
            return None;
        }
        let first = parts[0];
        let cut = first.at - self.at + first.s.len();
        let rest_start = self.s[cut..].find(sep).map(|i| cut + i + sep.len_utf8())?;
        Some((first, Piece { at: self.at + rest_start, s: &self.s[rest_start..] }.trim()))
    }

    fn int(self) -> Result<BigInt> {
        self.s.parse().or_else(|_| self.err(format!("expected an integer, found `{}`", self.s)))
    }

    fn u32(self) -> Result<u32> {
        self.s.parse().or_else(|_| self.err(format!("expected a small non-negative integer, found `{}`", self.s)))
    }

    fn prime(self) -> Result<Prime> {
        let n: u64 = self.s.parse().or_else(|_| self.err(format!("expected a prime, found `{}`", self.s)))?;
        Prime::new(n).or_else(|_| self.err(format!("{n} is not prime")))
    }

    fn rat(self) -> Result<Rat> {
        parse_rat(self.s).map_err(|_| Error::parse(self.at, format!("expected a rational, found `{}`", self.s)))
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::parse(0, format!("expected a rational, found `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(Error::parse(0, "zero denominator"));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(rat_from_int(&s.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_prime(s: &str) -> Result<Prime> {
    Piece::new(s).prime()
}

pub fn parse_poly(s: &str) -> Result<RatPoly> {
    s.parse()
}

/// Irreducible `q`; with `assert` an uncertifiable `q` is taken on trust.
pub fn parse_irreducible(s: &str, assert: bool, cfg: &Config) -> Result<IrreduciblePoly> {
    let f = parse_poly(s)?;
    if assert {
        IrreduciblePoly::asserted(&f, cfg)
    } else {
        IrreduciblePoly::certify(&f, cfg)
    }
}

pub fn parse_set(s: &str, cfg: &Config) -> Result<PAdicSet> {
    set_of(Piece::new(s), cfg)
}

fn set_of(whole: Piece<'_>, cfg: &Config) -> Result<PAdicSet> {
    let mut prime: Option<Prime> = None;
    let (mut balls, mut points, mut seqs) = (Vec::new(), Vec::new(), Vec::new());
    for part in whole.split('|') {
        let (p, piece) = component(part, cfg)?;
        match prime {
            Some(q) if q != p => return part.err(format!("component at p = {p} in a set at p = {q}")),
            _ => prime = Some(p),
        }
        balls.extend(piece.balls().iter().cloned());
        points.extend(piece.point_set().iter().cloned());
        seqs.extend(piece.seqs().iter().cloned());
    }
    PAdicSet::from_parts(prime.expect("at least one component"), balls, points, seqs)
}

fn args<'a>(inner: Piece<'a>, n: usize, what: &str) -> Result<Vec<Piece<'a>>> {
    let a = inner.split(',');
    if a.len() != n {
        return inner.err(format!("{what} takes {n} arguments, found {}", a.len()));
    }
    Ok(a)
}

fn component(part: Piece<'_>, cfg: &Config) -> Result<(Prime, PAdicSet)> {
    if part.s.is_empty() {
        return part.err("empty set component");
    }
    if let Some(inner) = part.call("ball") {
        let a = args(inner, 3, "ball")?;
        let p = a[0].prime()?;
        let ball = Ball::new(p, &a[1].rat()?, a[2].u32()?).map_err(|e| Error::parse(a[1].at, e.to_string()))?;
        return Ok((p, PAdicSet::ball(ball)));
    }
    if let Some(inner) = part.call("pts") {
        let Some((p, rest)) = inner.split_once(';') else {
            let p = inner.prime()?;
            return Ok((p, PAdicSet::empty(p)));
        };
        let p = p.prime()?;
        let mut xs = Vec::new();
        if !rest.s.is_empty() {
            for x in rest.split(',') {
                xs.push(x.rat()?);
            }
        }
        let set = PAdicSet::points(p, xs).map_err(|e| Error::parse(rest.at, e.to_string()))?;
        return Ok((p, set));
    }
    if let Some(inner) = part.call("seq") {
        let Some((p, rest)) = inner.split_once(';') else {
            return inner.err("seq(p; c, a, N, +lim|-lim)");
        };
        let p = p.prime()?;
        let a = args(rest, 4, "seq after the prime")?;
        let include = match a[3].s {
            "+lim" => true,
            "-lim" => false,
            other => return a[3].err(format!("expected +lim or -lim, found `{other}`")),
        };
        let seq = SeqWithLimit::new(p, a[0].rat()?, a[1].rat()?, a[2].u32()?, include)
            .map_err(|e| Error::parse(a[0].at, e.to_string()))?;
        return Ok((p, PAdicSet::seq(seq)));
    }
    if let Some(inner) = part.call("full") {
        let p = inner.prime()?;
        return Ok((p, PAdicSet::full(p)));
    }
    if let Some(inner) = part.call("empty") {
        let p = inner.prime()?;
        return Ok((p, PAdicSet::empty(p)));
    }
    if let Some(inner) = part.call("units+p") {
        let p = inner.prime()?;
        return Ok((p, DefaultRule::UnitsAndSelf.instantiate(p, cfg)?));
    }
    if let Some(inner) = part.call("power") {
        let a = args(inner, 2, "power")?;
        let p = a[0].prime()?;
        let e = a[1].u32()?;
        return Ok((p, DefaultRule::single_power(e)?.instantiate(p, cfg)?));
    }
    part.err(format!("unknown set component `{}`", part.s))
}

pub fn parse_rule(s: &str) -> Result<DefaultRule> {
    rule_of(Piece::new(s))
}

fn rule_of(piece: Piece<'_>) -> Result<DefaultRule> {
    match piece.s {
        "full" => return Ok(DefaultRule::FullZp),
        "units+p" => return Ok(DefaultRule::UnitsAndSelf),
        "empty" => return Ok(DefaultRule::EmptySet),
        _ => {}
    }
    if let Some(inner) = piece.call("power") {
        return DefaultRule::single_power(inner.u32()?);
    }
    if let Some(inner) = piece.call("intset") {
        return Ok(DefaultRule::FromIntegerSet(intset_of(inner)?));
    }
    piece.err(format!("unknown rule `{}`; expected full, units+p, power(e), empty or intset(...)", piece.s))
}

pub fn parse_intset(s: &str) -> Result<IntegerSet> {
    let piece = Piece::new(s);
    intset_of(piece.call("intset").unwrap_or(piece))
}

fn int_list(piece: Piece<'_>) -> Result<Vec<BigInt>> {
    if piece.s.is_empty() {
        return Ok(Vec::new());
    }
    piece.split(',').into_iter().map(|x| x.int()).collect()
}

fn congruence(piece: Piece<'_>) -> Result<Congruence> {
    let Some((r, m)) = piece.s.split_once("mod") else {
        return piece.err(format!("expected `r mod m`, found `{}`", piece.s));
    };
    let at = piece.at + r.len() + 3;
    let r = Piece { at: piece.at, s: r }.trim().int()?;
    let m = Piece { at, s: m }.trim().int()?;
    Congruence::new(r, m).map_err(|e| Error::parse(at, e.to_string()))
}

fn intset_of(piece: Piece<'_>) -> Result<IntegerSet> {
    let mut parts = piece.split('+');
    let base_part = parts.remove(0);
    let (base, excluded) = match base_part.split_once('\\') {
        Some((b, ex)) => (b, Some(ex)),
        None => (base_part, None),
    };
    let mut set = if base.s == "Z" {
        IntegerSet::all()
    } else if let Some(items) = base.braces() {
        IntegerSet::finite(int_list(items)?)
    } else {
        return base.err(format!("expected `Z` or `{{...}}`, found `{}`", base.s));
    };
    if let Some(ex) = excluded {
        let inner = ex.call("").unwrap_or(ex);
        for c in inner.split(';') {
            set = set.excluding(congruence(c)?);
        }
    }
    for extra in parts {
        let Some(items) = extra.braces() else {
            return extra.err("expected `+ {a, b, ...}`");
        };
        set = set.with_extra(int_list(items)?);
    }
    Ok(set)
}

pub fn parse_pres(s: &str) -> Result<AdelePrescription> {
    let piece = Piece::new(s);
    let piece = piece.call("pres").unwrap_or(piece);
    let mut pres = AdelePrescription::new();
    if piece.s.is_empty() {
        return Ok(pres);
    }
    for part in piece.split(';') {
        let Some((p, c)) = part.split_once(':') else {
            return part.err("expected `p: r mod p^k`");
        };
        let p = p.prime()?;
        pres = pres.with(p, congruence(c)?).map_err(|e| Error::parse(c.at, e.to_string()))?;
    }
    Ok(pres)
}

fn prime_sets(piece: Piece<'_>, cfg: &Config) -> Result<BTreeMap<Prime, PAdicSet>> {
    let mut out = BTreeMap::new();
    if piece.s.is_empty() {
        return Ok(out);
    }
    for part in piece.split(';') {
        let Some((p, set)) = part.split_once(':') else {
            return part.err("expected `p: <set>`");
        };
        let p = p.prime()?;
        let set = set_of(set, cfg)?;
        if set.prime() != p {
            return part.err(format!("set at p = {} listed under {p}", set.prime()));
        }
        if out.insert(p, set).is_some() {
            return part.err(format!("prime {p} listed twice"));
        }
    }
    Ok(out)
}

/// `p: <set>; p: <set>` as used for windows and unitary parts.
pub fn parse_prime_sets(s: &str, cfg: &Config) -> Result<BTreeMap<Prime, PAdicSet>> {
    prime_sets(Piece::new(s), cfg)
}

pub fn parse_ring(s: &str, cfg: &Config) -> Result<RingSpec> {
    let piece = Piece::new(s);
    match piece.s {
        "Int(Z)" => return Ok(RingSpec::int_z()),
        "Int(P,Z)" | "Int(P, Z)" => return Ok(RingSpec::int_primes()),
        "Q[X]" => return Ok(RingSpec::q_x()),
        _ => {}
    }
    let Some(inner) = piece.call("ring") else {
        return piece.err("expected ring(<rule>; p: <set>; ...), Int(Z), Int(P,Z) or Q[X]");
    };
    let (rule, rest) = match inner.split_once(';') {
        Some((r, rest)) => (r, Some(rest)),
        None => (inner, None),
    };
    let rule = rule_of(rule)?;
    let sets = match rest {
        Some(rest) => prime_sets(rest, cfg)?,
        None => BTreeMap::new(),
    };
    RingSpec::new(sets, rule, cfg)
}

pub fn parse_representation(s: &str, assert: bool, cfg: &Config) -> Result<Representation> {
    let piece = Piece::new(s);
    let Some(inner) = piece.call("rep") else {
        return piece.err("expected rep(P = {...}; E = {...}; tail <rule>)");
    };
    let (mut family, mut all_min, mut unitary, mut tail) = (Vec::new(), false, BTreeMap::new(), DefaultRule::EmptySet);
    let mut seen = BTreeSet::new();
    for part in inner.split(';') {
        if let Some((key, value)) = part.split_once('=') {
            let Some(items) = value.braces() else {
                return value.err("expected `{...}`");
            };
            match key.s {
                "P" => {
                    if !items.s.is_empty() {
                        for q in items.split(',') {
                            if q.s == "all-min" {
                                all_min = true;
                            } else {
                                family.push(
                                    parse_irreducible(q.s, assert, cfg).map_err(|e| relocate(e, q.at))?,
                                );
                            }
                        }
                    }
                }
                "E" => unitary = prime_sets(items, cfg)?,
                other => return key.err(format!("unknown field `{other}`")),
            }
            seen.insert(key.s);
        } else if let Some(rule) = part.s.strip_prefix("tail") {
            tail = rule_of(Piece { at: part.at + 4, s: rule }.trim())?;
        } else {
            return part.err(format!("unexpected `{}`", part.s));
        }
    }
    Representation::new(family, all_min, unitary, tail)
}

fn relocate(e: Error, at: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + at, msg },
        other => other,
    }
}
