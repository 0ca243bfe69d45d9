//! Certified root location and valuation suprema of an irreducible `q` over a
//! p-adic set.
//!
//! Balls are explored with a residue tree. At a node `r + p^j Z_p` with
//! `vq = vp(q(r))`, `vd = vp(q'(r))`:
//!
//! * if `vq < j`, every other Taylor term has valuation `≥ j`, so `vp(q)` is
//!   the constant `vq` on the node and there is no root;
//! * if Hensel applies (`vq > 2vd`) and `j > vd`, the node holds exactly one
//!   root when `vq - vd ≥ j` and none otherwise (valuation constant `vq`);
//! * otherwise the node splits into its `p` children.
//!
//! Along every branch `min(vq, vd)` is bounded by `vp(Res(q, q'))`, so the
//! tree stops by depth `2·vp(Res(q, q')) + 1`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{fmt_rat, rat_from_int, require_zp, vp, vp_int, Prime, Rat, Valuation};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::irreducible::IrreduciblePoly;
use crate::padic::{Ball, PAdicSet, SeqWithLimit};
use crate::poly::{eval_int, eval_rat, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootKind {
    Exact(Rat),
    /// `vp(q(residue)) > 2·deriv_val` with `deriv_val = vp(q'(residue))`.
    Hensel { residue: BigInt, value_val: i64, deriv_val: i64 },
}

/// A root of `q` in `ball`, unique there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCertificate {
    pub p: Prime,
    pub ball: Ball,
    pub kind: RootKind,
}

impl RootCertificate {
    /// Re-checks the certificate against `q` from scratch.
    pub fn validate(&self, q: &IrreduciblePoly) -> Result<()> {
        let fail = |m: String| Err(Error::Invalid(format!("certificate rejected: {m}")));
        let dq = q.derivative();
        match &self.kind {
            RootKind::Exact(x) => {
                if !q.eval(x).is_zero() {
                    return fail(format!("q({}) != 0", fmt_rat(x)));
                }
                if !self.ball.contains(x) {
                    return fail("root outside its ball".into());
                }
                Ok(())
            }
            RootKind::Hensel { residue, value_val, deriv_val } => {
                let v = vp_int(&eval_int(q.coeffs(), residue), self.p);
                let d = vp_int(&eval_int(&dq, residue), self.p);
                if v != Valuation::Finite(*value_val) || d != Valuation::Finite(*deriv_val) {
                    return fail("recorded valuations do not match".into());
                }
                if value_val <= &(2 * deriv_val) {
                    return fail("lifting criterion fails".into());
                }
                if !self.ball.contains_int(residue) || i64::from(self.ball.depth()) > value_val - deriv_val
                    || i64::from(self.ball.depth()) <= *deriv_val
                {
                    return fail("ball does not match the lifting data".into());
                }
                // one Newton step must strictly improve the approximation
                let r = rat_from_int(residue);
                let next = &r - q.eval(&r) / eval_rat(&dq, &r);
                let improved = vp(&q.eval(&next), self.p);
                if improved <= Valuation::Finite(*value_val) {
                    return fail("Newton step did not increase the valuation".into());
                }
                Ok(())
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kind = match &self.kind {
            RootKind::Exact(x) => serde_json::json!({ "kind": "exact", "value": fmt_rat(x) }),
            RootKind::Hensel { residue, value_val, deriv_val } => serde_json::json!({
                "kind": "hensel",
                "residue": residue.to_string(),
                "value_valuation": value_val,
                "derivative_valuation": deriv_val,
            }),
        };
        serde_json::json!({
            "p": self.p.get(),
            "ball": { "center": self.ball.center().to_string(), "depth": self.ball.depth() },
            "certificate": kind,
        })
    }
}

impl std::fmt::Display for RootCertificate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            RootKind::Exact(x) => write!(f, "exact root {} in {}", fmt_rat(x), self.ball),
            RootKind::Hensel { residue, value_val, deriv_val } => write!(
                f,
                "unique root in {} (Hensel at {residue}: v(q) = {value_val} > 2*v(q') = {})",
                self.ball,
                2 * deriv_val
            ),
        }
    }
}

/// Result of exploring one ball.
struct TreeOutcome {
    roots: Vec<RootCertificate>,
    /// Largest constant valuation found on a root-free node, with its residue.
    best: Option<(i64, BigInt)>,
}

fn explore_ball(q: &IrreduciblePoly, ball: &Ball, cfg: &Config) -> Result<TreeOutcome> {
    let p = ball.prime();
    let dq = q.derivative();
    let mut out = TreeOutcome { roots: Vec::new(), best: None };
    let mut stack = vec![ball.clone()];
    let mut visited: u64 = 0;
    while let Some(node) = stack.pop() {
        visited += 1;
        if visited > cfg.residue_cap {
            return Err(Error::cap("residue tree nodes", visited, cfg.residue_cap));
        }
        let r = node.center();
        let j = i64::from(node.depth());
        let qr = eval_int(q.coeffs(), r);
        let vq = vp_int(&qr, p);
        // q'(r) = 0 is possible at isolated residues; treat it as "no lift yet"
        let vd = vp_int(&eval_int(&dq, r), p).finite();
        let hensel = match (vq, vd) {
            (_, None) => None,
            (Valuation::Infinite, Some(d)) => Some(d),
            (Valuation::Finite(v), Some(d)) => (v > 2 * d).then_some(d),
        };
        if let Some(vd) = hensel.filter(|&d| j > d) {
            match vq {
                Valuation::Infinite => {
                    out.roots.push(RootCertificate {
                        p,
                        ball: node.clone(),
                        kind: RootKind::Exact(rat_from_int(r)),
                    });
                }
                Valuation::Finite(v) if v - vd >= j => {
                    let depth = (v - vd) as u32;
                    out.roots.push(RootCertificate {
                        p,
                        ball: Ball::from_int(p, r, depth),
                        kind: RootKind::Hensel { residue: r.clone(), value_val: v, deriv_val: vd },
                    });
                }
                Valuation::Finite(v) => note_best(&mut out.best, v, r),
            }
            continue;
        }
        if let Valuation::Finite(v) = vq {
            if v < j {
                note_best(&mut out.best, v, r);
                continue;
            }
        }
        stack.extend(node.children());
    }
    Ok(out)
}

fn note_best(best: &mut Option<(i64, BigInt)>, v: i64, r: &BigInt) {
    if best.as_ref().is_none_or(|(b, _)| v > *b) {
        *best = Some((v, r.clone()));
    }
}

/// For a sequence `c + a·p^n`: the first index beyond which nothing new
/// can happen (constant valuation, or no roots near a root limit).
fn seq_horizon(q: &IrreduciblePoly, s: &SeqWithLimit) -> Result<u32> {
    let p = s.prime();
    let va = vp(s.scale(), p).finite().expect("nonzero scale");
    let c = s.limit();
    let bound = match vp(&q.eval(c), p) {
        // vp(q(x)) = vp(q(c)) once vp(x - c) > vp(q(c))
        Valuation::Finite(w) => w + 1,
        // vp(q(x)) = vp(q'(c)) + vp(x - c) once vp(x - c) > vp(q'(c))
        Valuation::Infinite => {
            vp(&eval_rat(&q.derivative(), c), p).finite().expect("simple root") + 1
        }
    };
    let n = (bound - va).max(0);
    u32::try_from(n).map_err(|_| Error::cap("sequence prefix", n, u64::from(u32::MAX)))
}

fn exact_root_cert(q: &IrreduciblePoly, p: Prime, x: &Rat) -> RootCertificate {
    let vd = vp(&eval_rat(&q.derivative(), x), p).finite().expect("simple root");
    RootCertificate { p, ball: Ball::new(p, x, (vd + 1) as u32).expect("root in Z_p"), kind: RootKind::Exact(x.clone()) }
}

/// Every root of `q` lying in `s`, each with a certificate.
pub fn roots_in_set(q: &IrreduciblePoly, s: &PAdicSet, cfg: &Config) -> Result<Vec<RootCertificate>> {
    let p = s.prime();
    let mut roots = Vec::new();
    for ball in s.balls() {
        roots.extend(explore_ball(q, ball, cfg)?.roots);
    }
    for x in s.point_set() {
        if q.eval(x).is_zero() {
            roots.push(exact_root_cert(q, p, x));
        }
    }
    for seq in s.seqs() {
        if seq.include_limit() && q.eval(seq.limit()).is_zero() {
            roots.push(exact_root_cert(q, p, seq.limit()));
        }
        let horizon = seq_horizon(q, seq)?;
        check_prefix(horizon, seq.start(), cfg)?;
        for n in seq.start()..horizon.max(seq.start()) {
            let x = seq.element(n);
            if q.eval(&x).is_zero() {
                roots.push(exact_root_cert(q, p, &x));
            }
        }
    }
    if q.degree() == 1 {
        // the unique root is rational: report it exactly
        let root = -rat_from_int(&q.coeffs()[0]) / rat_from_int(&q.coeffs()[1]);
        for cert in &mut roots {
            if let RootKind::Hensel { .. } = cert.kind {
                cert.kind = RootKind::Exact(root.clone());
            }
        }
    }
    Ok(roots)
}

fn check_prefix(horizon: u32, start: u32, cfg: &Config) -> Result<()> {
    let len = u64::from(horizon.saturating_sub(start));
    if len > cfg.residue_cap {
        return Err(Error::cap("sequence prefix elements", len, cfg.residue_cap));
    }
    Ok(())
}

/// `sup { vp(q(α)) : α ∈ S }` with an element attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxValuation {
    pub value: Valuation,
    /// An exact attaining element when one is rational.
    #[serde(serialize_with = "ser_opt_rat")]
    pub witness: Option<Rat>,
}

fn ser_opt_rat<S: serde::Serializer>(v: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&fmt_rat(x)),
        None => s.serialize_none(),
    }
}

/// The supremum of `vp(q)` over the closure of `s`; infinite exactly when
/// that closure contains a root. `None` for the empty set.
pub fn max_valuation(q: &IrreduciblePoly, s: &PAdicSet, cfg: &Config) -> Result<Option<MaxValuation>> {
    let s = s.closure();
    if s.is_empty() {
        return Ok(None);
    }
    let roots = roots_in_set(q, &s, cfg)?;
    if let Some(cert) = roots.first() {
        let witness = match &cert.kind {
            RootKind::Exact(x) => Some(x.clone()),
            RootKind::Hensel { .. } => None,
        };
        return Ok(Some(MaxValuation { value: Valuation::Infinite, witness }));
    }
    let p = s.prime();
    let mut best: Option<(i64, Rat)> = None;
    let mut consider = |v: i64, x: Rat| {
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, x));
        }
    };
    for ball in s.balls() {
        if let Some((v, r)) = explore_ball(q, ball, cfg)?.best {
            consider(v, rat_from_int(&r));
        }
    }
    let val = |x: &Rat| vp(&q.eval(x), p).finite().expect("no roots");
    for x in s.point_set() {
        consider(val(x), x.clone());
    }
    for seq in s.seqs() {
        let horizon = seq_horizon(q, seq)?;
        check_prefix(horizon, seq.start(), cfg)?;
        for n in seq.start()..horizon.max(seq.start()) {
            let x = seq.element(n);
            consider(val(&x), x);
        }
        // the tail shares the limit's valuation, and the limit is present
        consider(val(seq.limit()), seq.limit().clone());
    }
    let (v, x) = best.expect("nonempty set");
    Ok(Some(MaxValuation { value: Valuation::Finite(v), witness: Some(x) }))
}

/// `g(r) mod p^m` for every residue `r mod p^m`, where `f = g/d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueTable {
    pub p: Prime,
    pub m: u32,
    pub values: Vec<BigInt>,
}

pub fn reduce_mod(f: &RatPoly, p: Prime, m: u32, cfg: &Config) -> Result<ResidueTable> {
    let dv = vp_int(f.denominator(), p).finite().expect("positive denominator");
    if dv > i64::from(m) {
        return Err(Error::Precondition(format!(
            "the denominator has p-part p^{dv}, more than p^{m}"
        )));
    }
    let modulus = p.pow(m);
    if modulus > BigInt::from(cfg.residue_cap) {
        return Err(Error::cap("residues", &modulus, cfg.residue_cap));
    }
    let n = u64::try_from(&modulus).expect("below the cap");
    let values = (0..n)
        .map(|r| crate::arith::modulo(&eval_int(f.numerator(), &BigInt::from(r)), &modulus))
        .collect();
    Ok(ResidueTable { p, m, values })
}

/// Convenience: is `x` a root, for any rational in `Z_p`.
pub fn is_root(q: &IrreduciblePoly, x: &Rat, p: Prime) -> Result<bool> {
    require_zp(x, p)?;
    Ok(q.eval(x).is_zero())
}

impl RootCertificate {
    pub fn is_exact(&self) -> bool {
        matches!(self.kind, RootKind::Exact(_))
    }
}
