//! Finitely describable closed (and not necessarily closed) subsets of `Z_p`.
//!
//! A [`PAdicSet`] is a finite union of balls `c + p^k Z_p`, finitely many
//! rational points and geometric sequences `{c + a·p^n : n ≥ N}` that
//! converge to their limit `c` (which may or may not belong to the set).
//!
//! Every constructor returns the canonical form, so structural equality is
//! set equality inside this algebra:
//!
//! * balls are pairwise disjoint, and no `p` sibling balls appear together
//!   (they are merged into their parent);
//! * no point or sequence element lies in a ball;
//! * sequences start at index 0 (the scale absorbs `p^N`) and are extended
//!   backwards as long as the previous element is already in the set;
//! * a sequence carries `include_limit = true` iff its limit lies in the set,
//!   and such a limit is never repeated as a point.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_rat, in_zp, rat_from_int, require_zp, residue, vp, Prime, Rat, Valuation};
use crate::error::{Error, Result};

/// The ball `center + p^depth Z_p`, with `0 ≤ center < p^depth`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    p: Prime,
    depth: u32,
    center: BigInt,
}

impl Ball {
    pub fn new(p: Prime, center: &Rat, depth: u32) -> Result<Ball> {
        Ok(Ball { p, depth, center: residue(center, p, depth)? })
    }

    pub fn from_int(p: Prime, center: &BigInt, depth: u32) -> Ball {
        Ball { p, depth, center: crate::arith::modulo(center, &p.pow(depth)) }
    }

    /// `Z_p` itself.
    pub fn full(p: Prime) -> Ball {
        Ball { p, depth: 0, center: BigInt::zero() }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn center(&self) -> &BigInt {
        &self.center
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn contains(&self, x: &Rat) -> bool {
        if !in_zp(x, self.p) {
            return false;
        }
        self.depth == 0 || residue(x, self.p, self.depth).expect("in Z_p") == self.center
    }

    pub fn contains_int(&self, x: &BigInt) -> bool {
        crate::arith::modulo(x, &self.p.pow(self.depth)) == self.center
    }

    /// `other ⊆ self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        other.depth >= self.depth && self.contains_int(&other.center)
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.contains_ball(other) || other.contains_ball(self)
    }

    /// The `p` balls of depth `depth + 1` partitioning this one.
    pub fn children(&self) -> impl Iterator<Item = Ball> + '_ {
        let step = self.p.pow(self.depth);
        (0..self.p.get()).map(move |i| Ball {
            p: self.p,
            depth: self.depth + 1,
            center: &self.center + &step * BigInt::from(i),
        })
    }

    fn parent(&self) -> Option<Ball> {
        (self.depth > 0).then(|| Ball::from_int(self.p, &self.center, self.depth - 1))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            write!(f, "full({})", self.p)
        } else {
            write!(f, "ball({}, {}, {})", self.p, self.center, self.depth)
        }
    }
}

/// `{limit + scale·p^n : n ≥ start}`, plus `limit` when `include_limit`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeqWithLimit {
    p: Prime,
    limit: Rat,
    scale: Rat,
    start: u32,
    include_limit: bool,
}

impl SeqWithLimit {
    pub fn new(p: Prime, limit: Rat, scale: Rat, start: u32, include_limit: bool) -> Result<Self> {
        require_zp(&limit, p)?;
        if scale.is_zero() {
            return Err(Error::Invalid("sequence scale must be nonzero".into()));
        }
        require_zp(&scale, p)?;
        Ok(SeqWithLimit { p, limit, scale, start, include_limit })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn limit(&self) -> &Rat {
        &self.limit
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn include_limit(&self) -> bool {
        self.include_limit
    }

    /// `limit + scale·p^n` for any `n ≥ 0`, ignoring `start`.
    pub fn element(&self, n: u32) -> Rat {
        &self.limit + &self.scale * rat_from_int(&self.p.pow(n))
    }

    fn scale_vp(&self) -> i64 {
        vp(&self.scale, self.p).finite().expect("nonzero scale")
    }

    /// The index `n ≥ start` with `element(n) == x`, if any.
    pub fn index_of(&self, x: &Rat) -> Option<u32> {
        let t = (x - &self.limit) / &self.scale;
        if !t.is_integer() || !t.numer().is_positive() {
            return None;
        }
        let n = vp(&t, self.p).finite()?;
        if rat_from_int(&self.p.pow(n as u32)) != t {
            return None;
        }
        (n as u32 >= self.start).then_some(n as u32)
    }

    pub fn contains(&self, x: &Rat) -> bool {
        (self.include_limit && x == &self.limit) || self.index_of(x).is_some()
    }

    /// Same sequence re-indexed so that it starts at 0.
    fn normalized(&self) -> SeqWithLimit {
        SeqWithLimit {
            scale: &self.scale * rat_from_int(&self.p.pow(self.start)),
            start: 0,
            ..self.clone()
        }
    }

    fn shifted(&self, by: u32) -> SeqWithLimit {
        SeqWithLimit { scale: &self.scale * rat_from_int(&self.p.pow(by)), ..self.clone() }
    }

    /// `Some(j)` when `self.scale / other.scale = p^j`.
    fn power_ratio(&self, other: &SeqWithLimit) -> Option<i64> {
        let t = &self.scale / &other.scale;
        let j = vp(&t, self.p).finite()?;
        let pj = if j >= 0 {
            rat_from_int(&self.p.pow(j as u32))
        } else {
            Rat::one() / rat_from_int(&self.p.pow((-j) as u32))
        };
        (pj == t).then_some(j)
    }
}

impl fmt::Display for SeqWithLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seq({}; {}, {}, {}, {})",
            self.p,
            fmt_rat(&self.limit),
            fmt_rat(&self.scale),
            self.start,
            if self.include_limit { "+lim" } else { "-lim" }
        )
    }
}

/// A finitely describable subset of `Z_p`, always held in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PAdicSet {
    p: Prime,
    balls: Vec<Ball>,
    points: BTreeSet<Rat>,
    seqs: Vec<SeqWithLimit>,
}

impl PAdicSet {
    pub fn empty(p: Prime) -> PAdicSet {
        PAdicSet { p, balls: Vec::new(), points: BTreeSet::new(), seqs: Vec::new() }
    }

    pub fn full(p: Prime) -> PAdicSet {
        PAdicSet { p, balls: vec![Ball::full(p)], points: BTreeSet::new(), seqs: Vec::new() }
    }

    pub fn ball(ball: Ball) -> PAdicSet {
        PAdicSet { p: ball.p, balls: vec![ball], points: BTreeSet::new(), seqs: Vec::new() }
    }

    pub fn points(p: Prime, pts: impl IntoIterator<Item = Rat>) -> Result<PAdicSet> {
        PAdicSet::from_parts(p, Vec::new(), pts.into_iter().collect(), Vec::new())
    }

    pub fn seq(seq: SeqWithLimit) -> PAdicSet {
        let p = seq.p;
        PAdicSet::from_parts(p, Vec::new(), Vec::new(), vec![seq]).expect("validated sequence")
    }

    /// Builds and canonicalizes a set from raw components.
    pub fn from_parts(
        p: Prime,
        balls: Vec<Ball>,
        points: Vec<Rat>,
        seqs: Vec<SeqWithLimit>,
    ) -> Result<PAdicSet> {
        for b in &balls {
            check_prime(p, b.p)?;
        }
        for s in &seqs {
            check_prime(p, s.p)?;
        }
        for x in &points {
            require_zp(x, p)?;
        }
        let raw = PAdicSet { p, balls, points: points.into_iter().collect(), seqs };
        Ok(raw.canonicalize())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn point_set(&self) -> &BTreeSet<Rat> {
        &self.points
    }

    pub fn seqs(&self) -> &[SeqWithLimit] {
        &self.seqs
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty() && self.points.is_empty() && self.seqs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.balls.len() == 1 && self.balls[0].depth == 0
    }

    /// Closed iff every sequence contains its limit.
    pub fn is_closed(&self) -> bool {
        self.seqs.iter().all(|s| s.include_limit)
    }

    pub fn union(&self, other: &PAdicSet) -> Result<PAdicSet> {
        check_prime(self.p, other.p)?;
        let mut raw = self.clone();
        raw.balls.extend(other.balls.iter().cloned());
        raw.points.extend(other.points.iter().cloned());
        raw.seqs.extend(other.seqs.iter().cloned());
        Ok(raw.canonicalize())
    }

    /// Membership of a rational `x`; values outside `Z_p` are simply not members.
    pub fn contains(&self, x: &Rat) -> bool {
        self.balls.iter().any(|b| b.contains(x))
            || self.points.contains(x)
            || self.seqs.iter().any(|s| s.contains(x))
    }

    /// Membership with the precondition `x ∈ Z_p` enforced.
    pub fn member(&self, x: &Rat) -> Result<bool> {
        require_zp(x, self.p)?;
        Ok(self.contains(x))
    }

    fn in_balls(&self, x: &Rat) -> bool {
        self.balls.iter().any(|b| b.contains(x))
    }

    fn max_depth(&self) -> u32 {
        self.balls.iter().map(|b| b.depth).max().unwrap_or(0)
    }

    /// Restores every invariant listed in the module docs.
    pub fn canonicalize(&self) -> PAdicSet {
        let p = self.p;
        let balls = canonical_balls(p, &self.balls);
        let mut out = PAdicSet { p, balls, points: BTreeSet::new(), seqs: Vec::new() };
        let depth = out.max_depth() as i64;

        let mut points: BTreeSet<Rat> = self.points.clone();
        let mut seqs: Vec<SeqWithLimit> = Vec::new();
        for s in &self.seqs {
            let s = s.normalized();
            // Beyond n0 every element agrees with the limit modulo p^depth.
            let n0 = (depth - s.scale_vp()).max(0) as u32;
            if out.in_balls(&s.limit) {
                points.extend((0..n0).map(|n| s.element(n)));
                continue;
            }
            let last_inside = (0..n0).rev().find(|&n| out.in_balls(&s.element(n)));
            let cut = last_inside.map_or(0, |n| n + 1);
            points.extend((0..cut).map(|n| s.element(n)));
            if s.include_limit {
                points.insert(s.limit.clone());
            }
            seqs.push(SeqWithLimit { include_limit: false, ..s.shifted(cut) });
        }
        points.retain(|x| !out.in_balls(x));

        // Same limit with a p-power scale ratio means one tail contains the other.
        let mut merged: Vec<SeqWithLimit> = Vec::new();
        for s in seqs {
            match merged.iter_mut().find(|m| m.limit == s.limit && m.power_ratio(&s).is_some()) {
                Some(m) => {
                    if m.power_ratio(&s).unwrap() > 0 {
                        m.scale = s.scale;
                    }
                }
                None => merged.push(s),
            }
        }
        out.points = points;
        out.seqs = merged;

        // Extend backwards while the previous element is already present.
        for i in 0..out.seqs.len() {
            loop {
                let s = &out.seqs[i];
                if s.scale_vp() < 1 {
                    break;
                }
                let prev = &s.limit + &s.scale / rat_from_int(&p.big());
                if out.in_balls(&prev) || !out.contains(&prev) {
                    break;
                }
                let scale = &out.seqs[i].scale / rat_from_int(&p.big());
                out.seqs[i].scale = scale;
            }
        }

        let limits_present: Vec<bool> = out.seqs.iter().map(|s| out.contains(&s.limit)).collect();
        for (s, present) in out.seqs.iter_mut().zip(limits_present) {
            s.include_limit = present;
        }
        let seqs = out.seqs.clone();
        out.points.retain(|x| !seqs.iter().any(|s| s.contains(x)));
        out.seqs.sort();
        out.seqs.dedup();
        out
    }

    /// Topological closure: every sequence receives its limit.
    pub fn closure(&self) -> PAdicSet {
        let mut raw = self.clone();
        for s in &mut raw.seqs {
            s.include_limit = true;
        }
        raw.canonicalize()
    }

    /// `self ⊆ other`.
    ///
    /// Balls must be covered by the other set's balls alone; points and
    /// sequence prefixes are tested one by one and sequence tails are decided
    /// through the limit.
    pub fn is_subset(&self, other: &PAdicSet) -> Result<bool> {
        check_prime(self.p, other.p)?;
        let b = other.canonicalize();
        for ball in &self.balls {
            if !covered_by_balls(ball, &b.balls) {
                return Ok(false);
            }
        }
        if !self.points.iter().all(|x| b.contains(x)) {
            return Ok(false);
        }
        for s in &self.seqs {
            if s.include_limit && !b.contains(&s.limit) {
                return Ok(false);
            }
            let s = s.normalized();
            let tail_from = if b.in_balls(&s.limit) {
                (b.max_depth() as i64 - s.scale_vp()).max(0)
            } else {
                let owner = b
                    .seqs
                    .iter()
                    .filter(|t| t.limit == s.limit)
                    .find_map(|t| s.power_ratio(&t.normalized()));
                match owner {
                    // s_n = t_{n+j}, present once n + j ≥ 0
                    Some(j) => (-j).max(0),
                    None => return Ok(false),
                }
            };
            if !(0..tail_from as u32).all(|n| b.contains(&s.element(n))) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `closure(self) ⊇ dense_target`.
    pub fn is_dense_in(&self, target: &PAdicSet) -> Result<bool> {
        target.is_subset(&self.closure())
    }

    /// Set equality (of canonical forms).
    pub fn set_eq(&self, other: &PAdicSet) -> bool {
        self.canonicalize() == other.canonicalize()
    }

    /// `true` iff the set meets the ball.
    pub fn meets_ball(&self, ball: &Ball) -> Result<bool> {
        check_prime(self.p, ball.p)?;
        if self.balls.iter().any(|b| b.overlaps(ball)) || self.points.iter().any(|x| ball.contains(x)) {
            return Ok(true);
        }
        for s in &self.seqs {
            let s = s.normalized();
            if ball.contains(&s.limit) {
                return Ok(true);
            }
            let n0 = (ball.depth as i64 - s.scale_vp()).max(0) as u32;
            if (0..n0).any(|n| ball.contains(&s.element(n))) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The isolated points: finite points plus sequence elements, except any
    /// element that is itself an accumulation point (a ball member or a limit).
    pub fn isolated_points(&self) -> IsolatedPoints {
        let limits: Vec<&Rat> = self.seqs.iter().map(|s| &s.limit).collect();
        let accumulates = |x: &Rat| self.in_balls(x) || limits.contains(&x);
        let mut points: BTreeSet<Rat> =
            self.points.iter().filter(|x| !accumulates(x)).cloned().collect();
        let mut tails = Vec::new();
        for s in &self.seqs {
            let s = s.normalized();
            let bad: Vec<u32> = limits.iter().filter_map(|c| s.index_of(c)).collect();
            let cut = bad.iter().max().map_or(0, |&n| n + 1);
            points.extend((0..cut).filter(|n| !bad.contains(n)).map(|n| s.element(n)));
            tails.push(SeqWithLimit { include_limit: false, ..s.shifted(cut) });
        }
        IsolatedPoints { p: self.p, points, tails }
    }

    /// Removes one isolated point.
    pub fn remove_point(&self, x: &Rat) -> Result<PAdicSet> {
        if !self.isolated_points().contains(x) {
            return Err(Error::Precondition(format!(
                "{} is not an isolated point of {self}",
                fmt_rat(x)
            )));
        }
        let mut raw = self.clone();
        raw.points.remove(x);
        let mut seqs = Vec::new();
        for s in &self.seqs {
            let s = s.normalized();
            match s.index_of(x) {
                Some(n) => {
                    raw.points.extend((0..n).map(|m| s.element(m)));
                    seqs.push(s.shifted(n + 1));
                }
                None => seqs.push(s),
            }
        }
        raw.seqs = seqs;
        let out = raw.canonicalize();
        debug_assert!(!out.contains(x));
        Ok(out)
    }

    /// A few concrete members, useful for witnesses and sampling.
    pub fn sample_points(&self, per_component: u32) -> Vec<Rat> {
        let mut out = Vec::new();
        for b in &self.balls {
            let step = self.p.pow(b.depth);
            for i in 0..per_component {
                out.push(rat_from_int(&(&b.center + &step * BigInt::from(i))));
            }
        }
        out.extend(self.points.iter().cloned());
        for s in &self.seqs {
            out.extend((s.start..s.start + per_component).map(|n| s.element(n)));
            if s.include_limit {
                out.push(s.limit.clone());
            }
        }
        out
    }
}

fn check_prime(a: Prime, b: Prime) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::PrimeMismatch(a.get(), b.get()))
    }
}

fn canonical_balls(p: Prime, balls: &[Ball]) -> Vec<Ball> {
    let mut sorted: Vec<Ball> = balls.to_vec();
    sorted.sort();
    let mut kept: Vec<Ball> = Vec::new();
    for b in sorted {
        if !kept.iter().any(|k| k.contains_ball(&b)) {
            kept.push(b);
        }
    }
    // Merge complete sibling families into their parent until stable.
    loop {
        let mut families: BTreeMap<Ball, usize> = BTreeMap::new();
        for b in &kept {
            if let Some(parent) = b.parent() {
                *families.entry(parent).or_default() += 1;
            }
        }
        let complete: Vec<Ball> =
            families.into_iter().filter(|(_, n)| *n as u64 == p.get()).map(|(b, _)| b).collect();
        if complete.is_empty() {
            break;
        }
        kept.retain(|b| !complete.iter().any(|c| c.contains_ball(b)));
        kept.extend(complete);
    }
    kept.sort();
    kept
}

/// Disjoint balls cover `target` iff one contains it or the measures of those
/// inside it sum to the measure of `target`.
fn covered_by_balls(target: &Ball, balls: &[Ball]) -> bool {
    if balls.iter().any(|b| b.contains_ball(target)) {
        return true;
    }
    let mut measure = Rat::zero();
    for b in balls.iter().filter(|b| target.contains_ball(b)) {
        measure += Rat::new(BigInt::one(), target.p.pow(b.depth - target.depth));
    }
    measure == Rat::one()
}

impl fmt::Display for PAdicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty({})", self.p);
        }
        let mut parts: Vec<String> = self.balls.iter().map(|b| b.to_string()).collect();
        if !self.points.is_empty() {
            let pts: Vec<String> = self.points.iter().map(fmt_rat).collect();
            parts.push(format!("pts({}; {})", self.p, pts.join(", ")));
        }
        parts.extend(self.seqs.iter().map(|s| s.to_string()));
        write!(f, "{}", parts.join(" | "))
    }
}

/// Isolated points of a set: explicit points plus whole sequence tails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedPoints {
    pub p: Prime,
    pub points: BTreeSet<Rat>,
    /// Sequences without their limits; every element is isolated.
    pub tails: Vec<SeqWithLimit>,
}

impl IsolatedPoints {
    pub fn contains(&self, x: &Rat) -> bool {
        self.points.contains(x) || self.tails.iter().any(|s| s.index_of(x).is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.tails.is_empty()
    }

    /// The isolated points as a (generally non-closed) set.
    pub fn as_set(&self) -> PAdicSet {
        PAdicSet::from_parts(
            self.p,
            Vec::new(),
            self.points.iter().cloned().collect(),
            self.tails.clone(),
        )
        .expect("components already validated")
    }
}

/// Valuation of `x - y`, handy for distance computations.
pub fn distance_vp(x: &Rat, y: &Rat, p: Prime) -> Valuation {
    vp(&(x - y), p)
}
