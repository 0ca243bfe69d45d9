//! Rational polynomials stored as an integer polynomial over a positive
//! denominator, plus the small amount of `Z[X]` arithmetic the rest needs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{lcm, rat_from_int, Rat};
use crate::config::Config;
use crate::error::{Error, Result};

/// `f = g/d` with `g ∈ Z[X]` (low degree first), `d > 0`, `gcd(content(g), d) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatPoly {
    num: Vec<BigInt>,
    den: BigInt,
}

impl RatPoly {
    pub fn new(mut num: Vec<BigInt>, mut den: BigInt) -> Result<RatPoly> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        trim(&mut num);
        if num.is_empty() {
            return Ok(RatPoly::zero());
        }
        let g = num.iter().fold(den.clone(), |acc, c| acc.gcd(c));
        Ok(RatPoly { num: num.iter().map(|c| c / &g).collect(), den: den / g })
    }

    pub fn zero() -> RatPoly {
        RatPoly { num: Vec::new(), den: BigInt::one() }
    }

    pub fn x() -> RatPoly {
        RatPoly { num: vec![BigInt::zero(), BigInt::one()], den: BigInt::one() }
    }

    pub fn constant(c: &Rat) -> RatPoly {
        RatPoly::new(vec![c.numer().clone()], c.denom().clone()).expect("nonzero denominator")
    }

    pub fn from_int_poly(num: &[BigInt]) -> RatPoly {
        RatPoly::new(num.to_vec(), BigInt::one()).expect("unit denominator")
    }

    /// Builds from rational coefficients, low degree first.
    pub fn from_coeffs(coeffs: &[Rat]) -> RatPoly {
        let d = coeffs.iter().fold(BigInt::one(), |acc, c| lcm(&acc, c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&d / c.denom())).collect();
        RatPoly::new(num, d).expect("positive denominator")
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        self.num.iter().map(|c| Rat::new(c.clone(), self.den.clone())).collect()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        eval_rat(&self.num, x) / rat_from_int(&self.den)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(derivative(&self.num), self.den.clone()).expect("positive denominator")
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        RatPoly::new(
            self.num.iter().map(|a| a * c.numer()).collect(),
            &self.den * c.denom(),
        )
        .expect("positive denominator")
    }

    pub fn pow(&self, e: u32) -> RatPoly {
        (0..e).fold(RatPoly::constant(&Rat::one()), |acc, _| &acc * self)
    }

    pub fn check_degree(&self, cfg: &Config) -> Result<()> {
        match self.degree() {
            Some(d) if d > cfg.degree_bound => Err(Error::cap("polynomial degree", d, cfg.degree_bound as u64)),
            _ => Ok(()),
        }
    }

    /// `∏ (X - r)` over the given integer roots.
    pub fn from_roots(roots: &[BigInt]) -> RatPoly {
        let mut g = vec![BigInt::one()];
        for r in roots {
            g = mul(&g, &[-r, BigInt::one()]);
        }
        RatPoly::from_int_poly(&g)
    }
}

impl std::ops::Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, o: &RatPoly) -> RatPoly {
        let d = lcm(&self.den, &o.den);
        let a: Vec<BigInt> = self.num.iter().map(|c| c * (&d / &self.den)).collect();
        let b: Vec<BigInt> = o.num.iter().map(|c| c * (&d / &o.den)).collect();
        RatPoly::new(add(&a, &b), d).expect("positive denominator")
    }
}

impl std::ops::Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl std::ops::Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, o: &RatPoly) -> RatPoly {
        self + &(-o)
    }
}

impl std::ops::Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, o: &RatPoly) -> RatPoly {
        RatPoly::new(mul(&self.num, &o.num), &self.den * &o.den).expect("positive denominator")
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = fmt_int_poly(&self.num);
        if self.den.is_one() {
            write!(f, "{body}")
        } else if self.num.len() > 1 && self.num.iter().filter(|c| !c.is_zero()).count() > 1 {
            write!(f, "({body})/{}", self.den)
        } else {
            write!(f, "{body}/{}", self.den)
        }
    }
}

/// Human-readable form of an integer polynomial, highest degree first.
pub fn fmt_int_poly(g: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in g.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "X".to_string(),
            _ => format!("X^{i}"),
        };
        if mono.is_empty() || !a.is_one() {
            out.push_str(&a.to_string());
            if !mono.is_empty() {
                out.push('*');
            }
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl FromStr for RatPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<RatPoly> {
        let t = s.trim();
        let inner = t.strip_prefix("poly(").and_then(|r| r.strip_suffix(')'));
        let (src, offset) = match inner {
            Some(body) => (body, s.find("poly(").unwrap() + 5),
            None => (s, 0),
        };
        let mut p = Parser { src: src.as_bytes(), pos: 0, offset };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    offset: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(self.pos + self.offset, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    let c = match rhs.degree() {
                        Some(0) => rhs.coeffs()[0].clone(),
                        None => return Err(Error::parse(at + self.offset, "division by zero")),
                        _ => return Err(Error::parse(at + self.offset, "division by a non-constant polynomial")),
                    };
                    acc = acc.scale(&(Rat::one() / c));
                }
                // juxtaposition such as 3X or 2(X+1)
                Some(b'0'..=b'9' | b'X' | b'x' | b'(') => acc = &acc * &self.power()?,
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.number()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            if e > 4096 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatPoly> {
        match self.peek() {
            Some(b'X' | b'x') => {
                self.pos += 1;
                Ok(RatPoly::x())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'0'..=b'9') => Ok(RatPoly::constant(&rat_from_int(&self.number()?))),
            Some(_) => Err(self.err("expected a number, X or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }
}

pub(crate) fn trim(g: &mut Vec<BigInt>) {
    while g.last().is_some_and(|c| c.is_zero()) {
        g.pop();
    }
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn derivative(g: &[BigInt]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = g.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    trim(&mut out);
    out
}

pub(crate) fn eval_int(g: &[BigInt], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub(crate) fn eval_rat(g: &[BigInt], x: &Rat) -> Rat {
    g.iter().rev().fold(Rat::zero(), |acc, c| acc * x + rat_from_int(c))
}

/// Content-free copy with positive leading coefficient.
pub(crate) fn primitive(g: &[BigInt]) -> Vec<BigInt> {
    let c = g.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if c.is_zero() {
        return Vec::new();
    }
    let sign = if g.last().is_some_and(|l| l.is_negative()) { -BigInt::one() } else { BigInt::one() };
    g.iter().map(|x| x / &c * &sign).collect()
}

/// Exact determinant by fraction-free elimination.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of two nonzero integer polynomials via the Sylvester matrix.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    bareiss(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, ratio};

    fn p(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("(X^2 - X)/2").eval(&rat(5)), rat(10));
        assert_eq!(p("X").eval(&rat(0)), rat(0));
        assert_eq!(p("(X^2-X)/4").eval(&rat(3)), ratio(3, 2));
    }

    #[test]
    fn normalization_and_display() {
        let f = p("(2X^2 - 2X)/4");
        assert_eq!(f.denominator(), &int(2));
        assert_eq!(f.to_string(), "(X^2 - X)/2");
        assert_eq!(p("poly(X/2)").to_string(), "X/2");
        assert_eq!(p("-3 + X^3").to_string(), "X^3 - 3");
        assert_eq!(p("0*X").to_string(), "0");
        assert_eq!(p("2(X+1)").to_string(), "2*X + 2");
        for s in ["(X^2 - X)/2", "X^3 - 3", "-X/3", "2*X + 2", "(-5*X^4 + 7)/9"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        match "X + / 2".parse::<RatPoly>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!("X / X".parse::<RatPoly>().is_err());
        assert!("(X + 1".parse::<RatPoly>().is_err());
        assert!("X / 0".parse::<RatPoly>().is_err());
    }

    #[test]
    fn resultants() {
        // disc-type resultants: Res(q, q') for q = X^2 + 1 is 4, for X^2 - 17 is -68
        let q = [int(1), int(0), int(1)];
        assert_eq!(resultant(&q, &derivative(&q)), int(4));
        let q = [int(-17), int(0), int(1)];
        assert_eq!(resultant(&q, &derivative(&q)), int(-68));
        let q = [int(1), int(-2), int(1)];
        assert_eq!(resultant(&q, &derivative(&q)), int(0));
    }

    #[test]
    fn ring_operations() {
        let f = p("(X^2 - X)/2");
        let g = p("X/3 + 1");
        for x in -5..5 {
            let x = rat(x);
            assert_eq!((&f + &g).eval(&x), f.eval(&x) + g.eval(&x));
            assert_eq!((&f * &g).eval(&x), f.eval(&x) * g.eval(&x));
            assert_eq!((&f - &g).eval(&x), f.eval(&x) - g.eval(&x));
        }
        assert_eq!(RatPoly::from_roots(&[int(1), int(2)]).to_string(), "X^2 - 3*X + 2");
    }
}
