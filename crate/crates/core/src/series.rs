//! Exact generating-function arithmetic: expansion, Padé fitting, verification.
//!
//! Polynomials are coefficient vectors in ascending powers of t. Every
//! [`RationalFn`] is kept canonical: integer coefficients with joint content 1,
//! no common polynomial factor, positive constant term in the denominator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A coefficient sequence c₀, c₁, … with a free-form label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Series {
    pub label: String,
    pub coeffs: Vec<BigInt>,
}

impl Series {
    pub fn new(label: impl Into<String>, coeffs: Vec<BigInt>) -> Self {
        Series { label: label.into(), coeffs }
    }

    pub fn from_u64(label: impl Into<String>, values: &[u64]) -> Self {
        Series::new(label, values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncated(&self, len: usize) -> Series {
        Series::new(self.label.clone(), self.coeffs.iter().take(len).cloned().collect())
    }

    /// One integer per line; blank lines and `#` comments are skipped.
    pub fn parse(label: impl Into<String>, text: &str) -> Result<Series> {
        let mut coeffs = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let c = line
                .parse::<BigInt>()
                .map_err(|_| Error::Series(format!("line {}: not an integer: {line:?}", k + 1)))?;
            coeffs.push(c);
        }
        Ok(Series::new(label, coeffs))
    }

    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(|c| format!("{c}\n")).collect()
    }
}

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
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

fn poly_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (k, x) in a.iter().enumerate() {
        out[k] += x;
    }
    for (k, y) in b.iter().enumerate() {
        out[k] += y;
    }
    trim(&mut out);
    out
}

fn poly_neg(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|c| -c).collect()
}

type QPoly = Vec<BigRational>;

fn to_q(p: &[BigInt]) -> QPoly {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim_q(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn q_rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    trim_q(&mut r);
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let f = r.last().unwrap() / &lead;
        let shift = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &f * c;
        }
        r.pop();
        trim_q(&mut r);
    }
    r
}

/// a / b in Q[t], assuming b divides a.
fn q_div_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    trim_q(&mut r);
    if r.len() < b.len() {
        return Vec::new();
    }
    let lead = b.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() / &lead;
        let shift = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= &f * c;
        }
        quot[shift] = f;
        r.pop();
        trim_q(&mut r);
    }
    quot
}

fn q_gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim_q(&mut x);
    trim_q(&mut y);
    while !y.is_empty() {
        let r = q_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// A ratio of integer polynomials in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Vec<BigInt>,
    den: Vec<BigInt>,
}

impl RationalFn {
    /// Canonicalizes num/den. The denominator must not vanish at 0.
    pub fn new(num: Vec<BigInt>, den: Vec<BigInt>) -> Result<Self> {
        if den.first().map_or(true, Zero::is_zero) {
            return Err(Error::Series("denominator vanishes at t = 0".into()));
        }
        let (qn, qd) = (to_q(&num), to_q(&den));
        let g = q_gcd(&qn, &qd);
        let (qn, qd) = (q_div_exact(&qn, &g), q_div_exact(&qd, &g));
        let scale = qn
            .iter()
            .chain(&qd)
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let to_z = |p: &QPoly| -> Vec<BigInt> {
            p.iter().map(|c| (c * BigRational::from_integer(scale.clone())).to_integer()).collect()
        };
        let (mut num, mut den) = (to_z(&qn), to_z(&qd));
        trim(&mut num);
        trim(&mut den);
        let content = num.iter().chain(&den).fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if den[0].is_negative() { -BigInt::one() } else { BigInt::one() };
        let unit = content * sign;
        for c in num.iter_mut().chain(den.iter_mut()) {
            *c = &*c / &unit;
        }
        Ok(RationalFn { num, den })
    }

    pub fn from_i64(num: &[i64], den: &[i64]) -> Result<Self> {
        let z = |p: &[i64]| p.iter().map(|&c| BigInt::from(c)).collect();
        Self::new(z(num), z(den))
    }

    pub fn num(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &[BigInt] {
        &self.den
    }

    /// Degrees (numerator, denominator); the zero polynomial counts as degree 0.
    pub fn degrees(&self) -> (usize, usize) {
        (self.num.len().saturating_sub(1), self.den.len().saturating_sub(1))
    }

    /// Parses expressions in `t` with integers, `+ - * / ^`, parentheses and juxtaposition.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { chars: text.chars().filter(|c| !c.is_whitespace()).collect(), at: 0 };
        let (num, den) = p.expr()?;
        if p.at != p.chars.len() {
            return Err(Error::Series(format!("unexpected {:?} in {text:?}", p.chars[p.at])));
        }
        Self::new(num, den)
    }

    /// First `len` Taylor coefficients at 0.
    pub fn expand(&self, len: usize) -> Result<Series> {
        let d0 = &self.den[0];
        let mut c: Vec<BigInt> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.num.get(k).cloned().unwrap_or_default();
            for i in 1..self.den.len().min(k + 1) {
                acc -= &self.den[i] * &c[k - i];
            }
            let (q, r) = acc.div_rem(d0);
            if !r.is_zero() {
                return Err(Error::Series(format!("coefficient {k} of {self} is not an integer")));
            }
            c.push(q);
        }
        Ok(Series::new(self.to_string(), c))
    }
}

fn fmt_poly(p: &[BigInt], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if c.is_negative() { " - " } else { " + " })?;
        }
        first = false;
        match (k, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (_, true) => {}
            (_, false) => write!(f, "{mag}*")?,
        }
        match k {
            0 => {}
            1 => f.write_str("t")?,
            _ => write!(f, "t^{k}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// `(num)/(den)` in ascending powers; the output parses back to the same function.
impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        fmt_poly(&self.num, f)?;
        f.write_str(")/(")?;
        fmt_poly(&self.den, f)?;
        f.write_str(")")
    }
}

type Frac = (Vec<BigInt>, Vec<BigInt>);

struct Parser {
    chars: Vec<char>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.at += 1;
                let (n, d) = self.term()?;
                (poly_neg(&n), d)
            }
            Some('+') => {
                self.at += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.at += 1;
            let (n, d) = self.term()?;
            let n = if op == '-' { poly_neg(&n) } else { n };
            acc = (poly_add(&poly_mul(&acc.0, &d), &poly_mul(&n, &acc.1)), poly_mul(&acc.1, &d));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.at += 1;
                    let (n, d) = self.power()?;
                    acc = (poly_mul(&acc.0, &n), poly_mul(&acc.1, &d));
                }
                Some('/') => {
                    self.at += 1;
                    let (n, d) = self.power()?;
                    if n.is_empty() {
                        return Err(Error::Series("division by zero".into()));
                    }
                    acc = (poly_mul(&acc.0, &d), poly_mul(&acc.1, &n));
                }
                Some(c) if c == '(' || c == 't' || c.is_ascii_digit() => {
                    let (n, d) = self.power()?;
                    acc = (poly_mul(&acc.0, &n), poly_mul(&acc.1, &d));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.at += 1;
        let e = self.integer()?.to_u32().ok_or_else(|| Error::Series("exponent too large".into()))?;
        let mut out = (vec![BigInt::one()], vec![BigInt::one()]);
        for _ in 0..e {
            out = (poly_mul(&out.0, &base.0), poly_mul(&out.1, &base.1));
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Frac> {
        match self.peek() {
            Some('(') => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(Error::Series("missing ')'".into()));
                }
                self.at += 1;
                Ok(inner)
            }
            Some('t') => {
                self.at += 1;
                Ok((vec![BigInt::zero(), BigInt::one()], vec![BigInt::one()]))
            }
            Some(c) if c.is_ascii_digit() => {
                let mut v = vec![self.integer()?];
                trim(&mut v);
                Ok((v, vec![BigInt::one()]))
            }
            other => Err(Error::Series(format!("unexpected {other:?}"))),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        let digits: String = self.chars[start..self.at].iter().collect();
        digits.parse().map_err(|_| Error::Series("expected an integer".into()))
    }
}

/// Solves A·x = b exactly; free variables are set to 0. `None` if inconsistent.
fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>, unknowns: usize) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][col].recip();
        for c in col..unknowns {
            a[r][c] = &a[r][c] * &inv;
        }
        b[r] = &b[r] * &inv;
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for c in col..unknowns {
                    let d = &f * &a[r][c];
                    a[i][c] -= d;
                }
                let d = &f * &b[r];
                b[i] -= d;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows {
            break;
        }
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = b[i].clone();
    }
    Some(x)
}

/// Padé approximant of type (d_num, d_den) to `coeffs`, returned only if its
/// expansion reproduces every supplied coefficient.
pub fn pade_fit(coeffs: &[BigInt], d_num: usize, d_den: usize) -> Result<Option<RationalFn>> {
    let needed = d_num + d_den + 2;
    if coeffs.len() < needed {
        return Err(Error::Series(format!(
            "degrees ({d_num},{d_den}) need at least {needed} coefficients, got {}",
            coeffs.len()
        )));
    }
    let c = |k: isize| -> BigRational {
        if k < 0 {
            BigRational::zero()
        } else {
            BigRational::from_integer(coeffs[k as usize].clone())
        }
    };
    // Denominator q = 1 + q₁t + …: the coefficients of t^{d_num+1..d_num+d_den} in q·c vanish.
    let rows: Vec<usize> = (d_num + 1..=d_num + d_den).collect();
    let a = rows
        .iter()
        .map(|&k| (1..=d_den).map(|i| c(k as isize - i as isize)).collect())
        .collect();
    let b = rows.iter().map(|&k| -c(k as isize)).collect();
    let Some(q) = solve(a, b, d_den) else { return Ok(None) };
    let mut den: QPoly = vec![BigRational::one()];
    den.extend(q);
    let num: QPoly = (0..=d_num)
        .map(|k| (0..=d_den.min(k)).map(|i| &den[i] * c((k - i) as isize)).sum())
        .collect();
    let scale = num.iter().chain(&den).fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let to_z = |p: &QPoly| -> Vec<BigInt> {
        p.iter().map(|v| (v * BigRational::from_integer(scale.clone())).to_integer()).collect()
    };
    let r = RationalFn::new(to_z(&num), to_z(&den))?;
    match r.expand(coeffs.len()) {
        Ok(s) if s.coeffs == coeffs => Ok(Some(r)),
        _ => Ok(None),
    }
}

/// Lowest-degree rational function matching `coeffs`, by ascending d_num + d_den and then
/// ascending d_den. Each candidate is fitted on the first d_num + d_den + 1 terms and must
/// leave at least `surplus` further terms, all of which it must reproduce.
pub fn guess(coeffs: &[BigInt], max_total: usize, surplus: usize) -> Result<Option<RationalFn>> {
    for total in 0..=max_total {
        if total + 2 + surplus > coeffs.len() + 1 {
            break;
        }
        for d_den in 0..=total {
            if let Some(r) = pade_fit(coeffs, total - d_den, d_den)? {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    /// All `terms` coefficients agree.
    Match { terms: usize },
    /// First disagreement, at index `index`.
    Mismatch { index: usize, expected: BigInt, actual: BigInt },
}

impl Verification {
    pub fn is_match(&self) -> bool {
        matches!(self, Verification::Match { .. })
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verification::Match { terms } => write!(f, "match through {} terms", terms),
            Verification::Mismatch { index, expected, actual } => {
                write!(f, "mismatch at index {index}: series has {actual}, function gives {expected}")
            }
        }
    }
}

/// Compares `series` with the expansion of `r`, term by term.
pub fn verify(series: &Series, r: &RationalFn) -> Result<Verification> {
    let expected = r.expand(series.len())?;
    for (index, (e, a)) in expected.coeffs.iter().zip(&series.coeffs).enumerate() {
        if e != a {
            return Ok(Verification::Mismatch { index, expected: e.clone(), actual: a.clone() });
        }
    }
    Ok(Verification::Match { terms: series.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn geometric_expansion() {
        let r = RationalFn::from_i64(&[1], &[1, -2]).unwrap();
        assert_eq!(r.expand(5).unwrap().coeffs, ints(&[1, 2, 4, 8, 16]));
    }

    #[test]
    fn canonical_form() {
        let r = RationalFn::parse("(t+1)(2t^2-1)/((t-1)(2t-1)^2)").unwrap();
        assert_eq!(r.num(), ints(&[1, 1, -2, -2]));
        assert_eq!(r.den(), ints(&[1, -5, 8, -4]));
        let s = RationalFn::parse("2(t+1)(t-3)/(4(t-3)(1-t))").unwrap();
        assert_eq!(s, RationalFn::from_i64(&[1, 1], &[2, -2]).unwrap());
        assert_eq!(RationalFn::parse(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn parser_rejects_garbage() {
        for bad in ["(t+1", "t/0", "x", "1/t", "t^"] {
            assert!(RationalFn::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn non_integral_expansion_fails() {
        let r = RationalFn::from_i64(&[1], &[2, -1]).unwrap();
        assert!(r.expand(3).is_err());
    }

    #[test]
    fn constant_series() {
        let ones = ints(&[1; 6]);
        let r = pade_fit(&ones, 0, 1).unwrap().unwrap();
        assert_eq!(r, RationalFn::parse("1/(1-t)").unwrap());
        assert_eq!(guess(&ones, 4, 3).unwrap(), Some(r));
        assert!(pade_fit(&ones[..1], 0, 1).is_err());
    }

    #[test]
    fn singular_systems_still_fit() {
        let poly = ints(&[1, 2, 3, 0, 0, 0, 0, 0]);
        let r = pade_fit(&poly, 3, 2).unwrap().unwrap();
        assert_eq!(r, RationalFn::from_i64(&[1, 2, 3], &[1]).unwrap());
    }

    #[test]
    fn verify_reports_first_mismatch() {
        let r = RationalFn::from_i64(&[1], &[1, -2]).unwrap();
        let s = Series::new("x", ints(&[1, 2, 4, 9, 16]));
        assert_eq!(
            verify(&s, &r).unwrap(),
            Verification::Mismatch { index: 3, expected: 8.into(), actual: 9.into() }
        );
        assert!(verify(&s.truncated(3), &r).unwrap().is_match());
    }

    #[test]
    fn text_round_trip() {
        let s = Series::new("x", ints(&[1, -6, 20]));
        assert_eq!(Series::parse("x", &format!("# head\n{}\n", s.to_text())).unwrap(), s);
        assert!(Series::parse("x", "1\nfoo\n").is_err());
    }
}
