use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{MultiIndex, Rational};
use crate::error::{Error, Result};

/// Sparse polynomial in `x1, …, xn` over the rationals.
///
/// No zero coefficient is ever stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zero(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    /// The coordinate `x_{i+1}` (0-based `i`).
    pub fn var(dim: usize, i: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, i), Rational::one())
    }

    pub fn monomial(dim: usize, exps: MultiIndex, c: Rational) -> Self {
        assert_eq!(exps.dim(), dim);
        let mut p = Self::zero(dim);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_zero)
    }

    pub fn add_term(&mut self, m: MultiIndex, c: Rational) {
        debug_assert_eq!(m.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, other: &Poly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            for (m, a) in &other.terms {
                self.add_term(m.clone(), a.clone());
            }
        } else {
            for (m, a) in &other.terms {
                self.add_term(m.clone(), a * c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Normalized derivative `X^a p = (1/a!) ∂^a p`.
    pub fn xderiv(&self, a: &MultiIndex) -> Result<Poly> {
        if a.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.dim(),
            });
        }
        Ok(self.xderiv_unchecked(a))
    }

    pub(crate) fn xderiv_unchecked(&self, a: &MultiIndex) -> Poly {
        if a.is_zero() {
            return self.clone();
        }
        let mut out = Poly::zero(self.dim);
        for (m, c) in &self.terms {
            if let Some(rest) = m.checked_sub(a) {
                let b = m.binomial(a);
                out.add_term(rest, c * Rational::from_integer(b));
            }
        }
        out
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.dim);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Parse the textual form, e.g. `"3/4*x1^2*x2 - x3 + 1/2"`.
    pub fn parse(s: &str, dim: usize) -> Result<Poly> {
        parse_poly(s, dim)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Terms in descending lexicographic order of exponents; `0` for zero.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || m.is_zero() {
                factors.push(a.to_string());
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = Poly::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Parse a rational literal `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

fn parse_poly(s: &str, dim: usize) -> Result<Poly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = Poly::zero(dim);
    let mut start = 0;
    let bytes = compact.as_bytes();
    let mut pieces = Vec::new();
    for (i, &b) in bytes.iter().enumerate() {
        if (b == b'+' || b == b'-') && i > 0 && bytes[i - 1] != b'^' {
            pieces.push(&compact[start..i]);
            start = i;
        }
    }
    pieces.push(&compact[start..]);
    for piece in pieces {
        let (sign, body) = match piece.as_bytes().first() {
            Some(b'-') => (-Rational::one(), &piece[1..]),
            Some(b'+') => (Rational::one(), &piece[1..]),
            _ => (Rational::one(), piece),
        };
        if body.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        let mut coeff = sign;
        let mut exps = vec![0u16; dim];
        for factor in body.split('*') {
            if let Some(var) = factor.strip_prefix('x') {
                let (idx, pow) = match var.split_once('^') {
                    Some((i, p)) => (i, Some(p)),
                    None => (var, None),
                };
                let idx: usize = idx
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                if idx == 0 || idx > dim {
                    return Err(Error::Parse(format!("variable x{idx} outside x1..x{dim}")));
                }
                let pow: u16 = match pow {
                    Some(p) => p
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                    None => 1,
                };
                exps[idx - 1] += pow;
            } else {
                coeff *= parse_rational(factor)?;
            }
        }
        out.add_term(MultiIndex::from(exps), coeff);
    }
    Ok(out)
}
