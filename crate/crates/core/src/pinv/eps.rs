use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactmath::Rational;

/// Univariate polynomial in the symbol `e = ε²` with integer coefficients,
/// little-endian, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct EpsPoly(Vec<BigInt>);

impl EpsPoly {
    pub fn zero() -> Self {
        EpsPoly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = EpsPoly(vec![c]);
        p.trim();
        p
    }

    /// `c·e`.
    pub fn e_times(c: BigInt) -> Self {
        let mut p = EpsPoly(vec![BigInt::zero(), c]);
        p.trim();
        p
    }

    /// The symbol `e = ε²`.
    pub fn e() -> Self {
        Self::e_times(BigInt::one())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.0.last()
    }

    /// Value at `e = 0`.
    pub fn at_zero(&self) -> BigInt {
        self.0.first().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn eval(&self, e: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| {
            acc * e + Rational::from_integer(c.clone())
        })
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    /// `c·self`.
    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return EpsPoly::zero();
        }
        EpsPoly(self.0.iter().map(|a| a * c).collect())
    }

    /// Quotient of a division known to be exact over the integers.
    ///
    /// Panics if `d` does not divide `self` in `ℤ[e]`.
    pub fn exact_div(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let Some(sd) = self.degree() else {
            return EpsPoly::zero();
        };
        let dd = d.degree().unwrap();
        assert!(sd >= dd, "inexact polynomial division");
        let lead = d.lead().unwrap();
        let mut rem = self.0.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for shift in (0..=sd - dd).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(lead);
            assert!(r.is_zero(), "inexact polynomial division");
            for (i, dc) in d.0.iter().enumerate() {
                rem[shift + i] -= dc * &c;
            }
            quot[shift] = c;
        }
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        let mut q = EpsPoly(quot);
        q.trim();
        q
    }

    /// Lowest power of `e` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }
}

/// `lim_{e→0} num/den`, or `None` when the quotient has a pole at 0.
pub fn ratio_limit(num: &EpsPoly, den: &EpsPoly) -> Option<Rational> {
    let v = den.valuation().expect("zero denominator");
    match num.valuation() {
        None => Some(Rational::zero()),
        Some(u) if u < v => None,
        Some(_) => Some(Rational::new(
            num.0.get(v).cloned().unwrap_or_else(BigInt::zero),
            den.0[v].clone(),
        )),
    }
}

impl Add for &EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.0.get(i), rhs.0.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        let mut p = EpsPoly(v);
        p.trim();
        p
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly(self.0.iter().map(|a| -a).collect())
    }
}

impl Sub for &EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        self + &(-rhs)
    }
}

impl Mul for &EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        if self.is_zero() || rhs.is_zero() {
            return EpsPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let mut p = EpsPoly(v);
        p.trim();
        p
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("({c})*e"),
                _ => format!("({c})*e^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
