use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use smallvec::SmallVec;

/// Exponent vector `a = (a¹, …, aⁿ)` labelling the normalized derivative
/// `X^a = (1/a!) ∂^a` and, reused, the monomial `x^a`.
///
/// Ordering is lexicographic on the exponent vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(SmallVec<[u16; 4]>);

impl MultiIndex {
    pub fn new(exponents: impl IntoIterator<Item = u16>) -> Self {
        MultiIndex(exponents.into_iter().collect())
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    /// The unit index `e_i` (0-based `i`).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut m = Self::zero(dim);
        m.0[i] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    /// `|a| = a¹ + … + aⁿ`.
    pub fn order(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Position of the single nonzero entry when `self` is a unit index.
    pub fn unit_position(&self) -> Option<usize> {
        if self.order() != 1 {
            return None;
        }
        self.0.iter().position(|&e| e == 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.dim(), other.dim());
        let mut out = SmallVec::with_capacity(self.dim());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `a¹! a²! ⋯ aⁿ!`
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &e| acc * factorial(e))
    }

    /// `∏ C(aⁱ, bⁱ)`; zero unless `b ≤ a`.
    pub fn binomial(&self, b: &Self) -> BigInt {
        let mut acc = BigInt::one();
        for (&a, &b) in self.0.iter().zip(&b.0) {
            if b > a {
                return BigInt::from(0);
            }
            acc *= binomial(a, b);
        }
        acc
    }

    /// [`binomial`](Self::binomial) in machine integers, for the small
    /// indices that occur in composition.
    pub fn binomial_u64(&self, b: &Self) -> u64 {
        let mut acc = 1u64;
        for (&a, &b) in self.0.iter().zip(&b.0) {
            if b > a {
                return 0;
            }
            let b = b.min(a - b) as u64;
            let mut c = 1u64;
            for i in 0..b {
                c = c * (a as u64 - i) / (i + 1);
            }
            acc = acc.checked_mul(c).expect("binomial product fits in u64");
        }
        acc
    }

    /// `∏(aⁱ + 1)`, the number of indices `s ≤ a`.
    pub fn box_size(&self) -> u64 {
        self.0.iter().map(|&e| e as u64 + 1).product()
    }

    /// All `s` with `0 ≤ s ≤ self`, in lexicographic order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(SmallVec::new())];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for prefix in &out {
                for s in 0..=e {
                    let mut m = prefix.clone();
                    m.0.push(s);
                    next.push(m);
                }
            }
            out = next;
        }
        out
    }

    /// All multi-indices of dimension `dim` with `|a| ≤ max_order`, lexicographic.
    pub fn all_up_to(dim: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; dim];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<MultiIndex>) {
            if pos == cur.len() {
                out.push(MultiIndex::new(cur.iter().copied()));
                return;
            }
            for e in 0..=left {
                cur[pos] = e as u16;
                rec(pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        rec(0, max_order, &mut cur, &mut out);
        out
    }

    /// All multi-indices of dimension `dim` with `|a| = order`.
    pub fn all_of_order(dim: usize, order: u32) -> Vec<MultiIndex> {
        Self::all_up_to(dim, order)
            .into_iter()
            .filter(|m| m.order() == order)
            .collect()
    }

    /// All ordered decompositions `self = s₀ + s₁ + … + s_{parts−1}`.
    pub fn compositions(&self, parts: usize) -> Vec<Vec<MultiIndex>> {
        assert!(parts >= 1);
        if parts == 1 {
            return vec![vec![self.clone()]];
        }
        let mut out = Vec::new();
        for s in self.sub_indices() {
            let rest = self.checked_sub(&s).expect("sub-index");
            for mut tail in rest.compositions(parts - 1) {
                tail.insert(0, s.clone());
                out.push(tail);
            }
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

impl From<Vec<u16>> for MultiIndex {
    fn from(v: Vec<u16>) -> Self {
        MultiIndex(v.into_iter().collect())
    }
}

impl<const N: usize> From<[u16; N]> for MultiIndex {
    fn from(v: [u16; N]) -> Self {
        MultiIndex(v.into_iter().collect())
    }
}

fn factorial(e: u16) -> BigInt {
    (1..=e as u64).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(a: u16, b: u16) -> BigInt {
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sub_indices_count_matches_box() {
        let a = MultiIndex::from([2, 1, 3]);
        assert_eq!(a.sub_indices().len() as u64, a.box_size());
        assert!(a.sub_indices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn binomials() {
        let a = MultiIndex::from([4, 2]);
        assert_eq!(a.binomial(&MultiIndex::from([2, 1])), BigInt::from(12));
        assert_eq!(a.binomial_u64(&MultiIndex::from([2, 1])), 12);
        assert_eq!(a.binomial_u64(&MultiIndex::from([5, 1])), 0);
        assert_eq!(a.binomial(&MultiIndex::from([5, 0])), BigInt::from(0));
        assert_eq!(a.factorial(), BigInt::from(48));
    }

    #[test]
    fn compositions_sum_back() {
        let a = MultiIndex::from([2, 1]);
        let comps = a.compositions(3);
        // C(2+2,2) * C(1+2,2) = 6 * 3
        assert_eq!(comps.len(), 18);
        for c in comps {
            let s = c.iter().fold(MultiIndex::zero(2), |acc, m| acc.add(m));
            assert_eq!(s, a);
        }
    }

    #[test]
    fn enumerate_orders() {
        assert_eq!(MultiIndex::all_of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_up_to(2, 2).len(), 6);
    }
}
