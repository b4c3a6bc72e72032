//! Multidifferential cochains in the normalized basis
//! `X^{a₁} ⊗ … ⊗ X^{a_p}`, with polynomial coefficients.

mod bivector;
mod json;
mod scaled;
mod series;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{MultiIndex, Poly, Rational};

pub use bivector::{bivector_to_cochain, Bivector};
pub use json::{BivectorJson, CochainTermJson};
pub(crate) use scaled::ScaledCochain;
pub use series::CochainSeries;

/// One basis tensor `X^{a₁} ⊗ … ⊗ X^{a_p}`, stored as its slot indices.
pub type Tensor = Vec<MultiIndex>;

/// Total weight `a₁ + … + a_p` of a basis tensor. Every operator in this
/// crate (δ, δᵀ, D, U, δ⁺) preserves it.
pub fn tensor_weight(t: &[MultiIndex], dim: usize) -> MultiIndex {
    t.iter().fold(MultiIndex::zero(dim), |acc, a| acc.add(a))
}

/// Grade `Σ |aᵢ|` of a basis tensor.
pub fn tensor_grade(t: &[MultiIndex]) -> u32 {
    t.iter().map(MultiIndex::order).sum()
}

pub fn tensor_to_string(t: &[MultiIndex]) -> String {
    t.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("⊗")
}

/// Sparse arity-`p` multidifferential operator
/// `Σ Φ_{a₁…a_p}(x) X^{a₁} ⊗ … ⊗ X^{a_p}`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    arity: usize,
    dim: usize,
    terms: BTreeMap<Tensor, Poly>,
}

impl Cochain {
    pub fn zero(arity: usize, dim: usize) -> Self {
        Cochain {
            arity,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// A single basis tensor with coefficient 1.
    pub fn basis(dim: usize, tensor: Tensor) -> Self {
        let mut c = Self::zero(tensor.len(), dim);
        c.add_term(tensor, &Poly::one(dim));
        c
    }

    /// Pointwise product `Π₀ = X⁰ ⊗ X⁰`.
    pub fn multiplication(dim: usize) -> Self {
        Self::basis(dim, vec![MultiIndex::zero(dim), MultiIndex::zero(dim)])
    }

    pub fn from_terms(
        arity: usize,
        dim: usize,
        terms: impl IntoIterator<Item = (Tensor, Poly)>,
    ) -> Self {
        let mut c = Self::zero(arity, dim);
        for (t, p) in terms {
            c.add_term(t, &p);
        }
        c
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    pub fn terms(&self) -> impl Iterator<Item = (&Tensor, &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &[MultiIndex]) -> Poly {
        self.terms
            .get(t)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.dim))
    }

    pub fn add_term(&mut self, t: Tensor, p: &Poly) {
        self.add_term_scaled(t, p, &Rational::one());
    }

    /// `self += c · p · t`
    pub fn add_term_scaled(&mut self, t: Tensor, p: &Poly, c: &Rational) {
        debug_assert_eq!(t.len(), self.arity);
        if p.is_zero() || c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p.scale(c));
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(p, c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · other`
    pub fn add_scaled(&mut self, other: &Cochain, c: &Rational) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        for (t, p) in &other.terms {
            self.add_term_scaled(t.clone(), p, c);
        }
    }

    /// `self += other`, moving the coefficients of `other`.
    pub fn absorb(&mut self, other: Cochain) {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        for (t, p) in other.terms {
            match self.terms.entry(t) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(p);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    o.get_mut().add_scaled(&p, &Rational::one());
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        let mut out = Cochain::zero(self.arity, self.dim);
        out.add_scaled(self, c);
        out
    }

    /// Multiply every coefficient by `p`.
    pub fn mul_poly(&self, p: &Poly) -> Cochain {
        let mut out = Cochain::zero(self.arity, self.dim);
        for (t, q) in &self.terms {
            out.add_term(t.clone(), &(q * p));
        }
        out
    }

    /// Vanishes on constants: no slot carries `X⁰`.
    pub fn is_nc(&self) -> bool {
        self.terms.keys().all(|t| t.iter().all(|a| !a.is_zero()))
    }

    pub fn check_nc(&self) -> Result<()> {
        for t in self.terms.keys() {
            if let Some(slot) = t.iter().position(MultiIndex::is_zero) {
                return Err(Error::NotNc {
                    slot,
                    tensor: tensor_to_string(t),
                });
            }
        }
        Ok(())
    }

    pub fn check_arity(&self, expected: usize) -> Result<()> {
        if self.arity != expected {
            return Err(Error::ArityMismatch {
                expected,
                found: self.arity,
            });
        }
        Ok(())
    }

    /// Largest grade among the stored tensors.
    pub fn max_grade(&self) -> u32 {
        self.terms
            .keys()
            .map(|t| tensor_grade(t))
            .max()
            .unwrap_or(0)
    }

    /// Evaluate on polynomial arguments: `Σ Φ_a ∏ᵢ X^{aᵢ} argᵢ`.
    pub fn apply(&self, args: &[Poly]) -> Result<Poly> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        if let Some(bad) = args.iter().find(|p| p.dim() != self.dim) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: bad.dim(),
            });
        }
        let mut out = Poly::zero(self.dim);
        for (t, coeff) in &self.terms {
            let mut prod = coeff.clone();
            for (a, f) in t.iter().zip(args) {
                let d = f.xderiv_unchecked(a);
                if d.is_zero() {
                    prod = Poly::zero(self.dim);
                    break;
                }
                prod = &prod * &d;
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// Partition by grade `Σ|aᵢ|`.
    pub fn grade_split(&self) -> BTreeMap<u32, Cochain> {
        let mut out: BTreeMap<u32, Cochain> = BTreeMap::new();
        for (t, p) in &self.terms {
            out.entry(tensor_grade(t))
                .or_insert_with(|| Cochain::zero(self.arity, self.dim))
                .add_term(t.clone(), p);
        }
        out
    }

    /// Partition by total weight vector `Σ aᵢ` (finer than grade).
    pub fn weight_split(&self) -> BTreeMap<MultiIndex, Vec<(&Tensor, &Poly)>> {
        let mut out: BTreeMap<MultiIndex, Vec<(&Tensor, &Poly)>> = BTreeMap::new();
        for (t, p) in &self.terms {
            out.entry(tensor_weight(t, self.dim))
                .or_default()
                .push((t, p));
        }
        out
    }

    /// Apply a coefficient-wise linear operator given by its action on basis
    /// tensors.
    pub fn map_basis<F>(&self, out_arity: usize, mut f: F) -> Cochain
    where
        F: FnMut(&Tensor) -> Vec<(Tensor, Rational)>,
    {
        let mut out = Cochain::zero(out_arity, self.dim);
        for (t, p) in &self.terms {
            for (image, c) in f(t) {
                out.add_term_scaled(image, p, &c);
            }
        }
        out
    }

    /// Human-readable form: `(coeff) D[..]⊗D[..] + …`.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(t, p)| format!("({p}) {}", tensor_to_string(t)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Cochain[p={}, n={}]({})",
            self.arity,
            self.dim,
            self.pretty()
        )
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl Add for &Cochain {
    type Output = Cochain;
    fn add(self, rhs: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &Cochain {
    type Output = Cochain;
    fn sub(self, rhs: &Cochain) -> Cochain {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &Cochain {
    type Output = Cochain;
    fn neg(self) -> Cochain {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn mi(v: &[u16]) -> MultiIndex {
        MultiIndex::from(v.to_vec())
    }

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn apply_examples() {
        let phi = Cochain::basis(1, vec![mi(&[1]), mi(&[1])]);
        assert_eq!(
            phi.apply(&[p("x1^2", 1), p("x1^3", 1)]).unwrap(),
            p("6*x1^3", 1)
        );

        let mut psi = Cochain::zero(2, 2);
        psi.add_term(vec![mi(&[1, 0]), mi(&[0, 1])], &p("x1", 2));
        assert_eq!(psi.apply(&[p("x1", 2), p("x2", 2)]).unwrap(), p("x1", 2));

        assert!(phi.apply(&[p("x1", 1)]).is_err());
        assert!(phi.apply(&[p("x1", 2), p("x1", 2)]).is_err());
    }

    #[test]
    fn nc_vanishes_on_constants() {
        let mut c = Cochain::zero(2, 2);
        c.add_term(vec![mi(&[1, 0]), mi(&[0, 2])], &p("x1*x2 + 3", 2));
        c.add_term(vec![mi(&[1, 1]), mi(&[1, 0])], &p("x2", 2));
        assert!(c.is_nc());
        let f = p("x1^3 + x2^2*x1", 2);
        assert!(c.apply(&[Poly::one(2), f.clone()]).unwrap().is_zero());
        assert!(c.apply(&[f, Poly::constant(2, rat(5))]).unwrap().is_zero());
        assert!(!Cochain::multiplication(2).is_nc());
        assert!(Cochain::multiplication(2).check_nc().is_err());
    }

    #[test]
    fn grade_split_examples() {
        let a = Cochain::basis(1, vec![mi(&[1]), mi(&[1])]);
        let split = a.grade_split();
        assert_eq!(split.len(), 1);
        assert_eq!(split[&2], a);

        let b = Cochain::basis(1, vec![mi(&[2]), mi(&[1])]);
        let sum = &a + &b;
        let split = sum.grade_split();
        assert_eq!(split[&3], b);
        assert_eq!(split[&2], a);

        assert!(Cochain::zero(2, 1).grade_split().is_empty());
    }

    #[test]
    fn terms_cancel() {
        let a = Cochain::basis(1, vec![mi(&[1]), mi(&[1])]);
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).len(), 0);
    }
}
