//! Exact scalars, sparse polynomials, normalized derivatives and dense
//! rational linear algebra.

mod matrix;
mod multi_index;
mod poly;

pub use matrix::{mp_pseudoinverse, solve_linear, LinearSolution, RationalMatrix};
pub use multi_index::MultiIndex;
pub use poly::{parse_rational, Poly};

/// Arbitrary-precision rational; always stored reduced with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// `X^a p = (1/a!) ∂^a p`.
pub fn xderiv(p: &Poly, a: &MultiIndex) -> crate::Result<Poly> {
    p.xderiv(a)
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
