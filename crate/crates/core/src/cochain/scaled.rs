//! Cochains held as integer numerators over one shared denominator, so sums
//! run over integers and fractions are reduced once at the end.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Cochain, Tensor};
use crate::exactmath::{MultiIndex, Poly, Rational};

pub(crate) struct ScaledCochain {
    pub arity: usize,
    pub dim: usize,
    /// Common denominator of every coefficient.
    pub den: BigInt,
    /// Numerators by tensor and coefficient monomial; zeros may be stored.
    pub terms: HashMap<Tensor, HashMap<MultiIndex, BigInt>>,
}

impl ScaledCochain {
    pub fn new(arity: usize, dim: usize, den: BigInt) -> Self {
        ScaledCochain {
            arity,
            dim,
            den,
            terms: HashMap::new(),
        }
    }

    pub fn into_cochain(self) -> Cochain {
        let (dim, den) = (self.dim, self.den);
        let terms = self.terms.into_iter().map(|(t, mons)| {
            let coeffs = mons
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(m, v)| (m, Rational::new(v, den.clone())));
            (t, Poly::from_terms(dim, coeffs))
        });
        Cochain::from_terms(self.arity, dim, terms)
    }
}
