use num_traits::One;

use super::{precompose, StarProduct};
use crate::cochain::{Bivector, Cochain, CochainSeries};
use crate::error::{Error, Result};
use crate::exactmath::{MultiIndex, Rational};
use crate::gerstenhaber::{insert, self_bracket_series};
use crate::hochschild::delta;
use crate::pinv::{delta_plus, delta_plus_any};
use crate::{par, Limits};

/// `S = I − tⁿλ`, with `S⁻¹ = Σ_{m≥0} t^{mn} λ^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeMap {
    order: usize,
    lambda: Cochain,
}

impl GaugeMap {
    /// `λ` must be an nc 1-cochain and the leading order at least 1.
    pub fn new(order: usize, lambda: Cochain) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid(
                "gauge map must start at order 1 or later".into(),
            ));
        }
        lambda.check_arity(1)?;
        lambda.check_nc()?;
        Ok(GaugeMap { order, lambda })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn lambda(&self) -> &Cochain {
        &self.lambda
    }
}

/// `Π′(f,g) = S⁻¹(Π(Sf, Sg))` through `t^order`.
pub fn gauge_transform(star: &StarProduct, gauge: &GaugeMap, order: usize) -> Result<StarProduct> {
    let dim = star.dim();
    if gauge.lambda.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: gauge.lambda.dim(),
        });
    }
    let n = gauge.order;
    let lambda = &gauge.lambda;

    // Π(Sf, Sg) = Σ t^k (Π_k − tⁿ(Π_k∘(λ⊗1) + Π_k∘(1⊗λ)) + t²ⁿ Π_k∘(λ⊗λ))
    let ks: Vec<usize> = (0..=order).collect();
    let pieces = par::map(&ks, |&k| {
        let pk = star.coeff(k);
        let (left, right, both) = if k + n <= order {
            precompose(&pk, lambda)
        } else {
            let z = Cochain::zero(2, dim);
            (z.clone(), z.clone(), z)
        };
        (pk, &left + &right, both)
    });
    let mut inner = vec![Cochain::zero(2, dim); order + 1];
    let minus = -Rational::one();
    for (k, (pk, single, both)) in pieces.into_iter().enumerate() {
        inner[k].add_scaled(&pk, &Rational::one());
        if k + n <= order {
            inner[k + n].add_scaled(&single, &minus);
        }
        if k + 2 * n <= order {
            inner[k + 2 * n].add_scaled(&both, &Rational::one());
        }
    }

    // S⁻¹ applied on the left.
    let mut out = inner.clone();
    let mut power = inner;
    let mut shift = n;
    while shift <= order {
        let room = order - shift;
        power.truncate(room + 1);
        power = par::map(&power, |c| insert(lambda, 0, c));
        for (j, c) in power.iter().enumerate() {
            out[j + shift].add_scaled(c, &Rational::one());
        }
        shift += n;
    }

    debug_assert_eq!(out[0], Cochain::multiplication(dim));
    StarProduct::new(CochainSeries::from_coeffs(2, dim, out.split_off(1)))
}

/// Split a 2-cocycle `Υ` into a skew biderivation `π` and a 1-cochain `λ`
/// with `Υ = π + δλ`.
///
/// `π` is the skew part of the `∂ᵢ ⊗ ∂ⱼ` component; `λ` is the blockwise
/// pseudoinverse image of the remainder, which is checked to be exact.
pub fn cocycle_decompose(upsilon: &Cochain, limits: &Limits) -> Result<(Bivector, Cochain)> {
    upsilon.check_arity(2)?;
    upsilon.check_nc()?;
    let dim = upsilon.dim();
    let cob = delta(upsilon);
    if !cob.is_zero() {
        return Err(Error::NotCocycle {
            coboundary: Box::new(cob),
        });
    }
    let half = Rational::new(1.into(), 2.into());
    let mut upper = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let (ei, ej) = (MultiIndex::unit(dim, i), MultiIndex::unit(dim, j));
            let cij = upsilon.coeff(&[ei.clone(), ej.clone()]);
            let cji = upsilon.coeff(&[ej, ei]);
            let skew = (&cij - &cji).scale(&half);
            if !skew.is_zero() {
                upper.push(((i, j), skew));
            }
        }
    }
    let pi = Bivector::from_upper(dim, upper)?;
    let rest = upsilon - &pi.to_cochain();
    let lambda = if rest.is_zero() {
        Cochain::zero(1, dim)
    } else {
        delta_plus_any(&rest, limits)?
    };
    let residual = &rest - &delta(&lambda);
    if !residual.is_zero() {
        return Err(Error::NotExact {
            residual: Box::new(residual),
        });
    }
    Ok((pi, lambda))
}

/// Inverse of `⟨e^·⟩`: `Υ = Π − ½δ⁺[Π,Π]`, order by order.
pub fn upsilon_from_deformation(
    deformation: &CochainSeries,
    limits: &Limits,
) -> Result<CochainSeries> {
    let order = deformation.order();
    let sq = self_bracket_series(deformation, order)?;
    let ks: Vec<usize> = (1..=order).collect();
    let half = -Rational::new(1.into(), 2.into());
    let coeffs = par::try_map(&ks, |&k| -> Result<Cochain> {
        let mut c = deformation.coeff(k);
        let s = sq.coeff(k);
        if !s.is_zero() {
            c.add_scaled(&delta_plus(&s, limits)?, &half);
        }
        Ok(c)
    })?;
    Ok(CochainSeries::from_coeffs(2, deformation.dim(), coeffs))
}
