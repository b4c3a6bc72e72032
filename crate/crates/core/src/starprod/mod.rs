//! Star products `f ∗ g = fg + Σ tᵏ Πₖ(f,g)` assembled as `Π₀ + ⟨e^π⟩`,
//! their associativity and obstruction residuals, gauge maps and the
//! order-by-order solver for the biderivations `π_k`.

mod gauge;
mod json;
mod solve;

use crate::brackets::exp_angle;
use crate::cochain::{Bivector, Cochain, CochainSeries};
use crate::error::{Error, Result};
use crate::exactmath::{MultiIndex, Poly, Rational};
use crate::gerstenhaber::{insert, self_bracket_series};
use crate::hochschild::delta;
use crate::pinv::project_complement;
use crate::sample::{random_poly, SampleRng};
use crate::{par, Limits};

pub use gauge::{cocycle_decompose, gauge_transform, upsilon_from_deformation, GaugeMap};
pub use json::{BiderivationJson, StarJson};
pub use solve::{solve_pi_order, solve_star};

/// Truncated deformation `Π₁, …, Π_K` of the pointwise product. `Π₀` is
/// implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarProduct {
    deformation: CochainSeries,
}

impl StarProduct {
    /// Wrap a series of nc 2-cochains.
    pub fn new(deformation: CochainSeries) -> Result<Self> {
        if deformation.arity() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: deformation.arity(),
            });
        }
        for (_, c) in deformation.iter() {
            c.check_nc()?;
        }
        Ok(StarProduct { deformation })
    }

    /// The undeformed product, truncated at `order`.
    pub fn trivial(dim: usize, order: usize) -> Self {
        StarProduct {
            deformation: CochainSeries::zero(2, dim, order),
        }
    }

    pub fn dim(&self) -> usize {
        self.deformation.dim()
    }

    pub fn order(&self) -> usize {
        self.deformation.order()
    }

    pub fn deformation(&self) -> &CochainSeries {
        &self.deformation
    }

    /// `Π_k`, with `Π₀` the multiplication.
    pub fn coeff(&self, k: usize) -> Cochain {
        if k == 0 {
            Cochain::multiplication(self.dim())
        } else {
            self.deformation.coeff(k)
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        StarProduct {
            deformation: self.deformation.truncate(order),
        }
    }
}

/// Skew biderivations `π₁, π₂, …` with `π₁ = ½α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiderivationSeries {
    dim: usize,
    terms: Vec<Bivector>,
}

impl BiderivationSeries {
    /// The series `(t/2)α`.
    pub fn from_alpha(alpha: &Bivector) -> Self {
        BiderivationSeries {
            dim: alpha.dim(),
            terms: vec![alpha.scale(&Rational::new(1.into(), 2.into()))],
        }
    }

    /// `[π₁, π₂, …]` as given.
    pub fn from_terms(dim: usize, terms: Vec<Bivector>) -> Result<Self> {
        if let Some(bad) = terms.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(BiderivationSeries { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// `π_k`, zero beyond the stored order.
    pub fn get(&self, k: usize) -> Bivector {
        assert!(k >= 1, "biderivation series starts at t^1");
        self.terms
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| Bivector::zero(self.dim))
    }

    pub fn terms(&self) -> &[Bivector] {
        &self.terms
    }

    /// `α = 2π₁`.
    pub fn alpha(&self) -> Bivector {
        self.get(1).scale(&Rational::from_integer(2.into()))
    }

    /// First `order` terms.
    pub fn truncate(&self, order: usize) -> Self {
        BiderivationSeries {
            dim: self.dim,
            terms: (1..=order).map(|k| self.get(k)).collect(),
        }
    }

    pub fn push(&mut self, pi: Bivector) {
        assert_eq!(pi.dim(), self.dim);
        self.terms.push(pi);
    }

    /// The 2-cochains `Σ π_k^{ij} ∂ᵢ⊗∂ⱼ`, padded with zeros up to `order`.
    pub fn to_cochain_series(&self, order: usize) -> CochainSeries {
        let coeffs = (1..=order).map(|k| self.get(k).to_cochain()).collect();
        CochainSeries::from_coeffs(2, self.dim, coeffs)
    }
}

/// Nonzero components `J^{ijk}`, `i < j < k` (0-based), of the Jacobiator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jacobiator {
    pub components: Vec<((usize, usize, usize), Poly)>,
}

impl Jacobiator {
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// The first failing component as an error.
    pub fn into_result(self) -> Result<()> {
        match self.components.into_iter().next() {
            None => Ok(()),
            Some(((i, j, k), value)) => Err(Error::NotPoisson {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                value: value.to_string(),
            }),
        }
    }
}

/// `J^{ijk} = Σ_l (α^{il}∂_lα^{jk} + α^{jl}∂_lα^{ki} + α^{kl}∂_lα^{ij})`.
pub fn jacobi_check(alpha: &Bivector) -> Jacobiator {
    let n = alpha.dim();
    let d = |p: &Poly, l: usize| p.xderiv(&MultiIndex::unit(n, l)).expect("same dimension");
    let mut components = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut acc = Poly::zero(n);
                for l in 0..n {
                    acc = &acc + &(alpha.entry(i, l) * &d(alpha.entry(j, k), l));
                    acc = &acc + &(alpha.entry(j, l) * &d(alpha.entry(k, i), l));
                    acc = &acc + &(alpha.entry(k, l) * &d(alpha.entry(i, j), l));
                }
                if !acc.is_zero() {
                    components.push(((i, j, k), acc));
                }
            }
        }
    }
    Jacobiator { components }
}

/// `Π₀ + ⟨e^π⟩` truncated at `t^order`.
pub fn build_star(pi: &BiderivationSeries, order: usize, limits: &Limits) -> Result<StarProduct> {
    let deformation = exp_angle(&pi.to_cochain_series(order), order, limits)?;
    StarProduct::new(deformation)
}

/// Coefficients `[f g, Π₁(f,g), …, Π_K(f,g)]` of `f ∗ g`.
pub fn star_mul(f: &Poly, g: &Poly, star: &StarProduct) -> Result<Vec<Poly>> {
    series_mul(
        star,
        std::slice::from_ref(f),
        std::slice::from_ref(g),
        star.order(),
    )
}

/// Star product of two `t`-series of polynomials, truncated at `order`.
fn series_mul(star: &StarProduct, a: &[Poly], b: &[Poly], order: usize) -> Result<Vec<Poly>> {
    let dim = star.dim();
    let mut out = vec![Poly::zero(dim); order + 1];
    for (p, fa) in a.iter().enumerate() {
        for (q, gb) in b.iter().enumerate() {
            let Some(room) = order.checked_sub(p + q) else {
                continue;
            };
            for k in 0..=room {
                let v = star.coeff(k).apply(&[fa.clone(), gb.clone()])?;
                out[p + q + k] = &out[p + q + k] + &v;
            }
        }
    }
    Ok(out)
}

/// Per-order associativity defects of a truncated star product.
#[derive(Clone, Debug)]
pub struct AssocReport {
    /// `δΠ_k − ½[Π,Π]_k` for `k = 1..=K` (index `k − 1`).
    pub operator: Vec<Cochain>,
    /// `((f∗g)∗h − f∗(g∗h))` at `t^k`, indexed `[k − 1][triple]`.
    pub evaluated: Vec<Vec<Poly>>,
}

impl AssocReport {
    pub fn is_zero(&self) -> bool {
        self.operator.iter().all(Cochain::is_zero)
            && self.evaluated.iter().flatten().all(Poly::is_zero)
    }

    /// Lowest order with a nonzero operator or evaluated defect.
    pub fn first_failure(&self) -> Option<usize> {
        (0..self.operator.len())
            .find(|&i| {
                !self.operator[i].is_zero() || self.evaluated[i].iter().any(|p| !p.is_zero())
            })
            .map(|i| i + 1)
    }
}

/// `δΠ_k − ½[Π,Π]_k` for `k = 1..=order`.
pub fn operator_residual(star: &StarProduct, order: usize) -> Result<Vec<Cochain>> {
    let deformation = star.deformation().truncate(order);
    let sq = self_bracket_series(&deformation, order)?;
    let half = Rational::new(1.into(), 2.into());
    let ks: Vec<usize> = (1..=order).collect();
    Ok(par::map(&ks, |&k| {
        let mut r = delta(&deformation.coeff(k));
        r.add_scaled(&sq.coeff(k), &-half.clone());
        r
    }))
}

/// `(f∗g)∗h − f∗(g∗h)` at `t¹ … t^order` for each triple.
pub fn evaluated_residual(
    star: &StarProduct,
    triples: &[[Poly; 3]],
    order: usize,
) -> Result<Vec<Vec<Poly>>> {
    let per_triple = par::try_map(triples, |[f, g, h]| -> Result<Vec<Poly>> {
        let fg = series_mul(
            star,
            std::slice::from_ref(f),
            std::slice::from_ref(g),
            order,
        )?;
        let gh = series_mul(
            star,
            std::slice::from_ref(g),
            std::slice::from_ref(h),
            order,
        )?;
        let left = series_mul(star, &fg, std::slice::from_ref(h), order)?;
        let right = series_mul(star, std::slice::from_ref(f), &gh, order)?;
        Ok(left
            .iter()
            .zip(&right)
            .skip(1)
            .map(|(l, r)| l - r)
            .collect())
    })?;
    Ok((0..order)
        .map(|i| per_triple.iter().map(|v| v[i].clone()).collect())
        .collect())
}

pub fn assoc_residual(
    star: &StarProduct,
    order: usize,
    triples: &[[Poly; 3]],
) -> Result<AssocReport> {
    Ok(AssocReport {
        operator: operator_residual(star, order)?,
        evaluated: evaluated_residual(star, triples, order)?,
    })
}

/// `count` triples of polynomials of degree `≤ 3`.
pub fn random_triples(rng: &mut SampleRng, dim: usize, count: usize) -> Vec<[Poly; 3]> {
    (0..count)
        .map(|_| std::array::from_fn(|_| random_poly(rng, dim, 3, 4)))
        .collect()
}

/// `(I − P)[⟨e^π⟩, ⟨e^π⟩]_k` for `k = 1..=order + 1`.
pub fn obstruction_residual(
    pi: &BiderivationSeries,
    order: usize,
    limits: &Limits,
) -> Result<CochainSeries> {
    let star = build_star(pi, order, limits)?;
    let sq = self_bracket_series(star.deformation(), order + 1)?;
    let ks: Vec<usize> = (1..=order + 1).collect();
    let coeffs = par::try_map(&ks, |&k| project_complement(&sq.coeff(k), limits))?;
    Ok(CochainSeries::from_coeffs(3, pi.dim(), coeffs))
}

/// `Φ ∘ (λ ⊗ 1)`, `Φ ∘ (1 ⊗ λ)` and both, for a 2-cochain `Φ`.
fn precompose(phi: &Cochain, lambda: &Cochain) -> (Cochain, Cochain, Cochain) {
    let left = insert(phi, 0, lambda);
    let right = insert(phi, 1, lambda);
    let both = insert(&left, 1, lambda);
    (left, right, both)
}
