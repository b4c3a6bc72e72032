use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{build_star, jacobi_check, BiderivationSeries, StarProduct};
use crate::brackets::exp_angle;
use crate::cochain::{Bivector, Cochain, Tensor};
use crate::error::{Error, Result};
use crate::exactmath::{solve_linear, LinearSolution, MultiIndex, Poly, Rational, RationalMatrix};
use crate::gerstenhaber::{gbracket, self_bracket_series};
use crate::pinv::project_complement;
use crate::{par, Limits};

type Component = (Tensor, MultiIndex);

fn components(c: &Cochain) -> BTreeMap<Component, Rational> {
    let mut out = BTreeMap::new();
    for (t, p) in c.terms() {
        for (m, r) in p.terms() {
            out.insert((t.clone(), m.clone()), r.clone());
        }
    }
    out
}

fn dot(a: &BTreeMap<Component, Rational>, b: &BTreeMap<Component, Rational>) -> Rational {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter_map(|(k, x)| large.get(k).map(|y| x * y))
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// Solve for `π_k` given `π₁, …, π_{k−1}`.
///
/// The order-`(k+1)` obstruction `(I − P)[Π,Π]_{k+1}` is affine in `π_k`:
/// it equals `(I − P)(R + 2[Π₁, π_k])` with `R` computed from `π_k = 0`.
/// Every entry `π_k^{ij}`, `i < j`, is expanded over monomials of degree
/// `≤ degree_bound`, and the minimum-norm solution of the resulting exact
/// linear system is returned. A system without solution is reported as
/// [`Error::Infeasible`] carrying the least-squares residual.
pub fn solve_pi_order(
    known: &BiderivationSeries,
    k: usize,
    degree_bound: u32,
    limits: &Limits,
) -> Result<Bivector> {
    assert!(k >= 2, "π₁ is fixed by α");
    let dim = known.dim();
    let base = exp_angle(&known.truncate(k - 1).to_cochain_series(k), k, limits)?;
    let pi1 = base.coeff(1);
    let sq = self_bracket_series(&base, k + 1)?;
    let r0 = project_complement(&sq.coeff(k + 1), limits)?;
    if pi1.is_zero() {
        return if r0.is_zero() {
            Ok(Bivector::zero(dim))
        } else {
            Err(infeasible(k, degree_bound, r0))
        };
    }

    let monomials = MultiIndex::all_up_to(dim, degree_bound);
    let unknowns: Vec<(usize, usize, MultiIndex)> = (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .flat_map(|(i, j)| monomials.iter().map(move |m| (i, j, m.clone())))
        .collect();

    let two = Rational::from_integer(2.into());
    let columns: Vec<Cochain> = par::try_map(&unknowns, |(i, j, m)| -> Result<Cochain> {
        let e = Bivector::from_upper(
            dim,
            [((*i, *j), Poly::monomial(dim, m.clone(), Rational::one()))],
        )?;
        let br = gbracket(&pi1, &e.to_cochain())?;
        Ok(project_complement(&br, limits)?.scale(&two))
    })?;
    let vecs: Vec<BTreeMap<Component, Rational>> = par::map(&columns, components);
    let rhs_vec = components(&r0);

    let nu = unknowns.len();
    let rows: Vec<usize> = (0..nu).collect();
    let gram_rows: Vec<Vec<Rational>> = par::map(&rows, |&a| {
        (0..nu).map(|b| dot(&vecs[a], &vecs[b])).collect()
    });
    let gram = RationalMatrix::from_rows(gram_rows);
    let rhs: Vec<Rational> = par::map(&rows, |&a| -dot(&vecs[a], &rhs_vec));

    let x = match solve_linear(&gram, &rhs) {
        LinearSolution::Solved(x) => x,
        // The normal equations are always consistent; keep the zero ansatz
        // and let the exact residual check below report the failure.
        LinearSolution::Infeasible { .. } => vec![Rational::zero(); nu],
    };

    let mut residual = r0;
    let mut entries: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
    for ((i, j, m), (xa, col)) in unknowns.iter().zip(x.iter().zip(&columns)) {
        if xa.is_zero() {
            continue;
        }
        residual.add_scaled(col, xa);
        entries
            .entry((*i, *j))
            .or_insert_with(|| Poly::zero(dim))
            .add_term(m.clone(), xa.clone());
    }
    if !residual.is_zero() {
        return Err(infeasible(k, degree_bound, residual));
    }
    Bivector::from_upper(dim, entries)
}

fn infeasible(k: usize, degree_bound: u32, residual: Cochain) -> Error {
    Error::Infeasible {
        order: k + 1,
        degree_bound,
        residual: Box::new(residual),
    }
}

/// The full pipeline: check Jacobi, solve `π₂, …, π_K`, assemble the product.
pub fn solve_star(
    alpha: &Bivector,
    order: usize,
    degree_bound: u32,
    limits: &Limits,
) -> Result<(BiderivationSeries, StarProduct)> {
    jacobi_check(alpha).into_result()?;
    let mut pi = BiderivationSeries::from_alpha(alpha);
    for k in 2..=order {
        let pk = solve_pi_order(&pi, k, degree_bound, limits)?;
        pi.push(pk);
    }
    let star = build_star(&pi, order, limits)?;
    Ok((pi, star))
}
