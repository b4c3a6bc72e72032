//! Composition of multidifferential operators and the Gerstenhaber bracket
//! of 2-cochains.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cochain::{Cochain, CochainSeries, ScaledCochain, Tensor};
use crate::error::{Error, Result};
use crate::exactmath::{MultiIndex, Rational};
use crate::par;

/// Polynomial with integer coefficients, as `(monomial, coefficient)` pairs.
type IntPoly = Vec<(MultiIndex, BigInt)>;

/// The coefficients of `c` over one common denominator.
fn integer_terms(c: &Cochain) -> (Vec<(&Tensor, IntPoly)>, BigInt) {
    let den = c
        .terms()
        .flat_map(|(_, p)| p.terms())
        .fold(BigInt::one(), |l, (_, q)| l.lcm(q.denom()));
    let terms = c
        .terms()
        .map(|(t, p)| {
            let ints = p
                .terms()
                .map(|(m, q)| (m.clone(), q.numer() * (&den / q.denom())))
                .collect();
            (t, ints)
        })
        .collect();
    (terms, den)
}

fn int_xderiv(p: &IntPoly, a: &MultiIndex) -> IntPoly {
    p.iter()
        .filter_map(|(m, c)| {
            let rest = m.checked_sub(a)?;
            Some((rest, c * m.binomial_u64(a)))
        })
        .collect()
}

fn int_mul(p: &IntPoly, q: &IntPoly) -> IntPoly {
    let mut acc: HashMap<MultiIndex, BigInt> = HashMap::new();
    for (m, a) in p {
        for (n, b) in q {
            *acc.entry(m.add(n)).or_default() += a * b;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `acc ± Φ(…, Ψ, …)` on integer numerators, with `Ψ` inserted into `slot`.
fn insert_into(
    acc: &mut ScaledCochain,
    outer: &[(&Tensor, IntPoly)],
    slot: usize,
    inner: &[(&Tensor, IntPoly)],
    negate: bool,
) {
    let mut splits: HashMap<MultiIndex, Vec<Vec<MultiIndex>>> = HashMap::new();
    let mut derivs: HashMap<(usize, MultiIndex), IntPoly> = HashMap::new();
    for (ta, phi) in outer {
        let a = &ta[slot];
        let Some((tb0, _)) = inner.first() else {
            return;
        };
        let q = tb0.len();
        let arity = ta.len() + q - 1;
        let comps = splits
            .entry(a.clone())
            .or_insert_with(|| a.compositions(q + 1));
        for (k, (tb, psi)) in inner.iter().enumerate() {
            // compositions sharing the part that hits ψ share one product
            for group in comps.chunk_by(|x, y| x[0] == y[0]) {
                let dpsi = derivs
                    .entry((k, group[0][0].clone()))
                    .or_insert_with(|| int_xderiv(psi, &group[0][0]));
                if dpsi.is_empty() {
                    continue;
                }
                let mut coeff = int_mul(phi, dpsi);
                if negate {
                    coeff.iter_mut().for_each(|(_, v)| *v = -&*v);
                }
                for comp in group {
                    let mut scalar = 1u64;
                    let mut tensor = Vec::with_capacity(arity);
                    tensor.extend_from_slice(&ta[..slot]);
                    for (pj, bj) in comp[1..].iter().zip(tb.iter()) {
                        let s = pj.add(bj);
                        scalar *= s.binomial_u64(bj);
                        tensor.push(s);
                    }
                    tensor.extend_from_slice(&ta[slot + 1..]);
                    let target = acc.terms.entry(tensor).or_default();
                    for (m, v) in &coeff {
                        let e = target.entry(m.clone()).or_default();
                        if scalar == 1 {
                            *e += v;
                        } else {
                            *e += v * scalar;
                        }
                    }
                }
            }
        }
    }
}

/// `Φ(…, Ψ(g₁,…,g_q), …)` with `Ψ` inserted into `slot` (0-based).
///
/// The outer derivative `X^a` is expanded over the inner product by the
/// multinomial Leibniz rule, so it also hits the inner coefficient:
/// `X^a(ψ ∏ X^{bⱼ}gⱼ) = Σ_{p₀+…+p_q=a} X^{p₀}ψ ∏ C(pⱼ+bⱼ, bⱼ) X^{pⱼ+bⱼ}gⱼ`.
///
/// Both operands are brought to a common denominator first, so the sum runs
/// over integers and each output coefficient is reduced once.
pub fn insert(outer: &Cochain, slot: usize, inner: &Cochain) -> Cochain {
    assert!(slot < outer.arity(), "slot out of range");
    assert_eq!(outer.dim(), inner.dim(), "dimension mismatch");
    let (outer_terms, outer_den) = integer_terms(outer);
    let (inner_terms, inner_den) = integer_terms(inner);
    let arity = outer.arity() + inner.arity() - 1;
    let mut acc = ScaledCochain::new(arity, outer.dim(), outer_den * inner_den);
    insert_into(&mut acc, &outer_terms, slot, &inner_terms, false);
    acc.into_cochain()
}

/// `[Φ,Ψ] = Φ∘₁Ψ − Φ∘₂Ψ + Ψ∘₁Φ − Ψ∘₂Φ` for 2-cochains.
pub fn gbracket(phi: &Cochain, psi: &Cochain) -> Result<Cochain> {
    Ok(gbracket_scaled(phi, psi)?.into_cochain())
}

/// [`gbracket`] before reducing the coefficients.
pub(crate) fn gbracket_scaled(phi: &Cochain, psi: &Cochain) -> Result<ScaledCochain> {
    phi.check_arity(2)?;
    psi.check_arity(2)?;
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: psi.dim(),
        });
    }
    let (phi_terms, phi_den) = integer_terms(phi);
    let (psi_terms, psi_den) = integer_terms(psi);
    let mut acc = ScaledCochain::new(3, phi.dim(), phi_den * psi_den);
    insert_into(&mut acc, &phi_terms, 0, &psi_terms, false);
    insert_into(&mut acc, &phi_terms, 1, &psi_terms, true);
    insert_into(&mut acc, &psi_terms, 0, &phi_terms, false);
    insert_into(&mut acc, &psi_terms, 1, &phi_terms, true);
    Ok(acc)
}

/// Series bracket truncated at `order`: `[A,B]_k = Σ_{i+j=k} [Aᵢ, Bⱼ]`.
pub fn gbracket_series(
    a: &CochainSeries,
    b: &CochainSeries,
    order: usize,
) -> Result<CochainSeries> {
    if a.arity() != 2 || b.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: if a.arity() != 2 { a.arity() } else { b.arity() },
        });
    }
    let dim = a.dim();
    let pairs: Vec<(usize, usize)> = (2..=order)
        .flat_map(|k| (1..k).map(move |i| (i, k - i)))
        .filter(|&(i, j)| {
            a.coeff_ref(i).is_some_and(|c| !c.is_zero())
                && b.coeff_ref(j).is_some_and(|c| !c.is_zero())
        })
        .collect();
    let brackets = par::try_map(&pairs, |&(i, j)| {
        gbracket(a.coeff_ref(i).unwrap(), b.coeff_ref(j).unwrap())
    })?;
    let mut out = CochainSeries::zero(3, dim, order);
    for ((i, j), br) in pairs.iter().zip(brackets) {
        let k = i + j;
        let mut c = out.coeff(k);
        c.add_scaled(&br, &Rational::one());
        out.set(k, c);
    }
    Ok(out)
}

/// `[Π,Π]_k` for the deformation series only (both copies of the same
/// series), exploiting symmetry of the bracket.
pub fn self_bracket_series(pi: &CochainSeries, order: usize) -> Result<CochainSeries> {
    if pi.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: pi.arity(),
        });
    }
    let dim = pi.dim();
    let pairs: Vec<(usize, usize)> = (2..=order)
        .flat_map(|k| (1..=k / 2).map(move |i| (i, k - i)))
        .filter(|&(i, j)| {
            pi.coeff_ref(i).is_some_and(|c| !c.is_zero())
                && pi.coeff_ref(j).is_some_and(|c| !c.is_zero())
        })
        .collect();
    let brackets = par::try_map(&pairs, |&(i, j)| {
        gbracket(pi.coeff_ref(i).unwrap(), pi.coeff_ref(j).unwrap())
    })?;
    let mut out = CochainSeries::zero(3, dim, order);
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    for ((i, j), br) in pairs.iter().zip(brackets) {
        let k = i + j;
        let mut c = out.coeff(k);
        c.add_scaled(&br, if i == j { &one } else { &two });
        out.set(k, c);
    }
    Ok(out)
}
