//! Generalized inverse `δ⁺` on `C³_nc`, the projector `P = δδ⁺`, and the
//! regularized `(ε²I + D − U)⁻¹δᵀ` forms used to cross-check it.

mod eps;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cochain::{Cochain, Tensor};
use crate::error::{Error, Result};
use crate::exactmath::{rat, MultiIndex, Rational, RationalMatrix};
use crate::hochschild::{apply_blockwise, delta, weight_block, BlockOp, WeightBlock};
use crate::Limits;

pub use eps::{ratio_limit, EpsPoly};

/// `ν(a) = ∏(aⁱ + 1) − 2`
pub fn nu_weight(a: &MultiIndex) -> i64 {
    a.box_size() as i64 - 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DU {
    D,
    U,
}

/// `Σ'_{s=0}^{a} X^{a−s} ⊗ X^{b+s}` and `Σ'_{s=0}^{b} X^{a+b−s} ⊗ X^s`,
/// primed sums dropping the `s = 0` and `s = top` terms.
fn u_basis(a: &MultiIndex, b: &MultiIndex) -> Vec<(Tensor, i64)> {
    let mut out = Vec::new();
    let primed = |top: &MultiIndex, mut term: Box<dyn FnMut(&MultiIndex) -> Tensor>| {
        let mut v: Vec<(Tensor, i64)> = top.sub_indices().iter().map(|s| (term(s), 1)).collect();
        v.push((term(top), -1));
        v.push((term(&MultiIndex::zero(top.dim())), -1));
        v
    };
    let (a1, b1) = (a.clone(), b.clone());
    out.extend(primed(
        a,
        Box::new(move |s| vec![a1.checked_sub(s).unwrap(), b1.add(s)]),
    ));
    let ab = a.add(b);
    out.extend(primed(
        b,
        Box::new(move |s| vec![ab.checked_sub(s).unwrap(), s.clone()]),
    ));
    out
}

fn collect(terms: Vec<(Tensor, i64)>) -> Vec<(Tensor, Rational)> {
    let mut acc: BTreeMap<Tensor, i64> = BTreeMap::new();
    for (t, c) in terms {
        *acc.entry(t).or_insert(0) += c;
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(t, c)| (t, rat(c)))
        .collect()
}

fn du_basis(t: &[MultiIndex], which: DU) -> Vec<(Tensor, Rational)> {
    assert_eq!(t.len(), 2, "D and U act on 2-cochains");
    match which {
        DU::D => collect(vec![(t.to_vec(), nu_weight(&t[0]) + nu_weight(&t[1]))]),
        DU::U => collect(u_basis(&t[0], &t[1])),
    }
}

/// Basis action of `D − U`.
pub fn d_minus_u_basis(t: &[MultiIndex]) -> Vec<(Tensor, Rational)> {
    let mut terms = vec![(t.to_vec(), nu_weight(&t[0]) + nu_weight(&t[1]))];
    terms.extend(u_basis(&t[0], &t[1]).into_iter().map(|(t, c)| (t, -c)));
    collect(terms)
}

/// Apply `D` or `U` to a 2-cochain.
pub fn du_apply(which: DU, phi: &Cochain) -> Result<Cochain> {
    phi.check_arity(2)?;
    Ok(phi.map_basis(2, |t| du_basis(t, which)))
}

fn check_c3_nc(psi: &Cochain) -> Result<()> {
    psi.check_arity(3)?;
    psi.check_nc()
}

/// `δ⁺Ψ` for `Ψ ∈ C³_nc`, the exact Moore–Penrose inverse of each δ block.
pub fn delta_plus(psi: &Cochain, limits: &Limits) -> Result<Cochain> {
    check_c3_nc(psi)?;
    apply_blockwise(psi, BlockOp::DeltaPlus, limits)
}

/// Blockwise Moore–Penrose inverse of `δ: C^{p}_nc → C^{p+1}_nc` for any
/// `p ≥ 1` (input arity `p + 1`).
pub fn delta_plus_any(psi: &Cochain, limits: &Limits) -> Result<Cochain> {
    if psi.arity() < 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: psi.arity(),
        });
    }
    apply_blockwise(psi, BlockOp::DeltaPlus, limits)
}

/// `PΨ = δδ⁺Ψ`.
pub fn project_p(psi: &Cochain, limits: &Limits) -> Result<Cochain> {
    Ok(delta(&delta_plus(psi, limits)?))
}

/// `(I − P)Ψ`.
pub fn project_complement(psi: &Cochain, limits: &Limits) -> Result<Cochain> {
    Ok(psi - &project_p(psi, limits)?)
}

/// How to evaluate the regularized inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularization {
    /// Exact `lim_{ε→0} (ε²I + D − U)⁻¹δᵀ` over rational functions of `ε²`.
    SymbolicLimit,
    /// `K⁻¹ Σ_{m=0}^{m_max} (UK⁻¹)^m δᵀ` with `K = ε²I + D`, at a fixed `ε`.
    Neumann { m_max: usize, eps: Rational },
}

fn weight_label(w: &MultiIndex) -> String {
    format!("{w:?}")
}

/// The symbolic ε-limit as an exact matrix on one weight block
/// (rows: nc 2-tensors, columns: nc 3-tensors, bases as in the δ⁺ block).
///
/// Fraction-free Gauss–Jordan elimination on `[ eI + (D − U) | I ]` over
/// `ℤ[e]`, `e = ε²`, leaves `d·I` on the left with `d = ±det` and `d` times
/// the inverse on the right. Each entry of `d·(eI + D − U)⁻¹δᵀ` is then a
/// polynomial `N(e)` and the limit of `N/d` is read off from the lowest-order
/// terms.
pub fn symbolic_limit_block(weight: &MultiIndex) -> Result<RationalMatrix> {
    let du = weight_block(BlockOp::DU, 2, weight);
    let dt = weight_block(BlockOp::DeltaTranspose, 3, weight);
    let s = du.source.len();
    let r = dt.source.len();
    let singular = || Error::SingularLimit {
        weight: weight_label(weight),
    };

    // Row i is scaled by l_i to clear denominators, which turns the inverse
    // into (L A)⁻¹ = A⁻¹ L⁻¹; the scales are put back below.
    let mut scales = Vec::with_capacity(s);
    let mut a: Vec<Vec<EpsPoly>> = (0..s)
        .map(|i| {
            let l = du
                .matrix
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let int = |q: &Rational| q.numer() * (&l / q.denom());
            let mut row: Vec<EpsPoly> = (0..s)
                .map(|j| EpsPoly::constant(int(&du.matrix[(i, j)])))
                .collect();
            row[i] = &row[i] + &EpsPoly::e_times(l.clone());
            row.extend((0..s).map(|j| {
                EpsPoly::constant(if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                })
            }));
            scales.push(l);
            row
        })
        .collect();

    let mut prev = EpsPoly::constant(BigInt::one());
    for k in 0..s {
        let p = (k..s).find(|&i| !a[i][k].is_zero()).ok_or_else(singular)?;
        a.swap(k, p);
        let pivot_row = a[k].clone();
        let pivot = pivot_row[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = row[k].clone();
            for j in 0..2 * s {
                if j == k {
                    continue;
                }
                let v = if f.is_zero() {
                    &pivot * &row[j]
                } else {
                    &(&pivot * &row[j]) - &(&f * &pivot_row[j])
                };
                row[j] = if v.is_zero() { v } else { v.exact_div(&prev) };
            }
            row[k] = EpsPoly::zero();
        }
        prev = pivot;
    }

    // δᵀ = Z / c with integer Z
    let c = (0..s)
        .flat_map(|i| dt.matrix.row(i).iter())
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let z: Vec<Vec<(usize, BigInt)>> = (0..s)
        .map(|k| {
            dt.matrix
                .row(k)
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.numer() * (&c / v.denom()) * &scales[k]))
                .collect()
        })
        .collect();

    let c = Rational::from_integer(c);
    let mut out = RationalMatrix::zeros(s, r);
    for (i, row) in a.iter().enumerate() {
        let mut num = vec![EpsPoly::zero(); r];
        for (k, zk) in z.iter().enumerate() {
            let rik = &row[s + k];
            if rik.is_zero() {
                continue;
            }
            for (j, v) in zk {
                num[*j] = &num[*j] + &rik.scale(v);
            }
        }
        for (j, n) in num.iter().enumerate() {
            out[(i, j)] = ratio_limit(n, &row[i]).ok_or_else(singular)? / &c;
        }
    }
    Ok(out)
}

/// Truncated Neumann series `K⁻¹ Σ_{m≤m_max} (UK⁻¹)^m δᵀ` on one weight
/// block, at a concrete `ε`.
pub fn neumann_block(weight: &MultiIndex, m_max: usize, eps: &Rational) -> Result<RationalMatrix> {
    let dt = weight_block(BlockOp::DeltaTranspose, 3, weight);
    let basis = &dt.target;
    let s = basis.len();
    let e2 = eps * eps;
    let mut k_inv = Vec::with_capacity(s);
    for t in basis {
        let k = &e2 + rat(nu_weight(&t[0]) + nu_weight(&t[1]));
        if k.is_zero() {
            return Err(Error::SingularLimit {
                weight: weight_label(weight),
            });
        }
        k_inv.push(k.recip());
    }
    let pos: BTreeMap<&Tensor, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut u = RationalMatrix::zeros(s, s);
    for (j, t) in basis.iter().enumerate() {
        for (image, c) in du_basis(t, DU::U) {
            u[(pos[&image], j)] += c;
        }
    }
    let scale_rows = |m: &RationalMatrix| {
        let mut out = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = &out[(i, j)] * &k_inv[i];
                out[(i, j)] = v;
            }
        }
        out
    };
    // term_m = K⁻¹ (U K⁻¹)^m δᵀ; term_{m+1} = K⁻¹ U term_m
    let mut term = scale_rows(&dt.matrix);
    let mut sum = term.clone();
    for _ in 0..m_max {
        term = scale_rows(&(&u * &term));
        sum = add_matrices(&sum, &term);
    }
    Ok(sum)
}

fn add_matrices(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let mut out = a.clone();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(i, j)] += &b[(i, j)];
        }
    }
    out
}

fn apply_matrix_block(
    block_source: &WeightBlock,
    rows: &[Tensor],
    matrix: &RationalMatrix,
    entries: &[(&Tensor, &crate::exactmath::Poly)],
    out: &mut Cochain,
) {
    for (t, p) in entries {
        let j = block_source.source_index(t).expect("tensor in block");
        for (i, target) in rows.iter().enumerate() {
            let v = &matrix[(i, j)];
            if !v.is_zero() {
                out.add_term_scaled(target.clone(), p, v);
            }
        }
    }
}

/// `δ⁺` through the regularized forms; `SymbolicLimit` must agree with
/// [`delta_plus`] exactly, `Neumann` is a diagnostic value at finite `ε`.
pub fn delta_plus_regularized(
    psi: &Cochain,
    mode: &Regularization,
    limits: &Limits,
) -> Result<Cochain> {
    check_c3_nc(psi)?;
    let grade = psi.max_grade();
    if grade > limits.max_grade {
        return Err(Error::GradeCap {
            grade,
            cap: limits.max_grade,
        });
    }
    let mut out = Cochain::zero(2, psi.dim());
    for (w, entries) in psi.weight_split() {
        let dt = weight_block(BlockOp::DeltaTranspose, 3, &w);
        let m = match mode {
            Regularization::SymbolicLimit => symbolic_limit_block(&w)?,
            Regularization::Neumann { m_max, eps } => neumann_block(&w, *m_max, eps)?,
        };
        apply_matrix_block(&dt, &dt.target, &m, &entries, &mut out);
    }
    Ok(out)
}

/// `true` iff all four Moore–Penrose identities hold for `(m, p)`.
pub fn moore_penrose_identities_hold(m: &RationalMatrix, p: &RationalMatrix) -> bool {
    let mp = m * p;
    let pm = p * m;
    &mp * m == *m && &pm * p == *p && mp.transpose() == mp && pm.transpose() == pm
}
