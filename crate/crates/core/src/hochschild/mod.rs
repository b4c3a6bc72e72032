//! The Hochschild coboundary `δ`, its transpose `δᵀ`, and their matrices on
//! finite graded blocks.
//!
//! Every operator here acts on coefficients as scalars and maps a basis
//! tensor to tensors of the same total weight `Σ aᵢ`, so all linear algebra
//! is done one weight vector at a time.

mod blocks;

use std::collections::BTreeMap;

use crate::cochain::{Cochain, Tensor};
use crate::exactmath::{rat, MultiIndex, Rational};

pub(crate) use blocks::apply_blockwise_scaled;
pub use blocks::{
    apply_blockwise, block_matrix, clear_block_cache, nc_basis, weight_block, BlockOp, GradedBlock,
    WeightBlock,
};

/// Image of one basis tensor under `δ`:
/// `X⁰⊗t + Σₖ (−1)ᵏ Σ_{b+c=aₖ} (…⊗X^b⊗X^c⊗…) + (−1)^{p+1} t⊗X⁰`.
pub fn delta_basis(t: &[MultiIndex], dim: usize) -> Vec<(Tensor, Rational)> {
    let p = t.len();
    let zero = MultiIndex::zero(dim);
    let mut acc: BTreeMap<Tensor, i64> = BTreeMap::new();
    let mut push = |key: Tensor, c: i64| {
        *acc.entry(key).or_insert(0) += c;
    };

    let mut first = Vec::with_capacity(p + 1);
    first.push(zero.clone());
    first.extend_from_slice(t);
    push(first, 1);

    for k in 0..p {
        let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
        for b in t[k].sub_indices() {
            let c = t[k].checked_sub(&b).expect("sub-index");
            let mut image = Vec::with_capacity(p + 1);
            image.extend_from_slice(&t[..k]);
            image.push(b);
            image.push(c);
            image.extend_from_slice(&t[k + 1..]);
            push(image, sign);
        }
    }

    let mut last = t.to_vec();
    last.push(zero);
    push(last, if (p + 1).is_multiple_of(2) { 1 } else { -1 });

    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(k, c)| (k, rat(c)))
        .collect()
}

/// Image of one basis tensor of arity `p+1` under `δᵀ`, built from
/// `δᵀ(X^a⊗X^b) = −X^{a+b} + δ^a_0 X^b + X^a δ^b_0` on adjacent pairs with
/// sign `(−1)^{k+1}`.
pub fn delta_transpose_basis(t: &[MultiIndex]) -> Vec<(Tensor, Rational)> {
    let q = t.len();
    assert!(q >= 2, "δᵀ needs arity at least 2");
    let mut acc: BTreeMap<Tensor, i64> = BTreeMap::new();
    for k in 0..q - 1 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let (a, b) = (&t[k], &t[k + 1]);
        let mut pair: Vec<(MultiIndex, i64)> = vec![(a.add(b), -1)];
        if a.is_zero() {
            pair.push((b.clone(), 1));
        }
        if b.is_zero() {
            pair.push((a.clone(), 1));
        }
        for (merged, c) in pair {
            let mut image = Vec::with_capacity(q - 1);
            image.extend_from_slice(&t[..k]);
            image.push(merged);
            image.extend_from_slice(&t[k + 2..]);
            *acc.entry(image).or_insert(0) += sign * c;
        }
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(k, c)| (k, rat(c)))
        .collect()
}

/// Hochschild coboundary of a `p`-cochain.
pub fn delta(phi: &Cochain) -> Cochain {
    let dim = phi.dim();
    phi.map_basis(phi.arity() + 1, |t| delta_basis(t, dim))
}

/// Transpose of `δ` in the orthonormal `X`-basis.
pub fn delta_transpose(psi: &Cochain) -> Cochain {
    assert!(psi.arity() >= 2, "δᵀ needs arity at least 2");
    psi.map_basis(psi.arity() - 1, |t| delta_transpose_basis(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Poly;

    fn t(ix: &[&[u16]]) -> Tensor {
        ix.iter().map(|v| MultiIndex::from(v.to_vec())).collect()
    }

    fn basis(ix: &[&[u16]]) -> Cochain {
        let tt = t(ix);
        Cochain::basis(tt[0].dim(), tt)
    }

    #[test]
    fn derivations_are_cocycles() {
        assert!(delta(&basis(&[&[1]])).is_zero());
        assert!(delta(&basis(&[&[0, 1]])).is_zero());
    }

    #[test]
    fn delta_of_second_derivative() {
        assert_eq!(delta(&basis(&[&[2]])), -&basis(&[&[1], &[1]]));
    }

    #[test]
    fn delta_on_two_cochains() {
        assert_eq!(delta(&basis(&[&[2], &[1]])), -&basis(&[&[1], &[1], &[1]]));
        assert_eq!(delta(&basis(&[&[1], &[2]])), basis(&[&[1], &[1], &[1]]));
    }

    #[test]
    fn delta_of_constant_multiplication() {
        // δ(X⁰) = X⁰⊗X⁰
        assert_eq!(delta(&basis(&[&[0]])), basis(&[&[0], &[0]]));
    }

    #[test]
    fn delta_transpose_examples() {
        assert_eq!(delta_transpose(&basis(&[&[1], &[1]])), -&basis(&[&[2]]));
        assert!(delta_transpose(&basis(&[&[0], &[3]])).is_zero());
        assert_eq!(
            delta_transpose(&basis(&[&[1], &[1], &[1]])),
            &basis(&[&[1], &[2]]) - &basis(&[&[2], &[1]])
        );
        // δᵀ(X⁰⊗X⁰) = X⁰
        assert_eq!(delta_transpose(&basis(&[&[0], &[0]])), basis(&[&[0]]));
    }

    #[test]
    fn coefficient_carried_along() {
        let phi = basis(&[&[2], &[1]]).mul_poly(&Poly::parse("x1^2 + 3", 1).unwrap());
        let expected = basis(&[&[1], &[1], &[1]]).mul_poly(&Poly::parse("-x1^2 - 3", 1).unwrap());
        assert_eq!(delta(&phi), expected);
    }
}
