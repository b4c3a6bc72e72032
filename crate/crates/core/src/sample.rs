//! Seeded generators of random polynomials and cochains, so that every
//! randomized check reproduces bit-exactly from its seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cochain::Cochain;
use crate::exactmath::{MultiIndex, Poly, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let num: i64 = rng.gen_range(-5..=5);
    let den: i64 = rng.gen_range(1..=3);
    Rational::new(num.into(), den.into())
}

fn random_index<R: Rng>(rng: &mut R, dim: usize, order: u32) -> MultiIndex {
    let mut e = vec![0u16; dim];
    for _ in 0..order {
        e[rng.gen_range(0..dim)] += 1;
    }
    MultiIndex::from(e)
}

/// Polynomial with up to `terms` monomials of total degree `≤ max_degree`.
pub fn random_poly<R: Rng>(rng: &mut R, dim: usize, max_degree: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(dim);
    for _ in 0..terms {
        let d = rng.gen_range(0..=max_degree);
        p.add_term(random_index(rng, dim, d), small_rational(rng));
    }
    p
}

/// Cochain with up to `terms` entries of grade `≤ max_grade` (at least
/// `arity` when `nc`), coefficients of degree `≤ coeff_degree`.
pub fn random_cochain<R: Rng>(
    rng: &mut R,
    arity: usize,
    dim: usize,
    max_grade: u32,
    coeff_degree: u32,
    terms: usize,
    nc: bool,
) -> Cochain {
    let mut c = Cochain::zero(arity, dim);
    let min_grade = if nc { arity as u32 } else { 0 };
    if max_grade < min_grade {
        return c;
    }
    for _ in 0..terms {
        let grade = rng.gen_range(min_grade..=max_grade);
        // distribute the grade over the slots, one unit per slot first when nc
        let mut orders = vec![if nc { 1u32 } else { 0 }; arity];
        for _ in 0..grade - min_grade {
            orders[rng.gen_range(0..arity)] += 1;
        }
        let tensor: Vec<MultiIndex> = orders
            .iter()
            .map(|&o| {
                let mut m = random_index(rng, dim, o);
                if nc && m.is_zero() {
                    m = MultiIndex::unit(dim, 0);
                }
                m
            })
            .collect();
        let coeff = random_poly(rng, dim, coeff_degree, 2);
        c.add_term(tensor, &coeff);
    }
    c
}
