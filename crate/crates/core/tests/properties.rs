//! Randomized invariants. Each case draws a seed and builds its inputs with
//! the crate's seeded generators, so a shrunk failure reproduces exactly.

use deformq::cochain::CochainSeries;
use deformq::cochain::{tensor_grade, Cochain};
use deformq::exactmath::{mp_pseudoinverse, MultiIndex, Poly, Rational, RationalMatrix};
use deformq::gerstenhaber::gbracket;
use deformq::hochschild::{block_matrix, delta, delta_transpose, BlockOp};
use deformq::pinv::{delta_plus, moore_penrose_identities_hold, project_complement, project_p};
use deformq::sample::{random_cochain, random_poly, rng, SampleRng};
use deformq::starprod::{
    assoc_residual, evaluated_residual, operator_residual, random_triples, StarProduct,
};
use deformq::Limits;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

fn small_rational(r: &mut SampleRng) -> Rational {
    Rational::new(r.gen_range(-4i64..=4).into(), r.gen_range(1i64..=3).into())
}

fn random_matrix(r: &mut SampleRng, rows: usize, cols: usize, density: f64) -> RationalMatrix {
    let data = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if r.gen_bool(density) {
                        small_rational(r)
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    RationalMatrix::from_rows(data)
}

/// Every monomial of degree `≤ 4` with a random coefficient, so that no
/// derivative of order `≤ 4` vanishes by accident.
fn generic_poly(r: &mut SampleRng, dim: usize) -> Poly {
    Poly::from_terms(
        dim,
        MultiIndex::all_up_to(dim, 4)
            .into_iter()
            .map(|m| (m, Rational::from_integer(r.gen_range(1i64..=1000).into()))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pseudoinverse_axioms(seed: u64, rows in 1usize..=8, cols in 1usize..=8, density in 0.2f64..1.0) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, rows, cols, density);
        let p = mp_pseudoinverse(&m);
        prop_assert!(moore_penrose_identities_hold(&m, &p));
    }

    #[test]
    fn pseudoinverse_of_low_rank_product(seed: u64, n in 2usize..=8, k in 1usize..=3) {
        // A = BC with B n×k, C k×n has rank ≤ k
        let mut r = rng(seed);
        let m = &random_matrix(&mut r, n, k, 0.8) * &random_matrix(&mut r, k, n, 0.8);
        let p = mp_pseudoinverse(&m);
        prop_assert!(moore_penrose_identities_hold(&m, &p));
        prop_assert_eq!(p.rank(), m.rank());
    }

    #[test]
    fn leibniz_rule(seed: u64, dim in 1usize..=3, order in 0u32..=3) {
        let mut r = rng(seed);
        let f = random_poly(&mut r, dim, 4, 4);
        let g = random_poly(&mut r, dim, 4, 4);
        let a = MultiIndex::all_of_order(dim, order).swap_remove(r.gen_range(0..MultiIndex::all_of_order(dim, order).len()));
        let lhs = (&f * &g).xderiv(&a).unwrap();
        let mut rhs = Poly::zero(dim);
        for s in a.sub_indices() {
            let rest = a.checked_sub(&s).unwrap();
            rhs = &rhs + &(&f.xderiv(&s).unwrap() * &g.xderiv(&rest).unwrap());
        }
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.xderiv(&MultiIndex::zero(dim)).unwrap(), f);
    }

    #[test]
    fn coboundary_squares_to_zero(seed: u64, arity in 1usize..=2, dim in 1usize..=3, grade in 0u32..=6) {
        let mut r = rng(seed);
        let c = random_cochain(&mut r, arity, dim, grade, 2, 3, false);
        prop_assert!(delta(&delta(&c)).is_zero());
    }

    #[test]
    fn coboundary_matches_functional_formula(seed: u64, dim in 1usize..=2) {
        // δΦ(f,g) = fΦ(g) − Φ(fg) + Φ(f)g and
        // δΨ(f,g,h) = fΨ(g,h) − Ψ(fg,h) + Ψ(f,gh) − Ψ(f,g)h
        let mut r = rng(seed);
        let f = random_poly(&mut r, dim, 3, 3);
        let g = random_poly(&mut r, dim, 3, 3);
        let h = random_poly(&mut r, dim, 3, 3);
        let phi = random_cochain(&mut r, 1, dim, 3, 1, 3, false);
        let ap1 = |c: &Cochain, x: &Poly| c.apply(std::slice::from_ref(x)).unwrap();
        let want = &(&(&f * &ap1(&phi, &g)) - &ap1(&phi, &(&f * &g))) + &(&ap1(&phi, &f) * &g);
        prop_assert_eq!(delta(&phi).apply(&[f.clone(), g.clone()]).unwrap(), want);

        let psi = random_cochain(&mut r, 2, dim, 3, 1, 3, false);
        let ap2 = |x: &Poly, y: &Poly| psi.apply(&[x.clone(), y.clone()]).unwrap();
        let want = &(&(&(&f * &ap2(&g, &h)) - &ap2(&(&f * &g), &h)) + &ap2(&f, &(&g * &h))) - &(&ap2(&f, &g) * &h);
        prop_assert_eq!(delta(&psi).apply(&[f, g, h]).unwrap(), want);
    }

    #[test]
    fn coboundary_is_coefficientwise(seed: u64, dim in 1usize..=3) {
        let mut r = rng(seed);
        let basis = random_cochain(&mut r, 2, dim, 4, 0, 1, false);
        let mono = Poly::monomial(dim, MultiIndex::all_up_to(dim, 2).swap_remove(r.gen_range(0..=dim)), Rational::from_integer(3.into()));
        prop_assert_eq!(delta(&basis.mul_poly(&mono)), delta(&basis).mul_poly(&mono));
        for (t, _) in delta(&basis).terms() {
            prop_assert_eq!(tensor_grade(t), basis.max_grade());
        }
    }

    #[test]
    fn nc_iff_vanishes_on_constants(seed: u64, arity in 1usize..=3, dim in 1usize..=3, nc: bool) {
        let mut r = rng(seed);
        let c = random_cochain(&mut r, arity, dim, 4, 1, 3, nc);
        let vanishes = (0..arity).all(|slot| {
            // a constant in `slot`, generic polynomials elsewhere
            let args: Vec<Poly> = (0..arity)
                .map(|i| if i == slot { Poly::one(dim) } else { generic_poly(&mut r, dim) })
                .collect();
            c.apply(&args).unwrap().is_zero()
        });
        if c.is_nc() {
            prop_assert!(vanishes);
        } else {
            // some slot carries X⁰: with generic arguments the result is nonzero
            prop_assert!(!vanishes || c.is_zero());
        }
    }

    #[test]
    fn apply_is_multilinear(seed: u64, arity in 1usize..=3, dim in 1usize..=2) {
        let mut r = rng(seed);
        let c = random_cochain(&mut r, arity, dim, 4, 1, 3, false);
        let args: Vec<Poly> = (0..arity).map(|_| random_poly(&mut r, dim, 3, 3)).collect();
        let slot = r.gen_range(0..arity);
        let extra = random_poly(&mut r, dim, 3, 3);
        let k = small_rational(&mut r);
        let mut mixed = args.clone();
        mixed[slot] = &args[slot].scale(&k) + &extra;
        let mut only = args.clone();
        only[slot] = extra;
        let lhs = c.apply(&mixed).unwrap();
        let rhs = &c.apply(&args).unwrap().scale(&k) + &c.apply(&only).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grade_split_recombines(seed: u64, arity in 1usize..=3, dim in 1usize..=3) {
        let mut r = rng(seed);
        let c = random_cochain(&mut r, arity, dim, 5, 2, 5, false);
        let sum = c.grade_split().values().fold(Cochain::zero(arity, dim), |acc, p| &acc + p);
        prop_assert_eq!(sum, c);
    }

    #[test]
    fn bracket_is_symmetric_and_nc(seed: u64, dim in 1usize..=2) {
        let mut r = rng(seed);
        let a = random_cochain(&mut r, 2, dim, 4, 1, 3, true);
        let b = random_cochain(&mut r, 2, dim, 4, 1, 3, true);
        let ab = gbracket(&a, &b).unwrap();
        prop_assert_eq!(&ab, &gbracket(&b, &a).unwrap());
        prop_assert!(ab.is_nc());
    }

    #[test]
    fn bracket_matches_functional_formula(seed: u64, dim in 1usize..=2) {
        // [Φ,Ψ](f,g,h) = Φ(Ψ(f,g),h) − Φ(f,Ψ(g,h)) + Ψ(Φ(f,g),h) − Ψ(f,Φ(g,h))
        let mut r = rng(seed);
        let a = random_cochain(&mut r, 2, dim, 3, 1, 2, true);
        let b = random_cochain(&mut r, 2, dim, 3, 1, 2, true);
        let [f, g, h] = random_triples(&mut r, dim, 1).pop().unwrap();
        let ap = |c: &Cochain, x: &Poly, y: &Poly| c.apply(&[x.clone(), y.clone()]).unwrap();
        let want = &(&(&ap(&a, &ap(&b, &f, &g), &h) - &ap(&a, &f, &ap(&b, &g, &h))) + &ap(&b, &ap(&a, &f, &g), &h))
            - &ap(&b, &f, &ap(&a, &g, &h));
        prop_assert_eq!(gbracket(&a, &b).unwrap().apply(&[f, g, h]).unwrap(), want);
    }

    #[test]
    fn associator_matches_operator_residual(seed: u64, dim in 1usize..=2, order in 1usize..=3) {
        // The order-k associator equals (½[Π,Π]_k − δΠ_k) on every triple.
        let mut r = rng(seed);
        let coeffs = (0..order).map(|_| random_cochain(&mut r, 2, dim, 3, 1, 2, true)).collect();
        let star = StarProduct::new(CochainSeries::from_coeffs(2, dim, coeffs)).unwrap();
        let triples = random_triples(&mut r, dim, 2);
        let ops = operator_residual(&star, order).unwrap();
        let evals = evaluated_residual(&star, &triples, order).unwrap();
        for (op, ev) in ops.iter().zip(&evals) {
            for (t, v) in triples.iter().zip(ev) {
                prop_assert_eq!(&-&op.apply(t).unwrap(), v);
            }
        }
        let report = assoc_residual(&star, order, &triples).unwrap();
        prop_assert_eq!(report.is_zero(), ops.iter().all(Cochain::is_zero));
    }

    #[test]
    fn pseudoinverse_output_is_nc_same_grade(seed: u64, dim in 1usize..=2) {
        let mut r = rng(seed);
        let psi = random_cochain(&mut r, 3, dim, 5, 1, 3, true);
        let out = delta_plus(&psi, &Limits::default()).unwrap();
        prop_assert!(out.is_nc());
        let grades = |c: &Cochain| c.grade_split().keys().copied().collect::<Vec<_>>();
        for g in grades(&out) {
            prop_assert!(grades(&psi).contains(&g));
        }
    }

    #[test]
    fn projector_splitting(seed: u64, dim in 1usize..=2) {
        let mut r = rng(seed);
        let psi = random_cochain(&mut r, 3, dim, 5, 1, 3, true);
        let lim = Limits::default();
        let p = project_p(&psi, &lim).unwrap();
        let q = project_complement(&psi, &lim).unwrap();
        prop_assert_eq!(&(&p + &q), &psi);
        prop_assert_eq!(project_p(&p, &lim).unwrap(), p);
        prop_assert!(project_p(&q, &lim).unwrap().is_zero());
    }
}

#[test]
fn transpose_is_adjoint_on_blocks() {
    let lim = Limits::default();
    for dim in 1..=3 {
        for grade in 2..=6 {
            if dim == 3 && grade > 5 {
                continue;
            }
            let d = block_matrix(BlockOp::Delta, 2, grade, dim, &lim).unwrap();
            let dt = block_matrix(BlockOp::DeltaTranspose, 3, grade, dim, &lim).unwrap();
            assert_eq!(dt.source, d.target);
            assert_eq!(dt.target, d.source);
            assert_eq!(dt.matrix, d.matrix.transpose(), "grade {grade}, n = {dim}");
        }
    }
}

#[test]
fn transpose_pairing() {
    // ⟨δΦ, Ψ⟩ = ⟨Φ, δᵀΨ⟩ with orthonormal basis tensors and constant coefficients
    let mut r = rng(9);
    let pair = |a: &Cochain, b: &Cochain| {
        a.terms()
            .map(|(t, p)| {
                &p.coeff(&MultiIndex::zero(a.dim())) * &b.coeff(t).coeff(&MultiIndex::zero(a.dim()))
            })
            .fold(Rational::zero(), |acc, v| acc + v)
    };
    for _ in 0..20 {
        let phi = random_cochain(&mut r, 2, 2, 5, 0, 4, true);
        let psi = random_cochain(&mut r, 3, 2, 5, 0, 4, true);
        assert_eq!(pair(&delta(&phi), &psi), pair(&phi, &delta_transpose(&psi)));
    }
}
