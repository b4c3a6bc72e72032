//! Acceptance gate: ten exact checks, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report prints in order; any
//! failure makes the process exit nonzero.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::One;

use deformq::brackets::{angle_bracket, descendant_trees, descendants, exp_angle, BracketMemo};
use deformq::cochain::{Cochain, CochainSeries, Tensor};
use deformq::corpus;
use deformq::exactmath::{MultiIndex, Poly, Rational, RationalMatrix};
use deformq::gerstenhaber::{gbracket, self_bracket_series};
use deformq::hochschild::{block_matrix, delta, weight_block, BlockOp};
use deformq::pinv::{delta_plus, project_complement, symbolic_limit_block};
use deformq::sample::{random_cochain, rng};
use deformq::starprod::{
    assoc_residual, build_star, gauge_transform, obstruction_residual, random_triples, solve_star,
    upsilon_from_deformation, BiderivationSeries, GaugeMap, StarProduct,
};
use deformq::{Error, Limits};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

const ORDER: usize = 3;
const DEGREE_BOUND: u32 = 4;
const TRIALS: usize = 20;

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

fn lim() -> Limits {
    Limits::default()
}

/// Weight vectors of total order `grade` in every dimension `1..=max_dim`.
fn weights(grades: std::ops::RangeInclusive<u32>, max_dim: usize) -> Vec<MultiIndex> {
    (1..=max_dim)
        .flat_map(|n| {
            grades
                .clone()
                .flat_map(move |g| MultiIndex::all_of_order(n, g))
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: deformq::Result<T>) -> Result<T, String> {
    r.map_err(|e| match e {
        Error::Infeasible { order, degree_bound, residual } => format!(
            "solver infeasible at obstruction order {order} (degree bound {degree_bound}); residual: {}",
            residual.pretty()
        ),
        e => e.to_string(),
    })
}

fn complex_axioms() -> Result<(), String> {
    let mut r = rng(1);
    for trial in 0..200 {
        let dim = 1 + trial % 3;
        let arity = 1 + (trial / 3) % 2;
        let c = random_cochain(&mut r, arity, dim, 6, 2, 6, false);
        let dd = delta(&delta(&c));
        ensure(dd.is_zero(), || format!("δδ ≠ 0 on {c:?}: {dd:?}"))?;
    }
    Ok(())
}

fn mp_axioms(m: &RationalMatrix, p: &RationalMatrix) -> bool {
    &(&(m * p) * m) == m && &(&(p * m) * p) == p
}

fn generalized_inverse_axioms() -> Result<(), String> {
    for arity_in in [1usize, 2] {
        // each graded block is the direct sum of its weight blocks
        for w in weights(2..=6, 3) {
            let d = weight_block(BlockOp::Delta, arity_in, &w);
            let dp = weight_block(BlockOp::DeltaPlus, arity_in + 1, &w);
            ensure(d.source == dp.target && d.target == dp.source, || {
                format!("basis mismatch at {w:?}")
            })?;
            ensure(mp_axioms(&d.matrix, &dp.matrix), || {
                format!("δδ⁺δ = δ or δ⁺δδ⁺ = δ⁺ fails at weight {w:?}, arity {arity_in}")
            })?;
        }
        // and the assembled graded blocks on the smaller grades
        for dim in 1..=2 {
            for grade in 2..=4 {
                let d = ok(block_matrix(BlockOp::Delta, arity_in, grade, dim, &lim()))?;
                let dp = ok(block_matrix(
                    BlockOp::DeltaPlus,
                    arity_in + 1,
                    grade,
                    dim,
                    &lim(),
                ))?;
                ensure(mp_axioms(&d.matrix, &dp.matrix), || {
                    format!("graded axioms fail at grade {grade}, n = {dim}")
                })?;
            }
        }
    }
    Ok(())
}

fn cross_validation() -> Result<(), String> {
    for w in weights(3..=5, 3) {
        let dp = weight_block(BlockOp::DeltaPlus, 3, &w);
        let limit = ok(symbolic_limit_block(&w))?;
        ensure(limit == dp.matrix, || {
            format!("ε-limit differs from δ⁺ at weight {w:?}")
        })?;
    }
    for w in weights(2..=5, 3) {
        let d = weight_block(BlockOp::Delta, 2, &w);
        let du = weight_block(BlockOp::DU, 2, &w);
        let gram = &d.matrix.transpose() * &d.matrix;
        ensure(gram == du.matrix, || format!("δᵀδ ≠ D − U at weight {w:?}"))?;
    }
    let t: Tensor = vec![MultiIndex::from([1]); 3];
    let got = ok(delta_plus(&Cochain::basis(1, t), &lim()))?;
    let b = |a: u16, c: u16| Cochain::basis(1, vec![MultiIndex::from([a]), MultiIndex::from([c])]);
    let expected = (&b(1, 2) - &b(2, 1)).scale(&half());
    ensure(got == expected, || format!("δ⁺(X¹⊗X¹⊗X¹) = {got:?}"))
}

fn random_nc2(r: &mut deformq::sample::SampleRng, dim: usize) -> Cochain {
    loop {
        let c = random_cochain(r, 2, dim, 3, 1, 3, true);
        if !c.is_zero() {
            return c;
        }
    }
}

fn wide() -> Limits {
    Limits { max_grade: 12 }
}

fn bracket_combinatorics() -> Result<(), String> {
    let counts: Vec<usize> = (2..=4).map(|m| descendant_trees(m).len()).collect();
    ensure(counts == [1, 3, 15], || {
        format!("descendant counts {counts:?}")
    })?;
    let mut r = rng(4);
    for (dim, m) in [(1, 2), (2, 2), (1, 3), (2, 3), (1, 4), (2, 4)] {
        let args: Vec<Cochain> = (0..m).map(|_| random_nc2(&mut r, dim)).collect();
        let rec = ok(angle_bracket(&args, &wide()))?;
        let parts = ok(descendants(&args, &wide()))?;
        let mut sum = Cochain::zero(2, dim);
        for p in &parts {
            sum.add_scaled(p, &Rational::one());
        }
        ensure(rec == sum, || {
            format!("recursion ≠ descendant sum for m = {m}, n = {dim}")
        })?;
    }
    Ok(())
}

fn symmetry_multilinearity() -> Result<(), String> {
    let mut r = rng(5);
    let dim = 2;
    for m in 2..=4 {
        let args: Vec<Cochain> = (0..m).map(|_| random_nc2(&mut r, dim)).collect();
        let lims = wide();
        let mut values = Vec::new();
        for perm in permutations(m) {
            let pool: Vec<&Cochain> = perm.iter().map(|&i| &args[i]).collect();
            let key: Vec<usize> = (0..m).collect();
            let mut memo = ok(BracketMemo::new(pool, &lims))?;
            values.push(ok(memo.eval(&key))?);
        }
        ensure(values.windows(2).all(|w| w[0] == w[1]), || {
            format!("permutations disagree for m = {m}")
        })?;

        let other = random_nc2(&mut r, dim);
        let (a, b) = (
            Rational::new(3.into(), 2.into()),
            Rational::from_integer((-2).into()),
        );
        let mut mixed = args.clone();
        let mut combo = args[0].scale(&a);
        combo.add_scaled(&other, &b);
        mixed[0] = combo;
        let lhs = ok(angle_bracket(&mixed, &lims))?;
        let mut with_other = args.clone();
        with_other[0] = other;
        let mut rhs = ok(angle_bracket(&args, &lims))?.scale(&a);
        rhs.add_scaled(&ok(angle_bracket(&with_other, &lims))?, &b);
        ensure(lhs == rhs, || {
            format!("not linear in the first slot for m = {m}")
        })?;
    }
    Ok(())
}

fn semiclassical() -> Result<(), String> {
    for (name, alpha) in corpus::all() {
        let n = alpha.dim();
        let star = ok(build_star(
            &BiderivationSeries::from_alpha(&alpha),
            2,
            &lim(),
        ))?;
        ensure(star.coeff(1) == alpha.to_cochain().scale(&half()), || {
            format!("{name}: Π₁ ≠ ½α")
        })?;
        for i in 0..n {
            for j in 0..n {
                let (xi, xj) = (Poly::var(n, i), Poly::var(n, j));
                let a = ok(deformq::starprod::star_mul(&xi, &xj, &star))?;
                let b = ok(deformq::starprod::star_mul(&xj, &xi, &star))?;
                let bracket = ok(alpha.bracket(&xi, &xj))?;
                ensure(
                    (&a[0] - &b[0]).is_zero() && &a[1] - &b[1] == bracket,
                    || {
                        format!(
                            "{name}: [x{}, x{}]∗ ≠ t·{{x{}, x{}}}",
                            i + 1,
                            j + 1,
                            i + 1,
                            j + 1
                        )
                    },
                )?;
            }
        }
    }
    Ok(())
}

fn check_associative(name: &str, star: &StarProduct, seed: u64) -> Result<(), String> {
    let triples = random_triples(&mut rng(seed), star.dim(), TRIALS);
    let report = ok(assoc_residual(star, ORDER, &triples))?;
    match report.first_failure() {
        None => Ok(()),
        Some(k) => Err(format!(
            "{name}: associativity fails at order {k}: {}",
            report.operator[k - 1].pretty()
        )),
    }
}

fn end_to_end() -> Result<(), String> {
    for (i, (name, alpha)) in corpus::all().into_iter().enumerate() {
        let (_, star) = ok(solve_star(&alpha, ORDER, DEGREE_BOUND, &lim()))?;
        check_associative(name, &star, 100 + i as u64)?;
    }
    Ok(())
}

fn obstruction_split() -> Result<(), String> {
    for (name, alpha) in corpus::all() {
        let a = alpha.to_cochain().scale(&half());
        let first = ok(project_complement(&ok(gbracket(&a, &a))?, &lim()))?;
        ensure(first.is_zero(), || format!("{name}: (I−P)[Π₁,Π₁] ≠ 0"))?;
        let (pi, _) = ok(solve_star(&alpha, ORDER, DEGREE_BOUND, &lim()))?;
        let obs = ok(obstruction_residual(&pi, ORDER, &lim()))?;
        if let Some((k, c)) = obs.iter().find(|(_, c)| !c.is_zero()) {
            return Err(format!("{name}: obstruction at order {k}: {}", c.pretty()));
        };
    }
    Ok(())
}

fn gauge_behavior() -> Result<(), String> {
    let mut r = rng(9);
    for (name, alpha) in [
        ("constant_n2", corpus::constant_n2()),
        ("linear_x1_n2", corpus::linear_x1_n2()),
    ] {
        let dim = alpha.dim();
        let (pi, _) = ok(solve_star(&alpha, ORDER, DEGREE_BOUND, &wide()))?;
        let pi_series = pi.to_cochain_series(ORDER);
        let reference = ok(exp_angle(&pi_series, ORDER, &wide()))?;
        for n in 1..=2usize {
            // λ_k for k ≥ n, so Υ = π + δλ agrees with π below order n
            let mut lambda = vec![Cochain::zero(1, dim); ORDER + 1];
            for slot in lambda.iter_mut().take(ORDER + 1).skip(n) {
                *slot = random_cochain(&mut r, 1, dim, 3, 1, 3, true);
            }
            let ups = CochainSeries::from_coeffs(
                2,
                dim,
                (1..=ORDER)
                    .map(|k| &pi_series.coeff(k) + &delta(&lambda[k]))
                    .collect(),
            );
            let star = StarProduct::new(ok(exp_angle(&ups, ORDER, &wide()))?)
                .map_err(|e| e.to_string())?;
            check_associative(name, &star, 200 + n as u64)?;

            let g = GaugeMap::new(n, lambda[n].clone()).map_err(|e| e.to_string())?;
            let moved = ok(gauge_transform(&star, &g, ORDER))?;
            let recovered = ok(upsilon_from_deformation(moved.deformation(), &wide()))?;
            for k in 1..=n {
                ensure(recovered.coeff(k) == pi_series.coeff(k), || {
                    format!("{name}, n = {n}: recovered generator at order {k} is not π_{k}")
                })?;
                ensure(moved.coeff(k) == reference.coeff(k), || {
                    format!("{name}, n = {n}: Π′_{k} ≠ ⟨e^π⟩_{k}")
                })?;
            }
            check_associative(name, &moved, 300 + n as u64)?;
        }
    }
    Ok(())
}

fn fixed_point() -> Result<(), String> {
    let mut r = rng(10);
    let mut cases: Vec<CochainSeries> = Vec::new();
    for dim in 1..=3 {
        let coeffs = (1..=4u32)
            .map(|k| random_cochain(&mut r, 2, dim, (k + 1).min(3), 1, 2, true))
            .collect();
        cases.push(CochainSeries::from_coeffs(2, dim, coeffs));
    }
    let so3 = corpus::so3().scale(&half()).to_cochain();
    let second = random_cochain(&mut r, 2, 3, 3, 1, 2, true);
    cases.push(CochainSeries::from_coeffs(2, 3, vec![so3, second]));
    for ups in &cases {
        let order = 4;
        let pi = ok(exp_angle(ups, order, &lim()))?;
        let sq = ok(self_bracket_series(&pi, order))?;
        for k in 1..=order {
            let mut rhs = ups.coeff(k);
            let s = sq.coeff(k);
            if !s.is_zero() {
                rhs.add_scaled(&ok(delta_plus(&s, &lim()))?, &half());
            }
            ensure(pi.coeff(k) == rhs, || {
                format!("fixed point fails at order {k}, n = {}", ups.dim())
            })?;
        }
    }
    Ok(())
}

fn run(idx: usize, label: &str, bound: Option<Duration>, f: fn() -> Result<(), String>) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let elapsed = start.elapsed();
    let outcome = match (outcome, bound) {
        (Ok(()), Some(b)) if elapsed > b => Err(format!("took {elapsed:.1?}, bound {b:?}")),
        (o, _) => o,
    };
    match &outcome {
        Ok(()) => println!("criterion {idx:>2} PASS  {label} ({elapsed:.2?})"),
        Err(msg) => println!("criterion {idx:>2} FAIL  {label} ({elapsed:.2?}): {msg}"),
    }
    outcome.is_ok()
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    type Check = fn() -> Result<(), String>;
    let criteria: [(&str, Option<Duration>, Check); 10] = [
        ("complex axioms δδ = 0", Some(s(10)), complex_axioms),
        (
            "generalized-inverse axioms",
            Some(s(30)),
            generalized_inverse_axioms,
        ),
        ("δ⁺ cross-validation", Some(s(60)), cross_validation),
        ("bracket combinatorics", Some(s(60)), bracket_combinatorics),
        (
            "bracket symmetry and multilinearity",
            None,
            symmetry_multilinearity,
        ),
        ("semiclassical contract", None, semiclassical),
        ("end-to-end associativity", Some(s(600)), end_to_end),
        ("obstruction split", None, obstruction_split),
        ("gauge behavior", None, gauge_behavior),
        ("fixed point", None, fixed_point),
    ];
    let mut all = true;
    for (i, (label, bound, f)) in criteria.into_iter().enumerate() {
        all &= run(i + 1, label, bound, f);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
