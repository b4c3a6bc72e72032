//! The symmetric multilinear brackets `⟨Φ₁,…,Φ_m⟩` built from
//! `⟨Φ₁,Φ₂⟩ = δ⁺[Φ₁,Φ₂]`, their descendant expansion, and `⟨e^Υ⟩`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::One;

use crate::cochain::{Cochain, CochainSeries};
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::gerstenhaber::{gbracket, gbracket_scaled};
use crate::hochschild::{apply_blockwise_scaled, BlockOp};
use crate::pinv::delta_plus;
use crate::{par, Limits};

/// `⟨A, B⟩ = δ⁺[A, B]`.
pub fn pair_bracket(a: &Cochain, b: &Cochain, limits: &Limits) -> Result<Cochain> {
    apply_blockwise_scaled(&gbracket_scaled(a, b)?, BlockOp::DeltaPlus, limits)
}

fn check_args(args: &[&Cochain]) -> Result<()> {
    if args.is_empty() {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: 0,
        });
    }
    for a in args {
        a.check_arity(2)?;
        a.check_nc()?;
    }
    Ok(())
}

/// Memoized evaluator of brackets over a fixed argument pool. Keys are
/// sorted multisets of pool indices, so repeated arguments share entries.
pub struct BracketMemo<'a> {
    pool: Vec<&'a Cochain>,
    memo: HashMap<Vec<usize>, Cochain>,
    limits: &'a Limits,
}

impl<'a> BracketMemo<'a> {
    pub fn new(pool: Vec<&'a Cochain>, limits: &'a Limits) -> Result<Self> {
        check_args(&pool)?;
        Ok(BracketMemo {
            pool,
            memo: HashMap::new(),
            limits,
        })
    }

    /// `⟨pool[k₀], pool[k₁], …⟩` for a multiset of pool indices.
    pub fn eval(&mut self, key: &[usize]) -> Result<Cochain> {
        let mut key = key.to_vec();
        key.sort_unstable();
        self.eval_sorted(&key)
    }

    fn eval_sorted(&mut self, key: &[usize]) -> Result<Cochain> {
        match key.len() {
            0 => unreachable!("brackets take at least one argument"),
            1 => return Ok(self.pool[key[0]].clone()),
            _ => {}
        }
        if let Some(c) = self.memo.get(key) {
            return Ok(c.clone());
        }
        let value = if key.len() == 2 {
            pair_bracket(self.pool[key[0]], self.pool[key[1]], self.limits)?
        } else {
            self.split_sum(key)?
        };
        self.memo.insert(key.to_vec(), value.clone());
        Ok(value)
    }

    /// `½ Σ_S ⟨⟨S⟩, ⟨Sᶜ⟩⟩` over nonempty proper subsets `S`; each unordered
    /// split is visited once by fixing position 0 in `S`.
    fn split_sum(&mut self, key: &[usize]) -> Result<Cochain> {
        let m = key.len();
        let mut splits: BTreeMap<(Vec<usize>, Vec<usize>), u64> = BTreeMap::new();
        for mask in 0u64..(1 << (m - 1)) {
            let full = (mask << 1) | 1;
            if full == (1 << m) - 1 {
                continue;
            }
            let (mut s, mut sc) = (Vec::new(), Vec::new());
            for (i, &k) in key.iter().enumerate() {
                if full & (1 << i) != 0 {
                    s.push(k);
                } else {
                    sc.push(k);
                }
            }
            let pair = if s <= sc { (s, sc) } else { (sc, s) };
            *splits.entry(pair).or_insert(0) += 1;
        }
        let mut jobs = Vec::with_capacity(splits.len());
        for ((s, sc), count) in splits {
            let a = self.eval_sorted(&s)?;
            let b = self.eval_sorted(&sc)?;
            jobs.push((a, b, count));
        }
        let limits = self.limits;
        let parts = par::try_map(&jobs, |(a, b, _)| pair_bracket(a, b, limits))?;
        let dim = self.pool[0].dim();
        let mut out = Cochain::zero(2, dim);
        for ((_, _, count), part) in jobs.iter().zip(parts) {
            out.add_scaled(&part, &Rational::from_integer((*count).into()));
        }
        Ok(out)
    }
}

/// `⟨Φ₁, …, Φ_m⟩` by the subset recursion.
pub fn angle_bracket(args: &[Cochain], limits: &Limits) -> Result<Cochain> {
    let refs: Vec<&Cochain> = args.iter().collect();
    check_args(&refs)?;
    // identical arguments share one pool slot
    let mut pool: Vec<&Cochain> = Vec::new();
    let mut key = Vec::with_capacity(args.len());
    for a in args {
        let id = match pool.iter().position(|p| *p == a) {
            Some(i) => i,
            None => {
                pool.push(a);
                pool.len() - 1
            }
        };
        key.push(id);
    }
    BracketMemo::new(pool, limits)?.eval(&key)
}

/// Full binary pairing tree over argument positions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairingTree {
    Leaf(usize),
    Node(Box<PairingTree>, Box<PairingTree>),
}

impl PairingTree {
    fn join(a: PairingTree, b: PairingTree) -> PairingTree {
        if a <= b {
            PairingTree::Node(Box::new(a), Box::new(b))
        } else {
            PairingTree::Node(Box::new(b), Box::new(a))
        }
    }

    fn eval(&self, args: &[Cochain], limits: &Limits) -> Result<Cochain> {
        match self {
            PairingTree::Leaf(i) => Ok(args[*i].clone()),
            PairingTree::Node(a, b) => {
                pair_bracket(&a.eval(args, limits)?, &b.eval(args, limits)?, limits)
            }
        }
    }
}

/// Every distinct tree reachable by a chain of pair contractions
/// `P²₁₂ P³_{ij} ⋯ P^m_{ij}` of `m` arguments.
pub fn descendant_trees(m: usize) -> Vec<PairingTree> {
    fn rec(state: Vec<PairingTree>, out: &mut BTreeSet<PairingTree>) {
        if state.len() == 1 {
            out.insert(state.into_iter().next().unwrap());
            return;
        }
        for i in 0..state.len() {
            for j in i + 1..state.len() {
                let mut next = Vec::with_capacity(state.len() - 1);
                next.push(PairingTree::join(state[i].clone(), state[j].clone()));
                next.extend(
                    state
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, t)| t.clone()),
                );
                rec(next, out);
            }
        }
    }
    assert!(m >= 1);
    let mut out = BTreeSet::new();
    rec((0..m).map(PairingTree::Leaf).collect(), &mut out);
    out.into_iter().collect()
}

/// The evaluated descendants of `(Φ₁, …, Φ_m)`, one per pairing tree.
pub fn descendants(args: &[Cochain], limits: &Limits) -> Result<Vec<Cochain>> {
    let refs: Vec<&Cochain> = args.iter().collect();
    check_args(&refs)?;
    let trees = descendant_trees(args.len());
    par::try_map(&trees, |t| t.eval(args, limits))
}

/// Partitions of `k` into parts from `allowed`, as nonincreasing lists.
fn partitions(k: usize, max_part: usize, allowed: &dyn Fn(usize) -> bool) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(k)).rev() {
        if !allowed(first) {
            continue;
        }
        for mut rest in partitions(k - first, first, allowed) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| {
        acc * Rational::from_integer(k.into())
    })
}

/// `⟨e^Υ⟩ = Σ_{m≥1} (1/m!) ⟨Υ^m⟩`, truncated at `t^order`.
///
/// By multilinearity the `t^k` coefficient is the sum over multisets
/// `{k₁,…,k_m}` with `Σkᵢ = k` of `⟨Υ_{k₁},…,Υ_{k_m}⟩ / ∏ mult!`.
pub fn exp_angle(upsilon: &CochainSeries, order: usize, limits: &Limits) -> Result<CochainSeries> {
    upsilon_check(upsilon)?;
    let dim = upsilon.dim();
    let coeffs: Vec<Cochain> = (1..=order).map(|k| upsilon.coeff(k)).collect();
    let mut out = CochainSeries::zero(2, dim, order);
    if coeffs.iter().all(Cochain::is_zero) {
        return Ok(out);
    }
    let mut memo = BracketMemo::new(coeffs.iter().collect(), limits)?;
    let nonzero = |j: usize| !coeffs[j - 1].is_zero();
    for k in 1..=order {
        let mut acc = Cochain::zero(2, dim);
        for parts in partitions(k, k, &nonzero) {
            let mut weight = Rational::one();
            let mut run = 1;
            for w in parts.windows(2) {
                if w[0] == w[1] {
                    run += 1;
                } else {
                    weight /= factorial(run);
                    run = 1;
                }
            }
            weight /= factorial(run);
            let key: Vec<usize> = parts.iter().map(|j| j - 1).collect();
            let value = memo.eval(&key)?;
            acc.add_scaled(&value, &weight);
        }
        out.set(k, acc);
    }
    Ok(out)
}

fn upsilon_check(upsilon: &CochainSeries) -> Result<()> {
    if upsilon.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: upsilon.arity(),
        });
    }
    for (_, c) in upsilon.iter() {
        c.check_nc()?;
    }
    Ok(())
}

/// Solve `Π = Υ + ½δ⁺[Π,Π]` order by order, the fixed-point form of
/// `⟨e^Υ⟩`.
pub fn fixed_point_series(
    upsilon: &CochainSeries,
    order: usize,
    limits: &Limits,
) -> Result<CochainSeries> {
    upsilon_check(upsilon)?;
    let dim = upsilon.dim();
    let half = Rational::new(1.into(), 2.into());
    let mut pi = CochainSeries::zero(2, dim, order);
    for k in 1..=order {
        let mut sq = Cochain::zero(3, dim);
        for i in 1..k {
            let (a, b) = (pi.coeff(i), pi.coeff(k - i));
            if !a.is_zero() && !b.is_zero() {
                sq.add_scaled(&gbracket(&a, &b)?, &Rational::one());
            }
        }
        let mut c = upsilon.coeff(k);
        c.add_scaled(&delta_plus(&sq, limits)?, &half);
        pi.set(k, c);
    }
    Ok(pi)
}
