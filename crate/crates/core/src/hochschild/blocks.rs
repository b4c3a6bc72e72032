use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{delta_basis, delta_transpose_basis};
use crate::cochain::{
    tensor_grade, tensor_to_string, tensor_weight, Cochain, ScaledCochain, Tensor,
};
use crate::error::{Error, Result};
use crate::exactmath::{mp_pseudoinverse, MultiIndex, Poly, Rational, RationalMatrix};
use crate::pinv::d_minus_u_basis;
use crate::{par, Limits};

/// Operators that have graded-block matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockOp {
    /// `δ: C^p_nc → C^{p+1}_nc`, `arity_in = p`.
    Delta,
    /// `δᵀ: C^{p+1}_nc → C^p_nc`, `arity_in = p + 1`.
    DeltaTranspose,
    /// `D − U` on `C²_nc`.
    DU,
    /// `δ⁺: C^{p+1}_nc → C^p_nc`, `arity_in = p + 1`.
    DeltaPlus,
    /// `P = δδ⁺` on `C^{p+1}_nc`, `arity_in = p + 1`.
    Projector,
}

impl BlockOp {
    pub fn name(self) -> &'static str {
        match self {
            BlockOp::Delta => "delta",
            BlockOp::DeltaTranspose => "delta_transpose",
            BlockOp::DU => "DU",
            BlockOp::DeltaPlus => "delta_plus",
            BlockOp::Projector => "projector",
        }
    }

    pub fn arity_out(self, arity_in: usize) -> usize {
        match self {
            BlockOp::Delta => arity_in + 1,
            BlockOp::DeltaTranspose | BlockOp::DeltaPlus => arity_in - 1,
            BlockOp::DU | BlockOp::Projector => arity_in,
        }
    }

    fn min_arity_in(self) -> usize {
        match self {
            BlockOp::Delta => 1,
            BlockOp::DU => 2,
            _ => 2,
        }
    }
}

/// Matrix of an operator restricted to one total weight vector.
/// Rows index `target`, columns index `source`; both bases are nc tensors in
/// descending lexicographic order.
#[derive(Debug)]
pub struct WeightBlock {
    pub op: BlockOp,
    pub arity_in: usize,
    pub weight: MultiIndex,
    pub source: Vec<Tensor>,
    pub target: Vec<Tensor>,
    pub matrix: RationalMatrix,
    source_pos: HashMap<Tensor, usize>,
    /// `matrix = columns / denom` with integer entries, stored by column.
    columns: Vec<Vec<(usize, BigInt)>>,
    denom: BigInt,
}

impl WeightBlock {
    pub fn source_index(&self, t: &[MultiIndex]) -> Option<usize> {
        self.source_pos.get(t).copied()
    }
}

/// Matrix of an operator on all nc tensors of one grade `N = Σ|aᵢ|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBlock {
    pub op: BlockOp,
    pub arity_in: usize,
    pub arity_out: usize,
    pub grade: u32,
    pub dim: usize,
    pub source: Vec<Tensor>,
    pub target: Vec<Tensor>,
    pub matrix: RationalMatrix,
}

type BlockKey = (BlockOp, usize, MultiIndex);

static BLOCKS: LazyLock<RwLock<HashMap<BlockKey, Arc<WeightBlock>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Drop every cached block.
pub fn clear_block_cache() {
    BLOCKS.write().expect("block cache poisoned").clear();
}

/// All nc tensors of the given arity and total weight, descending lexicographic.
pub fn nc_basis(arity: usize, weight: &MultiIndex) -> Vec<Tensor> {
    fn rec(arity: usize, rest: &MultiIndex, prefix: &mut Tensor, out: &mut Vec<Tensor>) {
        if arity == 1 {
            if !rest.is_zero() {
                let mut t = prefix.clone();
                t.push(rest.clone());
                out.push(t);
            }
            return;
        }
        for s in rest.sub_indices() {
            if s.is_zero() {
                continue;
            }
            let r = rest.checked_sub(&s).expect("sub-index");
            if (r.order() as usize) < arity - 1 {
                continue;
            }
            prefix.push(s);
            rec(arity - 1, &r, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if arity == 0 || (weight.order() as usize) < arity {
        return out;
    }
    rec(arity, weight, &mut Vec::with_capacity(arity), &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn positions(basis: &[Tensor]) -> HashMap<Tensor, usize> {
    basis
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect()
}

fn basis_action_matrix<F>(source: &[Tensor], target: &[Tensor], f: F) -> RationalMatrix
where
    F: Fn(&Tensor) -> Vec<(Tensor, Rational)>,
{
    let tpos = positions(target);
    let mut m = RationalMatrix::zeros(target.len(), source.len());
    for (j, s) in source.iter().enumerate() {
        for (image, c) in f(s) {
            let i = *tpos
                .get(&image)
                .unwrap_or_else(|| panic!("image {} left the nc block", tensor_to_string(&image)));
            m[(i, j)] += c;
        }
    }
    m
}

fn build_block(op: BlockOp, arity_in: usize, weight: &MultiIndex) -> WeightBlock {
    let dim = weight.dim();
    let source = nc_basis(arity_in, weight);
    let target = nc_basis(op.arity_out(arity_in), weight);
    let matrix = match op {
        BlockOp::Delta => basis_action_matrix(&source, &target, |t| delta_basis(t, dim)),
        BlockOp::DeltaTranspose => {
            basis_action_matrix(&source, &target, |t| delta_transpose_basis(t))
        }
        BlockOp::DU => basis_action_matrix(&source, &target, |t| d_minus_u_basis(t)),
        BlockOp::DeltaPlus => {
            let d = weight_block(BlockOp::Delta, arity_in - 1, weight);
            mp_pseudoinverse(&d.matrix)
        }
        BlockOp::Projector => {
            let d = weight_block(BlockOp::Delta, arity_in - 1, weight);
            let dp = weight_block(BlockOp::DeltaPlus, arity_in, weight);
            &d.matrix * &dp.matrix
        }
    };
    let (columns, denom) = integer_columns(&matrix);
    WeightBlock {
        op,
        arity_in,
        weight: weight.clone(),
        source_pos: positions(&source),
        source,
        target,
        matrix,
        columns,
        denom,
    }
}

fn integer_columns(m: &RationalMatrix) -> (Vec<Vec<(usize, BigInt)>>, BigInt) {
    let mut denom = BigInt::one();
    for i in 0..m.rows() {
        for v in m.row(i) {
            denom = denom.lcm(v.denom());
        }
    }
    let mut columns = vec![Vec::new(); m.cols()];
    for i in 0..m.rows() {
        for (j, v) in m.row(i).iter().enumerate() {
            if !v.is_zero() {
                columns[j].push((i, v.numer() * (&denom / v.denom())));
            }
        }
    }
    (columns, denom)
}

/// Cached matrix of `op` on the nc tensors of one weight vector.
pub fn weight_block(op: BlockOp, arity_in: usize, weight: &MultiIndex) -> Arc<WeightBlock> {
    assert!(
        arity_in >= op.min_arity_in(),
        "{} needs arity_in ≥ {}",
        op.name(),
        op.min_arity_in()
    );
    let key = (op, arity_in, weight.clone());
    if let Some(b) = BLOCKS.read().expect("block cache poisoned").get(&key) {
        return Arc::clone(b);
    }
    let block = Arc::new(build_block(op, arity_in, weight));
    let mut cache = BLOCKS.write().expect("block cache poisoned");
    Arc::clone(cache.entry(key).or_insert(block))
}

fn check_grade(grade: u32, limits: &Limits) -> Result<()> {
    if grade > limits.max_grade {
        return Err(Error::GradeCap {
            grade,
            cap: limits.max_grade,
        });
    }
    Ok(())
}

/// Exact matrix of `op` on the nc basis of grade `grade` in dimension `dim`.
pub fn block_matrix(
    op: BlockOp,
    arity_in: usize,
    grade: u32,
    dim: usize,
    limits: &Limits,
) -> Result<GradedBlock> {
    check_grade(grade, limits)?;
    let arity_out = op.arity_out(arity_in);
    let weights = MultiIndex::all_of_order(dim, grade);
    let blocks: Vec<Arc<WeightBlock>> = par::map(&weights, |w| weight_block(op, arity_in, w));

    let mut source: Vec<Tensor> = blocks
        .iter()
        .flat_map(|b| b.source.iter().cloned())
        .collect();
    let mut target: Vec<Tensor> = blocks
        .iter()
        .flat_map(|b| b.target.iter().cloned())
        .collect();
    source.sort_unstable_by(|a, b| b.cmp(a));
    target.sort_unstable_by(|a, b| b.cmp(a));
    let spos = positions(&source);
    let tpos = positions(&target);

    let mut matrix = RationalMatrix::zeros(target.len(), source.len());
    for b in &blocks {
        for (j, s) in b.source.iter().enumerate() {
            for (i, t) in b.target.iter().enumerate() {
                let v = &b.matrix[(i, j)];
                if !v.is_zero() {
                    matrix[(tpos[t], spos[s])] = v.clone();
                }
            }
        }
    }
    Ok(GradedBlock {
        op,
        arity_in,
        arity_out,
        grade,
        dim,
        source,
        target,
        matrix,
    })
}

/// Apply a block operator to an nc cochain, one weight vector at a time.
pub fn apply_blockwise(c: &Cochain, op: BlockOp, limits: &Limits) -> Result<Cochain> {
    c.check_nc()?;
    if let Some(g) = c.terms().map(|(t, _)| tensor_grade(t)).max() {
        check_grade(g, limits)?;
    }
    let arity_in = c.arity();
    let dim = c.dim();
    let groups: Vec<(MultiIndex, Vec<(&Tensor, &Poly)>)> = c.weight_split().into_iter().collect();
    let parts = par::map(&groups, |(w, entries)| {
        let block = weight_block(op, arity_in, w);
        // one integer matrix-vector product per coefficient monomial
        let mut by_monomial: BTreeMap<&MultiIndex, Vec<(usize, &Rational)>> = BTreeMap::new();
        for (t, p) in entries {
            let j = block
                .source_index(t)
                .expect("nc tensor of matching weight is in the block basis");
            for (m, q) in p.terms() {
                by_monomial.entry(m).or_default().push((j, q));
            }
        }
        let mut images: Vec<Vec<(MultiIndex, Rational)>> = vec![Vec::new(); block.target.len()];
        let mut acc = vec![BigInt::zero(); block.target.len()];
        for (m, column) in by_monomial {
            let l = column
                .iter()
                .fold(BigInt::one(), |l, (_, q)| l.lcm(q.denom()));
            acc.iter_mut().for_each(Zero::set_zero);
            for (j, q) in column {
                let scaled = q.numer() * (&l / q.denom());
                for (i, v) in &block.columns[j] {
                    acc[*i] += v * &scaled;
                }
            }
            let den = &l * &block.denom;
            for (i, a) in acc.iter().enumerate() {
                if !a.is_zero() {
                    images[i].push((m.clone(), Rational::new(a.clone(), den.clone())));
                }
            }
        }
        let mut out = Cochain::zero(op.arity_out(arity_in), dim);
        for (target, terms) in block.target.iter().zip(images) {
            if !terms.is_empty() {
                out.add_term(target.clone(), &Poly::from_terms(dim, terms));
            }
        }
        out
    });
    let mut out = Cochain::zero(op.arity_out(arity_in), dim);
    for part in parts {
        out.absorb(part);
    }
    Ok(out)
}

/// [`apply_blockwise`] on integer numerators over a shared denominator.
pub(crate) fn apply_blockwise_scaled(
    c: &ScaledCochain,
    op: BlockOp,
    limits: &Limits,
) -> Result<Cochain> {
    type Numerators = HashMap<MultiIndex, BigInt>;
    let mut groups: BTreeMap<MultiIndex, Vec<(&Tensor, &Numerators)>> = BTreeMap::new();
    for (t, mons) in &c.terms {
        if mons.values().all(Zero::is_zero) {
            continue;
        }
        if let Some(slot) = t.iter().position(MultiIndex::is_zero) {
            return Err(Error::NotNc {
                slot,
                tensor: tensor_to_string(t),
            });
        }
        check_grade(tensor_grade(t), limits)?;
        groups
            .entry(tensor_weight(t, c.dim))
            .or_default()
            .push((t, mons));
    }
    let groups: Vec<_> = groups.into_iter().collect();
    let arity_out = op.arity_out(c.arity);
    let parts = par::map(&groups, |(w, entries)| {
        let block = weight_block(op, c.arity, w);
        let mut by_monomial: BTreeMap<&MultiIndex, Vec<(usize, &BigInt)>> = BTreeMap::new();
        for (t, mons) in entries {
            let j = block
                .source_index(t)
                .expect("nc tensor of matching weight is in the block basis");
            for (m, v) in mons.iter() {
                if !v.is_zero() {
                    by_monomial.entry(m).or_default().push((j, v));
                }
            }
        }
        let den = &c.den * &block.denom;
        let mut images: Vec<Vec<(MultiIndex, Rational)>> = vec![Vec::new(); block.target.len()];
        let mut acc = vec![BigInt::zero(); block.target.len()];
        for (m, column) in by_monomial {
            acc.iter_mut().for_each(Zero::set_zero);
            for (j, v) in column {
                for (i, x) in &block.columns[j] {
                    acc[*i] += x * v;
                }
            }
            for (i, a) in acc.iter_mut().enumerate() {
                if !a.is_zero() {
                    images[i].push((m.clone(), Rational::new(std::mem::take(a), den.clone())));
                }
            }
        }
        let terms = block
            .target
            .iter()
            .zip(images)
            .filter(|(_, terms)| !terms.is_empty())
            .map(|(t, terms)| (t.clone(), Poly::from_terms(c.dim, terms)));
        Cochain::from_terms(arity_out, c.dim, terms)
    });
    let mut out = Cochain::zero(arity_out, c.dim);
    for part in parts {
        out.absorb(part);
    }
    Ok(out)
}
