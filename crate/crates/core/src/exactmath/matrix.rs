use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// The minimum-norm solution `M⁺b`.
    Solved(Vec<Rational>),
    /// `b − MM⁺b`, the part of `b` outside the column space.
    Infeasible { residual: Vec<Rational> },
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out[(i, k)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = a[(r, c)].recip();
            for j in c..a.cols {
                let v = &a[(r, j)] * &inv;
                a[(r, j)] = v;
            }
            for i in 0..a.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..a.cols {
                    if a[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &a[(r, j)] * &f;
                    a[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let (r, d) = self.scaled_inverse()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if !r[i][j].is_zero() {
                    inv[(i, j)] = Rational::new(r[i][j].clone(), d.clone());
                }
            }
        }
        Some(inv)
    }

    /// `(R, d)` with integer `R` and `A⁻¹ = R / d`.
    ///
    /// Rows are scaled to integers and eliminated fraction-free, so no
    /// intermediate rational is ever normalized.
    fn scaled_inverse(&self) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        // row i scaled by l_i: (LA)⁻¹ = A⁻¹L⁻¹, so A⁻¹ = (LA)⁻¹L
        let mut scales = Vec::with_capacity(n);
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let mut ints: Vec<BigInt> = row.iter().map(|v| v.numer() * (&l / v.denom())).collect();
            ints.extend((0..n).map(|j| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            a.push(ints);
            scales.push(l);
        }
        let d = bareiss_gauss_jordan(&mut a, n)?;
        let r = a
            .into_iter()
            .map(|row| row[n..].iter().zip(&scales).map(|(v, l)| v * l).collect())
            .collect();
        Some((r, d))
    }

    /// Basis of `{x : Ax = 0}`, one column per free variable, integer
    /// entries.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -red[(r, free)].clone();
            }
            let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let l = Rational::from_integer(l);
            basis.push(v.into_iter().map(|x| x * &l).collect());
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Fraction-free Gauss–Jordan on the first `n` columns of an integer
/// matrix with at least `n` rows. On success the left block is `d·I` and the
/// right block holds `d` times the solution; returns `d`, or `None` when the
/// left block is singular.
fn bareiss_gauss_jordan(a: &mut [Vec<BigInt>], n: usize) -> Option<BigInt> {
    let width = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(k, p);
        let pivot_row = a[k].clone();
        let pivot = &pivot_row[k];
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let f = std::mem::take(&mut row[k]);
            for j in 0..width {
                if j == k {
                    continue;
                }
                if f.is_zero() {
                    if !row[j].is_zero() {
                        row[j] = &row[j] * pivot / &prev;
                    }
                } else {
                    row[j] = (&row[j] * pivot - &f * &pivot_row[j]) / &prev;
                }
            }
        }
        prev = pivot.clone();
    }
    Some(prev)
}

/// Exact Moore–Penrose pseudoinverse.
///
/// For `M` with at least as many rows as columns, `M⁺ = (MᵀM + NNᵀ)⁻¹Mᵀ`
/// where the columns of `N` span the kernel of `M`: the added term makes
/// the Gram matrix invertible without touching its action on the row space
/// of `M`. Wide matrices go through `(Mᵀ)⁺ = (M⁺)ᵀ`.
pub fn mp_pseudoinverse(m: &RationalMatrix) -> RationalMatrix {
    if m.rows() < m.cols() {
        return mp_pseudoinverse(&m.transpose()).transpose();
    }
    let mt = m.transpose();
    let mut h = &mt * m;
    let kernel = h.null_space();
    if kernel.len() == m.cols() {
        return RationalMatrix::zeros(m.cols(), m.rows());
    }
    for v in &kernel {
        for (i, vi) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                h[(i, j)] += vi * vj;
            }
        }
    }
    let (r, d) = h
        .scaled_inverse()
        .expect("Gram matrix plus kernel projector is invertible");

    // Mᵀ = Z / c with integer Z, so M⁺ = R Z / (d c) in integer arithmetic
    let c = mt
        .data
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut z: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); mt.rows];
    for k in 0..mt.rows {
        for (j, v) in mt.row(k).iter().enumerate() {
            if !v.is_zero() {
                z[k].push((j, v.numer() * (&c / v.denom())));
            }
        }
    }
    let den = &d * &c;
    let mut out = RationalMatrix::zeros(mt.rows, mt.cols);
    let mut acc = vec![BigInt::zero(); mt.cols];
    for (i, r_row) in r.iter().enumerate() {
        acc.iter_mut().for_each(|a| a.set_zero());
        for (k, rik) in r_row.iter().enumerate() {
            if rik.is_zero() {
                continue;
            }
            for (j, zkj) in &z[k] {
                acc[*j] += rik * zkj;
            }
        }
        for (j, a) in acc.iter().enumerate() {
            if !a.is_zero() {
                out[(i, j)] = Rational::new(a.clone(), den.clone());
            }
        }
    }
    out
}

/// Minimum-norm exact solution of `Mx = b`, or the residual when `b` is not
/// in the column space.
pub fn solve_linear(m: &RationalMatrix, b: &[Rational]) -> LinearSolution {
    assert_eq!(m.rows(), b.len(), "right-hand side length");
    let pinv = mp_pseudoinverse(m);
    let x = pinv.mul_vec(b);
    let mx = m.mul_vec(&x);
    let residual: Vec<Rational> = b.iter().zip(&mx).map(|(bi, mi)| bi - mi).collect();
    if residual.iter().all(Zero::is_zero) {
        LinearSolution::Solved(x)
    } else {
        LinearSolution::Infeasible { residual }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn pinv_scalar() {
        let m = RationalMatrix::from_i64(&[&[2]]);
        assert_eq!(
            mp_pseudoinverse(&m),
            RationalMatrix::from_rows(vec![vec![q(1, 2)]])
        );
    }

    #[test]
    fn pinv_row_vector() {
        let m = RationalMatrix::from_i64(&[&[-1, 1]]);
        // full row rank: Aᵀ(AAᵀ)⁻¹ = [-1, 1]ᵀ / 2
        let expected = RationalMatrix::from_rows(vec![vec![q(-1, 2)], vec![q(1, 2)]]);
        assert_eq!(mp_pseudoinverse(&m), expected);
    }

    #[test]
    fn pinv_zero() {
        let m = RationalMatrix::zeros(2, 3);
        assert_eq!(mp_pseudoinverse(&m), RationalMatrix::zeros(3, 2));
    }

    #[test]
    fn solve_examples() {
        let m = RationalMatrix::from_i64(&[&[1, -1], &[-1, 1]]);
        assert_eq!(
            solve_linear(&m, &[q(2, 1), q(-2, 1)]),
            LinearSolution::Solved(vec![q(1, 1), q(-1, 1)])
        );
        let m = RationalMatrix::from_i64(&[&[1, 0]]);
        assert_eq!(
            solve_linear(&m, &[q(0, 1)]),
            LinearSolution::Solved(vec![q(0, 1), q(0, 1)])
        );
        let m = RationalMatrix::from_i64(&[&[1], &[1]]);
        assert_eq!(
            solve_linear(&m, &[q(1, 1), q(2, 1)]),
            LinearSolution::Infeasible {
                residual: vec![q(-1, 2), q(1, 2)]
            }
        );
    }

    #[test]
    fn null_space_spans_kernel() {
        let m = RationalMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
        assert!(RationalMatrix::identity(3).null_space().is_empty());
    }

    #[test]
    fn pinv_rank_deficient_square() {
        // [[1,1],[1,1]]⁺ = [[1,1],[1,1]] / 4
        let m = RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let expected =
            RationalMatrix::from_rows(vec![vec![q(1, 4), q(1, 4)], vec![q(1, 4), q(1, 4)]]);
        assert_eq!(mp_pseudoinverse(&m), expected);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RationalMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, RationalMatrix::identity(2));
        assert!(RationalMatrix::from_i64(&[&[1, 2], &[2, 4]])
            .inverse()
            .is_none());
        let m = RationalMatrix::from_rows(vec![vec![q(1, 2), q(2, 3)], vec![q(-3, 5), q(0, 1)]]);
        assert_eq!(&m * &m.inverse().unwrap(), RationalMatrix::identity(2));
    }
}
