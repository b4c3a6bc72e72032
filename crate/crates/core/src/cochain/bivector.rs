use super::Cochain;
use crate::error::{Error, Result};
use crate::exactmath::{MultiIndex, Poly, Rational};

/// Skew matrix `α^{ij}` of polynomial entries, read as the bivector
/// `Σ α^{ij} ∂ᵢ ⊗ ∂ⱼ`. Indices are 0-based.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bivector {
    dim: usize,
    entries: Vec<Vec<Poly>>,
}

impl Bivector {
    pub fn zero(dim: usize) -> Self {
        Bivector {
            dim,
            entries: vec![vec![Poly::zero(dim); dim]; dim],
        }
    }

    /// Build from the strictly upper triangle; the lower triangle is the
    /// skew completion.
    pub fn from_upper(
        dim: usize,
        upper: impl IntoIterator<Item = ((usize, usize), Poly)>,
    ) -> Result<Self> {
        let mut b = Self::zero(dim);
        for ((i, j), p) in upper {
            if i >= dim || j >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: i.max(j) + 1,
                });
            }
            if i == j {
                if p.is_zero() {
                    continue;
                }
                return Err(Error::NotSkew { i: i + 1, j: j + 1 });
            }
            let (i, j, p) = if i < j { (i, j, p) } else { (j, i, -&p) };
            if !b.entries[i][j].is_zero() && b.entries[i][j] != p {
                return Err(Error::NotSkew { i: i + 1, j: j + 1 });
            }
            b.entries[j][i] = -&p;
            b.entries[i][j] = p;
        }
        Ok(b)
    }

    /// Build from a full matrix, checking skew-symmetry.
    pub fn from_matrix(entries: Vec<Vec<Poly>>) -> Result<Self> {
        let dim = entries.len();
        for i in 0..dim {
            if entries[i].len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: entries[i].len(),
                });
            }
            for j in 0..=i {
                if entries[i][j] != -&entries[j][i] {
                    return Err(Error::NotSkew { i: j + 1, j: i + 1 });
                }
            }
        }
        Ok(Bivector { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Bivector {
        Bivector {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|p| p.scale(c)).collect())
                .collect(),
        }
    }

    /// Largest entry degree (0 for the zero bivector).
    pub fn degree(&self) -> u32 {
        self.entries
            .iter()
            .flatten()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Upper-triangle entries `(i, j, α^{ij})`, `i < j`, skipping zeros.
    pub fn upper(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        (0..self.dim).flat_map(move |i| {
            (i + 1..self.dim).filter_map(move |j| {
                let p = &self.entries[i][j];
                (!p.is_zero()).then_some((i, j, p))
            })
        })
    }

    /// `{f, g} = Σ α^{ij} ∂ᵢf ∂ⱼg`.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        bivector_to_cochain(self).apply(&[f.clone(), g.clone()])
    }

    pub fn to_cochain(&self) -> Cochain {
        bivector_to_cochain(self)
    }
}

/// The 2-cochain `A = Σ_{i,j} α^{ij} ∂ᵢ ⊗ ∂ⱼ` over the full skew matrix, so
/// `A(f,g) − A(g,f) = 2A(f,g)`.
pub fn bivector_to_cochain(alpha: &Bivector) -> Cochain {
    let n = alpha.dim;
    let mut c = Cochain::zero(2, n);
    for i in 0..n {
        for j in 0..n {
            let p = &alpha.entries[i][j];
            if !p.is_zero() {
                c.add_term(vec![MultiIndex::unit(n, i), MultiIndex::unit(n, j)], p);
            }
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn constant_bivector_cochain() {
        let a = Bivector::from_upper(2, [((0, 1), p("1", 2))]).unwrap();
        let c = bivector_to_cochain(&a);
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(&[[1, 0].into(), [0, 1].into()]), p("1", 2));
        assert_eq!(c.coeff(&[[0, 1].into(), [1, 0].into()]), p("-1", 2));
    }

    #[test]
    fn zero_bivector_cochain() {
        assert!(bivector_to_cochain(&Bivector::zero(3)).is_zero());
    }

    #[test]
    fn so3_slice() {
        let a = Bivector::from_upper(3, [((0, 1), p("x3", 3))]).unwrap();
        let c = bivector_to_cochain(&a);
        assert_eq!(c.len(), 2);
        assert_eq!(c.coeff(&[[1, 0, 0].into(), [0, 1, 0].into()]), p("x3", 3));
        assert_eq!(c.coeff(&[[0, 1, 0].into(), [1, 0, 0].into()]), p("-x3", 3));
    }

    #[test]
    fn antisymmetrized_value_doubles() {
        let a = Bivector::from_upper(2, [((0, 1), p("x1", 2))]).unwrap();
        let c = bivector_to_cochain(&a);
        let f = p("x1^2*x2", 2);
        let g = p("x2^2 + x1", 2);
        let fg = c.apply(&[f.clone(), g.clone()]).unwrap();
        let gf = c.apply(&[g, f]).unwrap();
        assert_eq!(&fg - &gf, fg.scale(&rat(2)));
    }

    #[test]
    fn skew_validation() {
        assert!(matches!(
            Bivector::from_upper(2, [((0, 1), p("1", 2)), ((1, 0), p("1", 2))]),
            Err(Error::NotSkew { i: 1, j: 2 })
        ));
        assert!(Bivector::from_upper(2, [((0, 1), p("1", 2)), ((1, 0), p("-1", 2))]).is_ok());
        assert!(Bivector::from_upper(2, [((0, 0), p("1", 2))]).is_err());
        let bad = vec![vec![p("0", 2), p("1", 2)], vec![p("1", 2), p("0", 2)]];
        assert!(Bivector::from_matrix(bad).is_err());
    }
}
