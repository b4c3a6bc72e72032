use super::Cochain;

/// Truncated series `Σ_{k=1}^{K} t^k Φ_k` of cochains of one arity.
///
/// The `t⁰` term is never stored here.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CochainSeries {
    arity: usize,
    dim: usize,
    coeffs: Vec<Cochain>,
}

impl CochainSeries {
    pub fn zero(arity: usize, dim: usize, order: usize) -> Self {
        CochainSeries {
            arity,
            dim,
            coeffs: vec![Cochain::zero(arity, dim); order],
        }
    }

    /// From `[Φ₁, Φ₂, …]`.
    pub fn from_coeffs(arity: usize, dim: usize, coeffs: Vec<Cochain>) -> Self {
        for c in &coeffs {
            assert_eq!(c.arity(), arity, "series coefficient arity");
            assert_eq!(c.dim(), dim, "series coefficient dimension");
        }
        CochainSeries { arity, dim, coeffs }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `t^k`, `1 ≤ k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Cochain {
        assert!(k >= 1, "series coefficients start at t^1");
        self.coeffs
            .get(k - 1)
            .cloned()
            .unwrap_or_else(|| Cochain::zero(self.arity, self.dim))
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&Cochain> {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn set(&mut self, k: usize, c: Cochain) {
        assert!(k >= 1 && k <= self.coeffs.len(), "order out of range");
        assert_eq!(c.arity(), self.arity);
        self.coeffs[k - 1] = c;
    }

    pub fn coeffs(&self) -> &[Cochain] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Cochain::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order, Cochain::zero(self.arity, self.dim));
        CochainSeries {
            coeffs,
            ..self.clone()
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Cochain)> {
        self.coeffs.iter().enumerate().map(|(i, c)| (i + 1, c))
    }
}
