//! Exact, order-by-order construction of star products on polynomial
//! algebras.
//!
//! A star product `f ∗ g = fg + Σ tᵏ Πₖ(f,g)` is assembled as
//! `Π₀ + ⟨e^π⟩`, where `⟨…⟩` are brackets built from a generalized inverse
//! `δ⁺` of the Hochschild coboundary and `π` is a series of skew
//! biderivations. Everything is computed in exact rational arithmetic on
//! polynomial coefficients, so every identity check is an exact zero test.
//!
//! Module map:
//! - [`exactmath`]: rationals, multi-indices, sparse polynomials, matrices
//! - [`cochain`]: multidifferential cochains, series, bivectors, JSON
//! - [`hochschild`]: `δ`, `δᵀ` and cached graded blocks
//! - [`pinv`]: `δ⁺`, `P = δδ⁺`, regularized cross-checks
//! - [`gerstenhaber`]: composition and the bracket of 2-cochains
//! - [`brackets`]: `⟨Φ₁,…,Φ_m⟩`, descendants, `⟨e^Υ⟩`
//! - [`starprod`]: assembly, residuals, gauge maps, the `π_k` solver

pub mod brackets;
pub mod cochain;
pub mod corpus;
pub mod error;
pub mod exactmath;
pub mod gerstenhaber;
pub mod hochschild;
pub mod par;
pub mod pinv;
pub mod sample;
pub mod starprod;

pub use error::{Error, Result};

/// Hard caps on the size of graded blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest total derivative order `Σ|aᵢ|` any blockwise operator may touch.
    pub max_grade: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_grade: 8 }
    }
}
