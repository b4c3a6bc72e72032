use thiserror::Error;

use crate::cochain::Cochain;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("bivector is not skew at entry ({i},{j})")]
    NotSkew { i: usize, j: usize },

    #[error("bivector fails the Jacobi identity at ({i},{j},{k}): {value}")]
    NotPoisson {
        i: usize,
        j: usize,
        k: usize,
        value: String,
    },

    #[error("cochain does not vanish on constants (slot {slot} of {tensor})")]
    NotNc { slot: usize, tensor: String },

    #[error("grade {grade} exceeds the configured cap {cap}")]
    GradeCap { grade: u32, cap: u32 },

    #[error("input 2-cochain is not a Hochschild cocycle")]
    NotCocycle { coboundary: Box<Cochain> },

    #[error("remainder is not a Hochschild coboundary")]
    NotExact { residual: Box<Cochain> },

    #[error("order-{order} obstruction cannot be cancelled with degree bound {degree_bound}")]
    Infeasible {
        order: usize,
        degree_bound: u32,
        residual: Box<Cochain>,
    },

    #[error("regularized inverse has no finite limit as eps -> 0 at weight {weight}")]
    SingularLimit { weight: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
