//! Bundled Poisson structures used by the tests, benches and CLI examples.

use crate::cochain::{Bivector, BivectorJson};

/// `(name, α.json)` for every bundled structure.
pub const BUNDLED: &[(&str, &str)] = &[
    ("constant_n2", include_str!("../corpus/constant_n2.json")),
    ("linear_x1_n2", include_str!("../corpus/linear_x1_n2.json")),
    ("so3", include_str!("../corpus/so3.json")),
];

pub fn load(json: &str) -> crate::Result<Bivector> {
    let j: BivectorJson = serde_json::from_str(json)?;
    Bivector::from_json(&j)
}

/// `α¹² = 1` on ℝ².
pub fn constant_n2() -> Bivector {
    load(BUNDLED[0].1).expect("bundled corpus parses")
}

/// `α¹² = x¹` on ℝ².
pub fn linear_x1_n2() -> Bivector {
    load(BUNDLED[1].1).expect("bundled corpus parses")
}

/// `α^{ij} = Σₖ ε^{ijk} xₖ` on ℝ³.
pub fn so3() -> Bivector {
    load(BUNDLED[2].1).expect("bundled corpus parses")
}

pub fn all() -> Vec<(&'static str, Bivector)> {
    BUNDLED
        .iter()
        .map(|(name, json)| (*name, load(json).expect("bundled corpus parses")))
        .collect()
}
