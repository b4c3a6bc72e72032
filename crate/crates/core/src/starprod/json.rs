use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BiderivationSeries, StarProduct};
use crate::cochain::{Bivector, BivectorJson, Cochain, CochainSeries, CochainTermJson};
use crate::error::{Error, Result};

/// `{"n": 3, "pi": [{"1,2": "..."}, …]}`, entry `k − 1` holding `π_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiderivationJson {
    pub n: usize,
    pub pi: Vec<BTreeMap<String, String>>,
}

/// A truncated star product: `deformation[k − 1]` lists the terms of `Π_k`.
/// The biderivations it was built from are kept when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarJson {
    pub n: usize,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<BiderivationJson>,
    pub deformation: Vec<Vec<CochainTermJson>>,
}

impl BiderivationSeries {
    pub fn to_json(&self) -> BiderivationJson {
        BiderivationJson {
            n: self.dim,
            pi: self.terms.iter().map(|b| b.to_json().alpha).collect(),
        }
    }

    pub fn from_json(j: &BiderivationJson) -> Result<Self> {
        let terms =
            j.pi.iter()
                .map(|alpha| {
                    Bivector::from_json(&BivectorJson {
                        n: j.n,
                        alpha: alpha.clone(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        BiderivationSeries::from_terms(j.n, terms)
    }
}

impl StarProduct {
    pub fn to_json(&self, pi: Option<&BiderivationSeries>) -> StarJson {
        StarJson {
            n: self.dim(),
            order: self.order(),
            pi: pi.map(BiderivationSeries::to_json),
            deformation: self
                .deformation
                .coeffs()
                .iter()
                .map(Cochain::to_json_terms)
                .collect(),
        }
    }

    pub fn from_json(j: &StarJson) -> Result<Self> {
        if j.deformation.len() != j.order {
            return Err(Error::Parse(format!(
                "star product lists {} coefficients for order {}",
                j.deformation.len(),
                j.order
            )));
        }
        let coeffs = j
            .deformation
            .iter()
            .map(|terms| Cochain::from_json_terms(terms, Some((2, j.n))))
            .collect::<Result<Vec<_>>>()?;
        StarProduct::new(CochainSeries::from_coeffs(2, j.n, coeffs))
    }
}
