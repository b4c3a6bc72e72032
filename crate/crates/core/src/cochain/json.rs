use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Bivector, Cochain};
use crate::error::{Error, Result};
use crate::exactmath::{MultiIndex, Poly};

/// One entry of the cochain dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainTermJson {
    pub indices: Vec<Vec<u16>>,
    pub coeff: String,
}

/// `{"n": 2, "alpha": {"1,2": "<poly>"}}`, upper triangle only, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivectorJson {
    pub n: usize,
    pub alpha: BTreeMap<String, String>,
}

impl Cochain {
    pub fn to_json_terms(&self) -> Vec<CochainTermJson> {
        self.terms()
            .map(|(t, p)| CochainTermJson {
                indices: t.iter().map(|a| a.exponents().to_vec()).collect(),
                coeff: p.to_string(),
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_terms()).expect("plain data serializes")
    }

    /// Rebuild from the term list. Arity and dimension come from the first
    /// entry, falling back to `shape` for an empty list.
    pub fn from_json_terms(
        terms: &[CochainTermJson],
        shape: Option<(usize, usize)>,
    ) -> Result<Cochain> {
        let (arity, dim) = match (terms.first(), shape) {
            (Some(t), _) => (t.indices.len(), t.indices.first().map_or(0, Vec::len)),
            (None, Some(s)) => s,
            (None, None) => {
                return Err(Error::Parse(
                    "empty cochain list carries no arity or dimension".into(),
                ))
            }
        };
        if let Some((a, n)) = shape {
            if (a, n) != (arity, dim) {
                return Err(Error::ArityMismatch {
                    expected: a,
                    found: arity,
                });
            }
        }
        let mut c = Cochain::zero(arity, dim);
        for term in terms {
            if term.indices.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: term.indices.len(),
                });
            }
            if let Some(bad) = term.indices.iter().find(|ix| ix.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: bad.len(),
                });
            }
            let t: Vec<MultiIndex> = term
                .indices
                .iter()
                .map(|ix| MultiIndex::from(ix.clone()))
                .collect();
            c.add_term(t, &Poly::parse(&term.coeff, dim)?);
        }
        Ok(c)
    }

    pub fn from_json(v: &serde_json::Value, shape: Option<(usize, usize)>) -> Result<Cochain> {
        let terms: Vec<CochainTermJson> = serde_json::from_value(v.clone())?;
        Self::from_json_terms(&terms, shape)
    }
}

impl Bivector {
    pub fn to_json(&self) -> BivectorJson {
        let alpha = self
            .upper()
            .map(|(i, j, p)| (format!("{},{}", i + 1, j + 1), p.to_string()))
            .collect();
        BivectorJson {
            n: self.dim(),
            alpha,
        }
    }

    pub fn from_json(j: &BivectorJson) -> Result<Bivector> {
        let mut upper = Vec::with_capacity(j.alpha.len());
        for (key, val) in &j.alpha {
            let (i, jj) = key
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bivector key {key:?} is not \"i,j\"")))?;
            let parse = |s: &str| -> Result<usize> {
                let v: usize = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bivector key {key:?} is not \"i,j\"")))?;
                if v == 0 || v > j.n {
                    return Err(Error::Parse(format!(
                        "bivector key {key:?} outside 1..{}",
                        j.n
                    )));
                }
                Ok(v - 1)
            };
            upper.push(((parse(i)?, parse(jj)?), Poly::parse(val, j.n)?));
        }
        Bivector::from_upper(j.n, upper)
    }
}
