//! Monomial good formal structures on the complement of coordinate
//! hyperplanes in `ℂ^n`, and the bounds they give on nearby slopes.
//!
//! A factor `E^{1/x^b} ⊗ x^c ⊗ R` is recorded by its pole `b`, the twist
//! exponents `c` and the rank of `R`. Units in the exponential are taken to
//! be `1`; everything computed here depends only on `div φ`.

mod bounds;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exact_algebra::{MultiIndex, Rat};

pub use bounds::{
    curve_exponent, curve_restriction, highest_generic_slopes, lemma_vanishing, mediant_domain,
    nearby_slope_bound, vanishing_threshold, GenericSlopeDivisor, Lemma, Threshold, Verdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("factor {index}: {what} has length {len}, expected {dim}")]
    LengthMismatch {
        index: usize,
        what: &'static str,
        len: usize,
        dim: usize,
    },
    #[error("factor {0}: rank must be at least 1")]
    ZeroRank(usize),
    #[error("monomial has empty support")]
    EmptySupport,
    #[error("monomial has {got} exponents, expected {dim}")]
    MonomialDimension { got: usize, dim: usize },
    #[error("bad monomial `{0}`")]
    BadMonomial(String),
    #[error("curve exponents must all be ≥ 1, got {0}")]
    NonPositiveCurve(MultiIndex),
    #[error("model file: {0}")]
    Format(String),
}

/// One summand `E^{1/x^b} ⊗ x^c ⊗ (regular of rank k)`; `b = 0` is regular.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFactor {
    pub pole: MultiIndex,
    #[serde(default)]
    pub twist: Vec<Rat>,
    pub rank: u32,
}

/// A good formal model: the formal decomposition at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct GoodModel {
    dim: usize,
    factors: Vec<ModelFactor>,
}

#[derive(Deserialize)]
struct RawModel {
    dim: usize,
    factors: Vec<ModelFactor>,
}

impl TryFrom<RawModel> for GoodModel {
    type Error = ModelError;

    fn try_from(raw: RawModel) -> Result<Self, ModelError> {
        GoodModel::new(raw.dim, raw.factors)
    }
}

impl GoodModel {
    /// Validates lengths and ranks; a missing twist defaults to `0`.
    pub fn new(dim: usize, factors: Vec<ModelFactor>) -> Result<Self, ModelError> {
        if dim == 0 {
            return Err(ModelError::ZeroDimension);
        }
        let mut out = Vec::with_capacity(factors.len());
        for (index, mut f) in factors.into_iter().enumerate() {
            if f.pole.dim() != dim {
                return Err(ModelError::LengthMismatch {
                    index,
                    what: "pole",
                    len: f.pole.dim(),
                    dim,
                });
            }
            if f.twist.is_empty() {
                f.twist = vec![Rat::zero(); dim];
            }
            if f.twist.len() != dim {
                return Err(ModelError::LengthMismatch {
                    index,
                    what: "twist",
                    len: f.twist.len(),
                    dim,
                });
            }
            if f.rank == 0 {
                return Err(ModelError::ZeroRank(index));
            }
            out.push(f);
        }
        Ok(GoodModel { dim, factors: out })
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[ModelFactor] {
        &self.factors
    }

    /// Indices `i` with `b_i ≠ 0` for some factor.
    pub fn pole_locus(&self) -> BTreeSet<usize> {
        self.factors.iter().flat_map(|f| f.pole.support()).collect()
    }

    pub fn is_regular(&self) -> bool {
        self.factors.iter().all(|f| f.pole.is_zero())
    }

    pub fn with_factor(&self, factor: ModelFactor) -> Result<Self, ModelError> {
        let mut factors = self.factors.clone();
        factors.push(factor);
        GoodModel::new(self.dim, factors)
    }
}

/// `f = x^a` with `supp a ≠ ∅`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialFunction {
    a: MultiIndex,
}

impl MonomialFunction {
    pub fn new(a: MultiIndex) -> Result<Self, ModelError> {
        if a.is_zero() {
            return Err(ModelError::EmptySupport);
        }
        Ok(MonomialFunction { a })
    }

    /// Parses `x1*x2^3` style products (indices from 1) in dimension `dim`.
    pub fn parse(text: &str, dim: usize) -> Result<Self, ModelError> {
        let bad = || ModelError::BadMonomial(text.to_string());
        let mut a = vec![0u32; dim];
        for atom in text.split('*') {
            let atom = atom.trim();
            let (var, exp) = match atom.split_once('^') {
                Some((v, e)) => (v.trim(), e.trim().parse::<u32>().map_err(|_| bad())?),
                None => (atom, 1),
            };
            let idx: usize = var
                .strip_prefix('x')
                .and_then(|s| s.parse().ok())
                .ok_or_else(bad)?;
            if idx == 0 || idx > dim {
                return Err(bad());
            }
            a[idx - 1] += exp;
        }
        Self::new(MultiIndex::new(a))
    }

    pub fn exponent(&self) -> &MultiIndex {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

impl FromStr for MonomialFunction {
    type Err = ModelError;

    /// Dimension inferred from the largest index that appears.
    fn from_str(s: &str) -> Result<Self, ModelError> {
        let dim = s
            .split('*')
            .filter_map(|atom| {
                let var = atom.split('^').next()?.trim();
                var.strip_prefix('x')?.parse::<usize>().ok()
            })
            .max()
            .ok_or_else(|| ModelError::BadMonomial(s.to_string()))?;
        Self::parse(s, dim)
    }
}

impl fmt::Display for MonomialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.a.entries().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
