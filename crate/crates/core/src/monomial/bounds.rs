use std::collections::BTreeSet;

use serde::Serialize;

use super::{GoodModel, ModelError, MonomialFunction};
use crate::elementary::{ElementaryModule, FormalModule, RegularPart};
use crate::exact_algebra::{CycloRat, MultiIndex, Rat};

/// `S = Σ r_i D_i`, the divisor of highest generic slopes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericSlopeDivisor {
    pub r: Vec<Rat>,
}

impl GenericSlopeDivisor {
    pub fn degree(&self) -> Rat {
        self.r.iter().cloned().sum()
    }
}

/// Componentwise maximum of the poles.
pub fn highest_generic_slopes(m: &GoodModel) -> GenericSlopeDivisor {
    let mut r = vec![0u32; m.dim()];
    for f in m.factors() {
        for (ri, &b) in r.iter_mut().zip(f.pole.entries()) {
            *ri = (*ri).max(b);
        }
    }
    GenericSlopeDivisor {
        r: r.into_iter().map(Rat::from).collect(),
    }
}

/// `r_1 + ··· + r_n`: every nearby slope of `m` is at most this.
pub fn nearby_slope_bound(m: &GoodModel) -> Rat {
    highest_generic_slopes(m).degree()
}

/// The least `r` with `r_i ≤ r·a_i` on `supp a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub value: Rat,
    /// `|Z| ⊆ D`, so that the vanishing criterion actually applies.
    pub applicable: bool,
}

pub fn vanishing_threshold(m: &GoodModel, f: &MonomialFunction) -> Result<Threshold, ModelError> {
    check_dim(m, f)?;
    let r = highest_generic_slopes(m).r;
    let a = f.exponent();
    let supp = a.support();
    let value = supp
        .iter()
        .map(|&i| &r[i] / Rat::from(a.get(i)))
        .max()
        .ok_or(ModelError::EmptySupport)?;
    let locus = m.pole_locus();
    Ok(Threshold {
        value,
        applicable: supp.is_subset(&locus),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Lemma {
    /// `ψ_{x^a}(E^{g/x^b + h/x^a} ⊗ R) = 0` when `b_i < a_i` on `supp a ≠ ∅`.
    ExtraPole,
    /// `ψ_{x^α}(E^{1/x^a} ⊗ R) = 0` when `∅ ≠ supp α ⊆ supp a`.
    SupportInPole,
}

impl Lemma {
    pub fn label(self) -> &'static str {
        match self {
            Lemma::ExtraPole => "extra-pole",
            Lemma::SupportInPole => "support-in-pole",
        }
    }
}

/// Never claims nonvanishing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Vanishes(Lemma),
    Unknown,
}

/// Verdict for `ψ_f(E^{1/x^b + [1/x^{extra}]} ⊗ R)` with `f = x^a`.
///
/// With an extra pole equal to `a` the first lemma is tried; without one
/// the second.
pub fn lemma_vanishing(
    pole: &MultiIndex,
    extra_pole: Option<&MultiIndex>,
    f: &MonomialFunction,
) -> Verdict {
    let a = f.exponent();
    if pole.dim() != a.dim() {
        return Verdict::Unknown;
    }
    let supp_a = a.support();
    match extra_pole {
        Some(extra) => {
            let hyp =
                extra == a && !supp_a.is_empty() && supp_a.iter().all(|&i| pole.get(i) < a.get(i));
            if hyp {
                Verdict::Vanishes(Lemma::ExtraPole)
            } else {
                Verdict::Unknown
            }
        }
        None => {
            if !supp_a.is_empty() && supp_a.is_subset(&pole.support()) {
                Verdict::Vanishes(Lemma::SupportInPole)
            } else {
                Verdict::Unknown
            }
        }
    }
}

/// `⟨a, c⟩`: the composite `f ∘ γ` along `x_i = t^{c_i}` is `t^k`.
pub fn curve_exponent(f: &MonomialFunction, c: &MultiIndex) -> Result<u32, ModelError> {
    if c.dim() != f.dim() {
        return Err(ModelError::MonomialDimension {
            got: c.dim(),
            dim: f.dim(),
        });
    }
    check_curve(c)?;
    Ok(f.exponent().dot(c) as u32)
}

/// Restriction of `m` to the curve `x_i = t^{c_i}`: each factor becomes
/// `El(1, t^{-⟨b,c⟩}, R)` with `R` of the same rank and exponent `⟨twist, c⟩`.
pub fn curve_restriction(m: &GoodModel, c: &MultiIndex) -> Result<FormalModule, ModelError> {
    if c.dim() != m.dim() {
        return Err(ModelError::MonomialDimension {
            got: c.dim(),
            dim: m.dim(),
        });
    }
    check_curve(c)?;
    let factors = m.factors().iter().map(|f| {
        let pole = f.pole.dot(c) as i64;
        let exp: Rat = f
            .twist
            .iter()
            .zip(c.entries())
            .map(|(t, &ci)| t * Rat::from(ci))
            .sum();
        let reg = RegularPart::new(std::iter::repeat_n(exp, f.rank as usize));
        if pole == 0 {
            ElementaryModule::regular(reg)
        } else {
            ElementaryModule::from_terms(1, [(-pole, CycloRat::one())], reg).expect("ram 1")
        }
    });
    Ok(FormalModule::from_factors(factors))
}

/// Submodel of the factors with `supp b ⊆ supp a`, the domain on which the
/// mediant inequality `⟨b,c⟩/⟨a,c⟩ ≤ max_{supp a} b_i/a_i` holds.
pub fn mediant_domain(m: &GoodModel, f: &MonomialFunction) -> GoodModel {
    let supp: BTreeSet<usize> = f.exponent().support();
    let factors = m
        .factors()
        .iter()
        .filter(|fac| fac.pole.support().is_subset(&supp))
        .cloned()
        .collect();
    GoodModel::new(m.dim(), factors).expect("subset of a valid model")
}

fn check_dim(m: &GoodModel, f: &MonomialFunction) -> Result<(), ModelError> {
    if m.dim() != f.dim() {
        return Err(ModelError::MonomialDimension {
            got: f.dim(),
            dim: m.dim(),
        });
    }
    Ok(())
}

fn check_curve(c: &MultiIndex) -> Result<(), ModelError> {
    if c.entries().contains(&0) {
        return Err(ModelError::NonPositiveCurve(c.clone()));
    }
    Ok(())
}
