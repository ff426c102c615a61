//! Nearby cycles on the one-variable calculus.
//!
//! `ψ_{x^k}` of a formal module only sees its slope-zero part, which
//! contributes `k · rank`. A rational `s ≥ 0` is a nearby slope of `M` along
//! `x^p` when some twist `N` of slope `s` makes `ψ_{x^p}(M ⊗ ρ_p^+ N)` nonzero;
//! for `s > 0` this happens exactly when `p·s` is a slope of `M`, witnessed by
//! `N = El(p·p', −φ)` built from a factor `El(p', φ, R)` of slope `p·s`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::module::{ElementaryModule, FormalModule};
use super::regular::RegularPart;
use super::CalcError;
use crate::exact_algebra::{CycloRat, Rat};

/// `dim ψ_{x^k}(M) = k · (rank of the slope-zero part of M)`.
///
/// Reading of the ψ-rank: the degree of the covering times the regular rank.
pub fn psi_dim(m: &FormalModule, k: u32) -> u64 {
    assert!(k >= 1, "ψ along x^0 is undefined");
    k as u64 * m.regular_rank()
}

/// `dim ψ_{x^p}(M ⊗ ρ_p^+ N)`: the pullback is computed in full, the tensor
/// product only as far as its slope-zero part.
pub fn twisted_psi_dim(m: &FormalModule, twist: &FormalModule, p: u32) -> u64 {
    assert!(p >= 1, "ψ along x^0 is undefined");
    p as u64 * m.tensor_regular_rank(&twist.pullback(p))
}

/// The twist `N` of slope `r/p` that makes `ψ_{x^p}(M ⊗ ρ_p^+ N)` nonzero:
/// for a factor `El(p', φ, R)` of slope `r`, `N = ρ_{p+} El(p', −φ) = El(p·p', −φ)`.
pub fn witness_twist(m: &FormalModule, r: &Rat, p: u32) -> Result<FormalModule, CalcError> {
    assert!(p >= 1, "ramification of the function must be at least 1");
    if !r.is_positive() {
        return Err(CalcError::NonPositiveSlope(r.clone()));
    }
    let factor = m
        .factors()
        .iter()
        .find(|el| &el.slope() == r)
        .ok_or_else(|| CalcError::NoFactorOfSlope(r.clone()))?;
    let ram = p * factor.ram();
    let terms = factor.phi().terms().map(|(k, c)| (k, -c));
    let n = ElementaryModule::from_terms(ram, terms, RegularPart::trivial(1))?;
    Ok(FormalModule::elementary(n))
}

/// A verified nearby slope together with its witness twist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemberWitness {
    pub slope: Rat,
    #[serde(serialize_with = "serialize_display")]
    pub twist: FormalModule,
    pub psi_dim: u64,
}

/// Bounds of the elementary twists `El(q, c·u^{-m})` tried when certifying
/// that a slope is *not* a nearby slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExhaustionBounds {
    pub max_ram: u32,
    pub max_pole: u32,
}

impl Default for ExhaustionBounds {
    fn default() -> Self {
        ExhaustionBounds {
            max_ram: 12,
            max_pole: 24,
        }
    }
}

/// A slope shown not to be a nearby slope by exhausting bounded twists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub slope: Rat,
    pub twists_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearbyCertificate {
    pub p: u32,
    pub members: Vec<MemberWitness>,
    pub bounds: ExhaustionBounds,
    pub excluded: Vec<Exclusion>,
}

impl NearbyCertificate {
    pub fn slopes(&self) -> BTreeSet<Rat> {
        self.members.iter().map(|w| w.slope.clone()).collect()
    }
}

fn serialize_display<S: serde::Serializer>(m: &FormalModule, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&m.to_string())
}

/// Nearby slopes of `M` along `x^p`, each verified by its witness twist.
pub fn nearby_slopes(m: &FormalModule, p: u32) -> Result<BTreeSet<Rat>, CalcError> {
    Ok(nearby_members(m, p)?.into_iter().map(|w| w.slope).collect())
}

/// Members with their witnesses, in increasing slope order.
pub fn nearby_members(m: &FormalModule, p: u32) -> Result<Vec<MemberWitness>, CalcError> {
    assert!(p >= 1, "ramification of the function must be at least 1");
    let mut out = Vec::new();
    if m.regular_rank() > 0 {
        let twist = FormalModule::regular(RegularPart::trivial(1));
        let dim = twisted_psi_dim(m, &twist, p);
        if dim == 0 {
            return Err(CalcError::WitnessFailed {
                slope: Rat::zero(),
                p,
            });
        }
        out.push(MemberWitness {
            slope: Rat::zero(),
            twist,
            psi_dim: dim,
        });
    }
    let positive: BTreeSet<Rat> = m
        .factors()
        .iter()
        .map(ElementaryModule::slope)
        .filter(Rat::is_positive)
        .collect();
    let pp = Rat::from(p);
    for r in positive {
        let twist = witness_twist(m, &r, p)?;
        let dim = twisted_psi_dim(m, &twist, p);
        let slope = &r / &pp;
        if dim == 0 {
            return Err(CalcError::WitnessFailed { slope, p });
        }
        out.push(MemberWitness {
            slope,
            twist,
            psi_dim: dim,
        });
    }
    Ok(out)
}

/// Leading coefficients tried in the exhaustion family: `±1` and the negated
/// leading coefficients of every irregular factor of `M` (the only ones that
/// could cancel a pole).
pub fn exhaustion_coefficients(m: &FormalModule) -> Vec<CycloRat> {
    let mut set = BTreeSet::from([CycloRat::one(), CycloRat::from_integer(-1)]);
    for el in m.factors() {
        if let Some((_, c)) = el.phi().leading() {
            set.insert(-c);
        }
    }
    set.into_iter().collect()
}

/// All slopes `m/q` (`1 ≤ q ≤ max_ram`, `1 ≤ m ≤ max_pole`), each with the
/// `(q, m)` pairs realizing it.
pub fn candidate_slopes(bounds: ExhaustionBounds) -> BTreeMap<Rat, Vec<(u32, u32)>> {
    let mut out: BTreeMap<Rat, Vec<(u32, u32)>> = BTreeMap::new();
    for q in 1..=bounds.max_ram {
        for pole in 1..=bounds.max_pole {
            out.entry(Rat::new(pole as i64, q as i64))
                .or_default()
                .push((q, pole));
        }
    }
    out
}

/// Checks that no bounded elementary twist of slope `s` has a nonzero
/// twisted ψ. Returns the number of twists tried.
pub fn exclude_slope(
    m: &FormalModule,
    s: &Rat,
    p: u32,
    pairs: &[(u32, u32)],
    coefficients: &[CycloRat],
) -> Result<usize, CalcError> {
    let mut checked = 0;
    if s.is_zero() {
        let twist = FormalModule::regular(RegularPart::trivial(1));
        if twisted_psi_dim(m, &twist, p) != 0 {
            return Err(CalcError::ExhaustionFailed {
                slope: s.clone(),
                twist: twist.to_string(),
            });
        }
        return Ok(1);
    }
    for &(q, pole) in pairs {
        for c in coefficients {
            let el = ElementaryModule::from_terms(
                q,
                [(-(pole as i64), c.clone())],
                RegularPart::trivial(1),
            )?;
            let twist = FormalModule::elementary(el);
            checked += 1;
            if twisted_psi_dim(m, &twist, p) != 0 {
                return Err(CalcError::ExhaustionFailed {
                    slope: s.clone(),
                    twist: twist.to_string(),
                });
            }
        }
    }
    Ok(checked)
}

/// Nearby slopes with witnesses for every member and bounded exhaustion for
/// every non-member `m/q` within `bounds` (plus `0`).
pub fn certify_nearby_slopes(
    m: &FormalModule,
    p: u32,
    bounds: ExhaustionBounds,
) -> Result<NearbyCertificate, CalcError> {
    let members = nearby_members(m, p)?;
    let claimed: BTreeSet<Rat> = members.iter().map(|w| w.slope.clone()).collect();
    let coefficients = exhaustion_coefficients(m);
    let mut excluded = Vec::new();
    if !claimed.contains(&Rat::zero()) {
        let n = exclude_slope(m, &Rat::zero(), p, &[], &coefficients)?;
        excluded.push(Exclusion {
            slope: Rat::zero(),
            twists_checked: n,
        });
    }
    for (s, pairs) in candidate_slopes(bounds) {
        if claimed.contains(&s) {
            continue;
        }
        let n = exclude_slope(m, &s, p, &pairs, &coefficients)?;
        excluded.push(Exclusion {
            slope: s,
            twists_checked: n,
        });
    }
    Ok(NearbyCertificate {
        p,
        members,
        bounds,
        excluded,
    })
}
