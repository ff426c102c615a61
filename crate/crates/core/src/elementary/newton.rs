//! Slopes of a differential operator from its Newton polygon.
//!
//! For `P = Σ a_i(x) ∂^i` the polygon is the convex hull of the quadrants
//! `{(u, v) : u ≤ i, v ≥ val(a_i) − i}`. Its lower boundary over `[0, ord P]`
//! is convex and nondecreasing; an edge of slope `s` and horizontal length
//! `ℓ` contributes slope `s` with multiplicity `ℓ`.

use std::collections::BTreeMap;

use super::CalcError;
use crate::exact_algebra::{Laurent, Rat};

/// `Σ a_i(x) ∂^i` with Laurent polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffOperator {
    coeffs: BTreeMap<u32, Laurent>,
}

impl DiffOperator {
    pub fn new(coeffs: impl IntoIterator<Item = (u32, Laurent)>) -> Self {
        let mut map: BTreeMap<u32, Laurent> = BTreeMap::new();
        for (i, a) in coeffs {
            let sum = match map.get(&i) {
                Some(prev) => prev.add(&a),
                None => a,
            };
            map.insert(i, sum);
        }
        map.retain(|_, a| !a.is_zero());
        DiffOperator { coeffs: map }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Laurent)> {
        self.coeffs.iter().map(|(&i, a)| (i, a))
    }

    /// Composition `self ∘ other` in the Weyl algebra over Laurent polynomials,
    /// using `∂^i b = Σ_t C(i,t) b^{(t)} ∂^{i−t}`.
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = Vec::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let mut deriv = b.clone();
                let mut binom = Rat::one();
                for t in 0..=i {
                    if t > 0 {
                        deriv = deriv.derivative();
                        binom = binom * Rat::new((i - t + 1) as i64, t as i64);
                    }
                    if deriv.is_zero() {
                        break;
                    }
                    let term = a.mul(&deriv).mul(&Laurent::constant(binom.clone()));
                    out.push((i - t + j, term));
                }
            }
        }
        DiffOperator::new(out)
    }
}

/// Slope multiset of the module `D/D·P`, read off the Newton polygon.
pub fn slopes_from_operator(coeffs: &[(u32, Laurent)]) -> Result<BTreeMap<Rat, u64>, CalcError> {
    let op = DiffOperator::new(coeffs.iter().cloned());
    operator_slopes(&op)
}

pub fn operator_slopes(op: &DiffOperator) -> Result<BTreeMap<Rat, u64>, CalcError> {
    let n = op.order().ok_or(CalcError::ZeroOperator)?;
    let heights: BTreeMap<u32, i64> = op
        .coeffs()
        .map(|(i, a)| (i, a.valuation().expect("nonzero coefficient") - i as i64))
        .collect();
    // lower envelope at integer abscissae: g(u) = min_{j ≥ u} h_j
    let mut g = vec![0i64; n as usize + 1];
    let mut running = i64::MAX;
    for u in (0..=n).rev() {
        if let Some(&h) = heights.get(&u) {
            running = running.min(h);
        }
        g[u as usize] = running;
    }
    // lower convex hull, left to right
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for (u, &v) in g.iter().enumerate() {
        let pt = (u as i64, v);
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as i128 * (pt.1 - a.1) as i128
                - (b.1 - a.1) as i128 * (pt.0 - a.0) as i128;
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = BTreeMap::new();
    for w in hull.windows(2) {
        let (du, dv) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        *out.entry(Rat::new(dv, du)).or_insert(0) += du as u64;
    }
    Ok(out)
}
