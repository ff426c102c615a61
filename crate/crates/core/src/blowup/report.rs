use serde::Serialize;

use super::state::{BlowupState, ComponentKind};
use crate::exact_algebra::Rat;

/// The three inequalities closing the inductive step for the newest
/// exceptional component, with `A = Σ a_i α_i`, `B = Σ ε_E v_E(Z)`,
/// `R = Σ r_i ε_i`, `C = Σ ε_E v_E(S)`:
///
/// ```text
/// deg S·(A + B) ≥ deg S + deg S·B ≥ R + deg S·B ≥ R + C
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosingCheck {
    pub step: usize,
    /// The four sides of the chain, left to right.
    pub sides: [Rat; 4],
}

impl ClosingCheck {
    pub fn new(step: usize, deg_s: &Rat, a: u64, b: u64, r: &Rat, c: &Rat) -> Self {
        let (a, b) = (Rat::from(a), Rat::from(b));
        let ds_b = deg_s * &b;
        ClosingCheck {
            step,
            sides: [deg_s * (&a + &b), deg_s + &ds_b, r + &ds_b, r + c],
        }
    }

    /// Indices `k ∈ {1, 2, 3}` of the failing inequalities `sides[k-1] ≥ sides[k]`.
    pub fn failures(&self) -> Vec<usize> {
        (1..4)
            .filter(|&k| self.sides[k - 1] < self.sides[k])
            .collect()
    }

    pub fn holds(&self) -> bool {
        self.failures().is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub id: String,
    pub kind: String,
    pub ray: Option<Vec<u64>>,
    pub vz: u64,
    pub vs: Rat,
    /// `deg S · v(Z)`.
    pub bound: Rat,
    pub margin: Rat,
    /// Whether the component lies over `|Z|`, so that the inequality is asserted.
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub deg_s: Rat,
    pub rows: Vec<ReportRow>,
    pub closing: Vec<ClosingCheck>,
    pub violations: Vec<String>,
}

impl InequalityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `v_E(S) ≤ deg S · v_E(Z)` on every component with `v_E(Z) > 0`,
/// and the closing-display chain recorded at every step.
pub fn verify_inequality(state: &BlowupState) -> InequalityReport {
    let deg_s = state.deg_s().clone();
    let mut violations = Vec::new();
    let rows = state
        .components()
        .iter()
        .map(|c| {
            let bound = &deg_s * Rat::from(c.vz);
            let margin = &bound - &c.vs;
            let checked = c.vz > 0;
            if checked && margin.is_negative() {
                violations.push(format!(
                    "{}: v(S) = {} exceeds deg S · v(Z) = {}",
                    c.id, c.vs, bound
                ));
            }
            let kind = match c.kind {
                ComponentKind::Original { index } => {
                    let z = state.a()[index] > 0;
                    let s = state.r()[index].is_positive();
                    match (z, s) {
                        (true, true) => "Z+S",
                        (true, false) => "Z",
                        (false, true) => "S",
                        (false, false) => "D",
                    }
                }
                ComponentKind::Exceptional { .. } => "exceptional",
            };
            ReportRow {
                id: c.id.clone(),
                kind: kind.to_string(),
                ray: c.ray.clone(),
                vz: c.vz,
                vs: c.vs.clone(),
                bound,
                margin,
                checked,
            }
        })
        .collect();
    for check in state.closing_checks() {
        for k in check.failures() {
            violations.push(format!(
                "step {}: closing inequality {k} fails ({} < {})",
                check.step,
                check.sides[k - 1],
                check.sides[k]
            ));
        }
    }
    InequalityReport {
        deg_s,
        rows,
        closing: state.closing_checks().to_vec(),
        violations,
    }
}
