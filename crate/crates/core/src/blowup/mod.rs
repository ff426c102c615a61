//! Multiplicity bookkeeping along sequences of blow-ups.
//!
//! The ambient space starts as `ℂ^n` with the coordinate hyperplanes
//! `D_1, …, D_n`; `Z = Σ a_i D_i` is the divisor of `f` and `S = Σ r_i D_i`
//! the divisor of highest generic slopes. Each blow-up adds an exceptional
//! component `P` and records `v_P(Z)`, `v_P(S)` through the update rules
//! `p^* D_i = D_i' + α_i P`, `p^* E = E' + ε_E P`.

mod report;
mod script;
mod state;

pub use report::{verify_inequality, ClosingCheck, InequalityReport, ReportRow};
pub use script::{chain_from_script, BlowupScript, ScriptError};
pub use state::{BlowupState, BlowupStep, Component, ComponentKind, Mode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlowupError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("{what} has length {len}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        len: usize,
        expected: usize,
    },
    #[error("slope multiplicities must be nonnegative")]
    NegativeSlope,
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("component `{0}` listed twice in the center")]
    DuplicateComponent(String),
    #[error("condition (i): the center does not lie in the strict transform of Z")]
    CenterMissesZ,
    #[error("condition (ii): a center must span a cone of dimension ≥ 2")]
    CenterTooSmall,
    #[error("condition (iii): {0} do not span a cone of the current fan")]
    NotAFanCone(String),
    #[error("α must vanish off the support of Z (index {0})")]
    AlphaOffZ(usize),
    #[error("{what} entries must be 0 or 1, got {value}")]
    EpsilonRange { what: &'static str, value: u32 },
    #[error("a {expected} step was given to a {mode} chain")]
    ModeMismatch {
        mode: &'static str,
        expected: &'static str,
    },
    #[error("fan bookkeeping disagrees with the valuation pairing on `{id}`: {detail}")]
    Inconsistent { id: String, detail: String },
}
