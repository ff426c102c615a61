use serde::{Deserialize, Serialize};

use super::state::{BlowupState, BlowupStep, Mode};
use super::BlowupError;
use crate::exact_algebra::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZData {
    pub a: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SData {
    pub r: Vec<Rat>,
}

/// `{ dim, Z: {a}, S: {r}, mode, steps }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupScript {
    pub dim: usize,
    #[serde(rename = "Z")]
    pub z: ZData,
    #[serde(rename = "S")]
    pub s: SData,
    pub mode: Mode,
    #[serde(default)]
    pub steps: Vec<BlowupStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScriptError {
    #[error("script: {0}")]
    Format(String),
    #[error("initial data: {0}")]
    Initial(BlowupError),
    /// `index` counts from 0; the message counts steps from 1.
    #[error("step {}: {source}", index + 1)]
    Step { index: usize, source: BlowupError },
}

impl BlowupScript {
    pub fn from_json(text: &str) -> Result<Self, ScriptError> {
        serde_json::from_str(text).map_err(|e| ScriptError::Format(e.to_string()))
    }

    pub fn initial_state(&self) -> Result<BlowupState, ScriptError> {
        if self.z.a.len() != self.dim {
            return Err(ScriptError::Initial(BlowupError::LengthMismatch {
                what: "Z.a",
                len: self.z.a.len(),
                expected: self.dim,
            }));
        }
        BlowupState::new(self.mode, self.z.a.clone(), self.s.r.clone())
            .map_err(ScriptError::Initial)
    }
}

/// Folds the steps over the initial state; step indices in errors start at 0.
pub fn chain_from_script(script: &BlowupScript) -> Result<BlowupState, ScriptError> {
    let mut state = script.initial_state()?;
    for (index, step) in script.steps.iter().enumerate() {
        state = state
            .blow_up(step)
            .map_err(|source| ScriptError::Step { index, source })?;
    }
    Ok(state)
}
