use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::report::ClosingCheck;
use super::BlowupError;
use crate::exact_algebra::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Star subdivisions of the positive orthant fan.
    Toric,
    /// Incidences supplied by hand.
    Abstract,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Toric => "toric",
            Mode::Abstract => "abstract",
        }
    }
}

/// Strict transform of `D_i` (a `Z`-component when `a_i > 0`, an
/// `S`-component when `r_i > 0`, possibly both), or an exceptional divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ComponentKind {
    Original { index: usize },
    Exceptional { step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub id: String,
    pub kind: ComponentKind,
    pub ray: Option<Vec<u64>>,
    /// Multiplicity in `π^*Z`.
    pub vz: u64,
    /// Multiplicity in `π^*S`.
    pub vs: Rat,
}

/// A center: component ids spanning a cone (toric), or incidences (abstract).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlowupStep {
    Center {
        center: Vec<String>,
    },
    Incidence {
        alpha: Vec<u32>,
        #[serde(rename = "epsS")]
        eps_s: Vec<u32>,
        #[serde(rename = "epsE", default)]
        eps_e: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupState {
    mode: Mode,
    a: Vec<u32>,
    r: Vec<Rat>,
    deg_s: Rat,
    components: Vec<Component>,
    /// Maximal cones, as sets of component positions (toric mode only).
    cones: Vec<BTreeSet<usize>>,
    checks: Vec<ClosingCheck>,
}

impl BlowupState {
    pub fn new(mode: Mode, a: Vec<u32>, r: Vec<Rat>) -> Result<Self, BlowupError> {
        let n = a.len();
        if n == 0 {
            return Err(BlowupError::ZeroDimension);
        }
        if r.len() != n {
            return Err(BlowupError::LengthMismatch {
                what: "r",
                len: r.len(),
                expected: n,
            });
        }
        if r.iter().any(Rat::is_negative) {
            return Err(BlowupError::NegativeSlope);
        }
        let components = (0..n)
            .map(|i| Component {
                id: format!("D{}", i + 1),
                kind: ComponentKind::Original { index: i },
                ray: (mode == Mode::Toric).then(|| unit(n, i)),
                vz: a[i] as u64,
                vs: r[i].clone(),
            })
            .collect();
        let cones = match mode {
            Mode::Toric => vec![(0..n).collect()],
            Mode::Abstract => vec![],
        };
        let deg_s = r.iter().cloned().sum();
        Ok(BlowupState {
            mode,
            a,
            r,
            deg_s,
            components,
            cones,
            checks: Vec::new(),
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn r(&self) -> &[Rat] {
        &self.r
    }

    pub fn deg_s(&self) -> &Rat {
        &self.deg_s
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn exceptionals(&self) -> impl Iterator<Item = &Component> {
        self.components
            .iter()
            .filter(|c| matches!(c.kind, ComponentKind::Exceptional { .. }))
    }

    /// Maximal cones of the current fan, each as a sorted list of ids.
    pub fn maximal_cones(&self) -> Vec<Vec<String>> {
        self.cones
            .iter()
            .map(|c| c.iter().map(|&k| self.components[k].id.clone()).collect())
            .collect()
    }

    /// The closing-display checks recorded at each step so far.
    pub fn closing_checks(&self) -> &[ClosingCheck] {
        &self.checks
    }

    pub fn steps(&self) -> usize {
        self.components.len() - self.dim()
    }

    fn position(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn blow_up(&self, step: &BlowupStep) -> Result<BlowupState, BlowupError> {
        match (self.mode, step) {
            (Mode::Toric, BlowupStep::Center { center }) => self.blow_up_cone(center),
            (
                Mode::Abstract,
                BlowupStep::Incidence {
                    alpha,
                    eps_s,
                    eps_e,
                },
            ) => self.blow_up_incidence(alpha, eps_s, eps_e),
            (mode, BlowupStep::Center { .. }) => Err(BlowupError::ModeMismatch {
                mode: mode.name(),
                expected: "toric",
            }),
            (mode, BlowupStep::Incidence { .. }) => Err(BlowupError::ModeMismatch {
                mode: mode.name(),
                expected: "abstract",
            }),
        }
    }

    fn blow_up_cone(&self, center: &[String]) -> Result<BlowupState, BlowupError> {
        let n = self.dim();
        let mut sigma = BTreeSet::new();
        for id in center {
            let k = self
                .position(id)
                .ok_or_else(|| BlowupError::UnknownComponent(id.clone()))?;
            if !sigma.insert(k) {
                return Err(BlowupError::DuplicateComponent(id.clone()));
            }
        }
        if sigma.len() < 2 {
            return Err(BlowupError::CenterTooSmall);
        }
        if !self.cones.iter().any(|c| sigma.is_subset(c)) {
            return Err(BlowupError::NotAFanCone(center.join(", ")));
        }
        let mut alpha = vec![0u32; n];
        let mut eps_s = vec![0u32; n];
        let mut eps_e = Vec::new();
        for (k, comp) in self.components.iter().enumerate() {
            let inside = sigma.contains(&k) as u32;
            match comp.kind {
                ComponentKind::Original { index } => {
                    if self.a[index] > 0 {
                        alpha[index] = inside;
                    }
                    eps_s[index] = inside;
                }
                ComponentKind::Exceptional { .. } => eps_e.push(inside),
            }
        }
        let mut next = self.apply(&alpha, &eps_s, &eps_e)?;

        let mut ray = vec![0u64; n];
        for &k in &sigma {
            let r = self.components[k].ray.as_ref().expect("toric rays");
            for (x, y) in ray.iter_mut().zip(r) {
                *x += y;
            }
        }
        let new = next.components.len() - 1;
        let pairing_z: u64 = ray.iter().zip(&self.a).map(|(&x, &a)| x * a as u64).sum();
        let pairing_s: Rat = ray
            .iter()
            .zip(&self.r)
            .map(|(&x, r)| Rat::from(x) * r)
            .sum();
        let p = &mut next.components[new];
        if p.vz != pairing_z || p.vs != pairing_s {
            return Err(BlowupError::Inconsistent {
                id: p.id.clone(),
                detail: format!(
                    "recursion gives ({}, {}), ray {:?} gives ({pairing_z}, {pairing_s})",
                    p.vz, p.vs, ray
                ),
            });
        }
        p.ray = Some(ray);

        let mut cones = Vec::new();
        for cone in &self.cones {
            if !sigma.is_subset(cone) {
                cones.push(cone.clone());
                continue;
            }
            for &rho in &sigma {
                let mut c = cone.clone();
                c.remove(&rho);
                c.insert(new);
                cones.push(c);
            }
        }
        cones.sort();
        next.cones = cones;
        Ok(next)
    }

    fn blow_up_incidence(
        &self,
        alpha: &[u32],
        eps_s: &[u32],
        eps_e: &[u32],
    ) -> Result<BlowupState, BlowupError> {
        let n = self.dim();
        let check_len = |what, len, expected| {
            if len != expected {
                Err(BlowupError::LengthMismatch {
                    what,
                    len,
                    expected,
                })
            } else {
                Ok(())
            }
        };
        check_len("alpha", alpha.len(), n)?;
        check_len("epsS", eps_s.len(), n)?;
        check_len("epsE", eps_e.len(), self.steps())?;
        if let Some(i) = (0..n).find(|&i| self.a[i] == 0 && alpha[i] != 0) {
            return Err(BlowupError::AlphaOffZ(i));
        }
        for (what, values) in [("epsS", eps_s), ("epsE", eps_e)] {
            if let Some(&value) = values.iter().find(|&&v| v > 1) {
                return Err(BlowupError::EpsilonRange { what, value });
            }
        }
        self.apply(alpha, eps_s, eps_e)
    }

    /// Appends `P` with `v_P(Z) = Σ a_i α_i + Σ ε_E v_E(Z)` and
    /// `v_P(S) = Σ r_i ε_i + Σ ε_E v_E(S)`.
    fn apply(
        &self,
        alpha: &[u32],
        eps_s: &[u32],
        eps_e: &[u32],
    ) -> Result<BlowupState, BlowupError> {
        if !alpha.iter().zip(&self.a).any(|(&al, &a)| al > 0 && a > 0) {
            return Err(BlowupError::CenterMissesZ);
        }
        let sum_a: u64 = alpha
            .iter()
            .zip(&self.a)
            .map(|(&al, &a)| al as u64 * a as u64)
            .sum();
        let sum_r: Rat = eps_s
            .iter()
            .zip(&self.r)
            .filter(|(&e, _)| e == 1)
            .map(|(_, r)| r.clone())
            .sum();
        let mut sum_ez = 0u64;
        let mut sum_es = Rat::zero();
        for (e, comp) in eps_e.iter().zip(self.exceptionals()) {
            if *e == 1 {
                sum_ez += comp.vz;
                sum_es += &comp.vs;
            }
        }
        let step = self.steps() + 1;
        let vz = sum_a + sum_ez;
        let vs = &sum_r + &sum_es;
        let check = ClosingCheck::new(step, &self.deg_s, sum_a, sum_ez, &sum_r, &sum_es);

        let mut next = self.clone();
        next.components.push(Component {
            id: format!("E{step}"),
            kind: ComponentKind::Exceptional { step },
            ray: None,
            vz,
            vs,
        });
        next.checks.push(check);
        Ok(next)
    }
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}
