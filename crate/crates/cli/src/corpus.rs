//! Seeded random generators for the self-test sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slopelab_core::blowup::{BlowupState, BlowupStep, ComponentKind, Mode};
use slopelab_core::elementary::{ElementaryModule, FormalModule, RegularPart};
use slopelab_core::exact_algebra::{CycloRat, MultiIndex, Rat};
use slopelab_core::monomial::{GoodModel, ModelFactor};

use crate::expr::{ModuleExpr, ModuleKind, PhiExpr, PhiKind};

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Seed from `SLOPELAB_SEED` when set and parseable, else `fallback`.
pub fn seed_from_env(fallback: u64) -> u64 {
    std::env::var("SLOPELAB_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(fallback)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for random one-variable modules.
#[derive(Debug, Clone, Copy)]
pub struct ModuleBounds {
    pub max_ram: u32,
    pub max_pole: u32,
    pub max_rank: u32,
    pub max_factors: usize,
}

impl Default for ModuleBounds {
    fn default() -> Self {
        ModuleBounds {
            max_ram: 6,
            max_pole: 8,
            max_rank: 4,
            max_factors: 3,
        }
    }
}

fn small_nonzero(rng: &mut impl Rng) -> Rat {
    let d = rng.gen_range(1..=3);
    let n = loop {
        let n = rng.gen_range(-4..=4);
        if n != 0 {
            break n;
        }
    };
    Rat::new(n, d)
}

fn coefficient(rng: &mut impl Rng) -> CycloRat {
    let r = small_nonzero(rng);
    if rng.gen_bool(0.6) {
        return CycloRat::from_rat(r);
    }
    let n = *[2u64, 3, 4, 6].choose(rng).unwrap();
    let k = rng.gen_range(0..n as i64);
    CycloRat::root_of_unity(n, k).expect("n ≥ 1").scale(&r)
}

pub fn regular_part(rng: &mut impl Rng, max_rank: u32) -> RegularPart {
    let rank = rng.gen_range(1..=max_rank);
    RegularPart::new((0..rank).map(|_| {
        let d = rng.gen_range(1..=4);
        Rat::new(rng.gen_range(0..d), d)
    }))
}

pub fn elementary(rng: &mut impl Rng, b: &ModuleBounds) -> ElementaryModule {
    let reg = regular_part(rng, b.max_rank);
    if rng.gen_bool(0.25) {
        return ElementaryModule::regular(reg);
    }
    let ram = rng.gen_range(1..=b.max_ram);
    let pole = rng.gen_range(1..=b.max_pole as i64);
    let mut terms = vec![(-pole, coefficient(rng))];
    if pole > 1 && rng.gen_bool(0.4) {
        terms.push((-rng.gen_range(1..pole), coefficient(rng)));
    }
    ElementaryModule::from_terms(ram, terms, reg).expect("ram ≥ 1")
}

pub fn module(rng: &mut impl Rng, b: &ModuleBounds) -> FormalModule {
    let n = rng.gen_range(1..=b.max_factors);
    FormalModule::from_factors((0..n).map(|_| elementary(rng, b)))
}

/// `count` modules from `seed` with the default bounds.
pub fn module_corpus(seed: u64, count: usize) -> Vec<FormalModule> {
    let mut rng = rng(seed);
    let b = ModuleBounds::default();
    (0..count).map(|_| module(&mut rng, &b)).collect()
}

/// Good models in dimension `≤ max_dim` with pole entries `≤ max_pole`.
pub fn good_model(rng: &mut impl Rng, max_dim: usize, max_pole: u32) -> GoodModel {
    let dim = rng.gen_range(1..=max_dim);
    let count = rng.gen_range(1..=3);
    let factors = (0..count)
        .map(|_| {
            let pole = (0..dim)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        0
                    } else {
                        rng.gen_range(0..=max_pole)
                    }
                })
                .collect();
            let twist = (0..dim)
                .map(|_| {
                    let d = rng.gen_range(1..=3);
                    Rat::new(rng.gen_range(0..d), d)
                })
                .collect();
            ModelFactor {
                pole: MultiIndex::new(pole),
                twist,
                rank: rng.gen_range(1..=3),
            }
        })
        .collect();
    GoodModel::new(dim, factors).expect("generated model is valid")
}

/// Initial data for a blow-up chain in dimension `≤ max_dim`.
pub fn blowup_start(rng: &mut impl Rng, max_dim: usize, mode: Mode) -> BlowupState {
    let n = rng.gen_range(1..=max_dim);
    let mut a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    if a.iter().all(|&x| x == 0) {
        let i = rng.gen_range(0..n);
        a[i] = rng.gen_range(1..=3);
    }
    let r = (0..n)
        .map(|_| {
            if rng.gen_bool(0.25) {
                Rat::zero()
            } else {
                Rat::new(rng.gen_range(0..=12), rng.gen_range(1..=4))
            }
        })
        .collect();
    BlowupState::new(mode, a, r).expect("generated data is valid")
}

/// A random admissible step, or `None` when the state offers no center.
pub fn blowup_step(rng: &mut impl Rng, state: &BlowupState) -> Option<BlowupStep> {
    match state.mode() {
        Mode::Toric => {
            let z: Vec<String> = state
                .components()
                .iter()
                .filter(
                    |c| matches!(c.kind, ComponentKind::Original { index } if state.a()[index] > 0),
                )
                .map(|c| c.id.clone())
                .collect();
            let cones: Vec<Vec<String>> = state
                .maximal_cones()
                .into_iter()
                .filter(|c| c.len() >= 2 && c.iter().any(|id| z.contains(id)))
                .collect();
            let cone = cones.choose(rng)?;
            let anchors: Vec<&String> = cone.iter().filter(|id| z.contains(id)).collect();
            let anchor = (*anchors.choose(rng)?).clone();
            let mut others: Vec<String> =
                cone.iter().filter(|id| **id != anchor).cloned().collect();
            others.shuffle(rng);
            let extra = rng.gen_range(1..=others.len());
            let mut center = vec![anchor];
            center.extend(others.into_iter().take(extra));
            Some(BlowupStep::Center { center })
        }
        Mode::Abstract => {
            let n = state.dim();
            let z: Vec<usize> = (0..n).filter(|&i| state.a()[i] > 0).collect();
            let mut alpha = vec![0u32; n];
            for &i in &z {
                if rng.gen_bool(0.4) {
                    alpha[i] = rng.gen_range(1..=2);
                }
            }
            let forced = *z.choose(rng)?;
            if alpha[forced] == 0 {
                alpha[forced] = 1;
            }
            let eps_s = (0..n).map(|_| rng.gen_range(0..=1)).collect();
            let eps_e = (0..state.steps()).map(|_| rng.gen_range(0..=1)).collect();
            Some(BlowupStep::Incidence {
                alpha,
                eps_s,
                eps_e,
            })
        }
    }
}

fn phi_coefficient(rng: &mut impl Rng) -> PhiExpr {
    let num = PhiKind::Num(Rat::new(rng.gen_range(1..=5), rng.gen_range(1..=3)));
    let zeta = PhiKind::Zeta(*[2u64, 3, 4, 5, 6].choose(rng).unwrap());
    let zeta = if rng.gen_bool(0.5) {
        zeta
    } else {
        PhiKind::Pow(Box::new(PhiExpr::new(zeta)), rng.gen_range(2..=3))
    };
    match rng.gen_range(0..4) {
        0 => PhiExpr::new(num),
        1 => PhiExpr::new(zeta),
        2 => PhiExpr::new(PhiKind::Mul(
            Box::new(PhiExpr::new(num)),
            Box::new(PhiExpr::new(zeta)),
        )),
        _ => PhiExpr::new(PhiKind::Add(
            Box::new(PhiExpr::new(num)),
            Box::new(PhiExpr::new(zeta)),
        )),
    }
}

fn phi_term(rng: &mut impl Rng, max_pole: i64) -> PhiExpr {
    let power = PhiExpr::new(PhiKind::Pow(
        Box::new(PhiExpr::new(PhiKind::U)),
        -rng.gen_range(1..=max_pole),
    ));
    if rng.gen_bool(0.3) {
        power
    } else {
        PhiExpr::new(PhiKind::Mul(
            Box::new(phi_coefficient(rng)),
            Box::new(power),
        ))
    }
}

/// A random exponent expression: one or two polar terms, maybe negated.
pub fn phi_expr(rng: &mut impl Rng) -> PhiExpr {
    let mut e = phi_term(rng, 6);
    if rng.gen_bool(0.3) {
        e = PhiExpr::new(PhiKind::Neg(Box::new(e)));
    }
    if rng.gen_bool(0.4) {
        let rhs = Box::new(phi_term(rng, 6));
        e = if rng.gen_bool(0.5) {
            PhiExpr::new(PhiKind::Add(Box::new(e), rhs))
        } else {
            PhiExpr::new(PhiKind::Sub(Box::new(e), rhs))
        };
    }
    e
}

fn exp_list(rng: &mut impl Rng, rank: u32) -> Option<Vec<Rat>> {
    rng.gen_bool(0.4).then(|| {
        (0..rank)
            .map(|_| Rat::new(rng.gen_range(-3..=3), rng.gen_range(1..=4)))
            .collect()
    })
}

/// A random module expression of nesting depth at most `depth`, kept small
/// enough to evaluate quickly.
pub fn module_expr(rng: &mut impl Rng, depth: u32) -> ModuleExpr {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    let kind = if leaf {
        let rank = rng.gen_range(1..=2);
        match rng.gen_range(0..10) {
            0 => ModuleKind::Zero,
            1..=2 => ModuleKind::Reg {
                rank,
                exp: exp_list(rng, rank),
            },
            _ => ModuleKind::El {
                ram: rng.gen_range(1..=4),
                phi: phi_expr(rng),
                rank,
                exp: exp_list(rng, rank),
            },
        }
    } else {
        let sub = |rng: &mut _| Box::new(module_expr(rng, depth - 1));
        match rng.gen_range(0..5) {
            0 => ModuleKind::Sum(sub(rng), sub(rng)),
            1 => ModuleKind::Dual(sub(rng)),
            2 => ModuleKind::Tensor(Box::new(module_expr(rng, 0)), Box::new(module_expr(rng, 0))),
            3 => ModuleKind::Pull(rng.gen_range(1..=3), sub(rng)),
            _ => ModuleKind::Push(rng.gen_range(1..=3), sub(rng)),
        }
    };
    ModuleExpr::new(kind)
}
