use std::collections::BTreeMap;

use slopelab_core::elementary::{ElementaryModule, FormalModule, RegularPart};
use slopelab_core::exact_algebra::{CycloRat, Rat};

use super::{ModuleExpr, ModuleKind, PhiExpr, PhiKind, Pos};

/// Largest `|e|` accepted in `φ^e`.
pub const MAX_POWER: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {}, column {}: {message}", pos.line, pos.column)]
pub struct EvalError {
    pub pos: Pos,
    pub message: String,
}

type Poly = BTreeMap<i64, CycloRat>;

fn err(pos: Pos, message: impl Into<String>) -> EvalError {
    EvalError {
        pos,
        message: message.into(),
    }
}

fn constant(c: CycloRat) -> Poly {
    let mut p = Poly::new();
    if !c.is_zero() {
        p.insert(0, c);
    }
    p
}

fn add_into(acc: &mut Poly, k: i64, c: CycloRat) {
    let sum = match acc.get(&k) {
        Some(old) => old + &c,
        None => c,
    };
    if sum.is_zero() {
        acc.remove(&k);
    } else {
        acc.insert(k, sum);
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (i, x) in a {
        for (j, y) in b {
            add_into(&mut out, i + j, x * y);
        }
    }
    out
}

fn phi_poly(e: &PhiExpr) -> Result<Poly, EvalError> {
    Ok(match &e.kind {
        PhiKind::Num(r) => constant(CycloRat::from_rat(r.clone())),
        PhiKind::U => Poly::from([(1, CycloRat::one())]),
        PhiKind::Zeta(n) => {
            constant(CycloRat::root_of_unity(*n, 1).map_err(|x| err(e.pos, x.to_string()))?)
        }
        PhiKind::Neg(a) => phi_poly(a)?.into_iter().map(|(k, c)| (k, -c)).collect(),
        PhiKind::Add(a, b) | PhiKind::Sub(a, b) => {
            let mut out = phi_poly(a)?;
            let neg = matches!(e.kind, PhiKind::Sub(..));
            for (k, c) in phi_poly(b)? {
                add_into(&mut out, k, if neg { -c } else { c });
            }
            out
        }
        PhiKind::Mul(a, b) => mul(&phi_poly(a)?, &phi_poly(b)?),
        PhiKind::Pow(a, n) => {
            if n.abs() > MAX_POWER {
                return Err(err(e.pos, format!("exponent {n} exceeds {MAX_POWER}")));
            }
            let base = phi_poly(a)?;
            if *n >= 0 {
                let mut out = constant(CycloRat::one());
                for _ in 0..*n {
                    out = mul(&out, &base);
                }
                out
            } else {
                if base.len() != 1 {
                    return Err(err(
                        e.pos,
                        if base.is_empty() {
                            "negative power of zero"
                        } else {
                            "negative power of a sum of several terms"
                        },
                    ));
                }
                let (k, c) = base.into_iter().next().unwrap();
                Poly::from([(k * n, c.pow(*n).expect("nonzero"))])
            }
        }
    })
}

fn regular(rank: u32, exp: &Option<Vec<Rat>>) -> RegularPart {
    match exp {
        Some(list) => RegularPart::new(list.iter().cloned()),
        None => RegularPart::trivial(rank),
    }
}

/// The formal module an expression denotes, in canonical form.
pub fn eval(e: &ModuleExpr) -> Result<FormalModule, EvalError> {
    Ok(match &e.kind {
        ModuleKind::Zero => FormalModule::zero(),
        ModuleKind::El {
            ram,
            phi,
            rank,
            exp,
        } => {
            let poly = phi_poly(phi)?;
            let el = ElementaryModule::from_terms(*ram, poly, regular(*rank, exp))
                .map_err(|x| err(e.pos, x.to_string()))?;
            FormalModule::elementary(el)
        }
        ModuleKind::Reg { rank, exp } => FormalModule::regular(regular(*rank, exp)),
        ModuleKind::Sum(a, b) => eval(a)?.direct_sum(&eval(b)?),
        ModuleKind::Dual(a) => eval(a)?.dual(),
        ModuleKind::Tensor(a, b) => eval(a)?.tensor(&eval(b)?),
        ModuleKind::Pull(q, a) => eval(a)?.pullback(*q),
        ModuleKind::Push(p, a) => eval(a)?.pushforward(*p),
    })
}
