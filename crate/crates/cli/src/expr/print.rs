use std::fmt;

use slopelab_core::exact_algebra::Rat;

use super::{ModuleExpr, ModuleKind, PhiExpr, PhiKind};

fn write_exp(f: &mut fmt::Formatter<'_>, rank: u32, exp: &Option<Vec<Rat>>) -> fmt::Result {
    write!(f, "rank={rank}")?;
    if let Some(list) = exp {
        f.write_str(", exp=[")?;
        for (i, e) in list.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")?;
    }
    Ok(())
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModuleKind::Zero => f.write_str("0"),
            ModuleKind::El {
                ram,
                phi,
                rank,
                exp,
            } => {
                write!(f, "El({ram}, {phi}, ")?;
                write_exp(f, *rank, exp)?;
                f.write_str(")")
            }
            ModuleKind::Reg { rank, exp } => {
                f.write_str("Reg(")?;
                write_exp(f, *rank, exp)?;
                f.write_str(")")
            }
            ModuleKind::Sum(a, b) => {
                if matches!(b.kind, ModuleKind::Sum(..)) {
                    write!(f, "{a} + ({b})")
                } else {
                    write!(f, "{a} + {b}")
                }
            }
            ModuleKind::Dual(a) => write!(f, "dual({a})"),
            ModuleKind::Tensor(a, b) => write!(f, "tensor({a}, {b})"),
            ModuleKind::Pull(q, a) => write!(f, "pull({q}, {a})"),
            ModuleKind::Push(p, a) => write!(f, "push({p}, {a})"),
        }
    }
}

// binding strength: sum 1, product 3, power 4, atom 5
fn level(k: &PhiKind) -> u8 {
    match k {
        PhiKind::Add(..) | PhiKind::Sub(..) | PhiKind::Neg(_) => 1,
        PhiKind::Mul(..) => 3,
        PhiKind::Pow(..) => 4,
        PhiKind::Num(r) if !r.is_integer() || r.is_negative() => 4,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &PhiExpr, min: u8) -> fmt::Result {
    if level(&e.kind) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for PhiExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PhiKind::Num(r) if r.is_negative() => write!(f, "({r})"),
            PhiKind::Num(r) => write!(f, "{r}"),
            PhiKind::U => f.write_str("u"),
            PhiKind::Zeta(n) => write!(f, "zeta({n})"),
            PhiKind::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, 3)
            }
            PhiKind::Add(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" + ")?;
                write_at(f, b, 3)
            }
            PhiKind::Sub(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" - ")?;
                write_at(f, b, 3)
            }
            PhiKind::Mul(a, b) => {
                write_at(f, a, 3)?;
                f.write_str("*")?;
                write_at(f, b, 4)
            }
            PhiKind::Pow(a, e) => {
                write_at(f, a, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}
