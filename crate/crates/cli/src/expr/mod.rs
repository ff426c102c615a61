//! The module expression language: `El(...)`, `Reg(...)`, `+`, `dual`,
//! `tensor`, `pull`, `push`.

mod eval;
mod lexer;
mod parser;
mod print;

use std::fmt;

use slopelab_core::exact_algebra::Rat;

pub use eval::{eval, EvalError};
pub use parser::parse_module;

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
    /// Tokens that would have been accepted; empty for semantic errors.
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn semantic(pos: Pos, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.pos.line, self.pos.column, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A module expression. Equality ignores source positions.
#[derive(Debug, Clone)]
pub struct ModuleExpr {
    pub kind: ModuleKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleKind {
    Zero,
    El {
        ram: u32,
        phi: PhiExpr,
        rank: u32,
        exp: Option<Vec<Rat>>,
    },
    Reg {
        rank: u32,
        exp: Option<Vec<Rat>>,
    },
    Sum(Box<ModuleExpr>, Box<ModuleExpr>),
    Dual(Box<ModuleExpr>),
    Tensor(Box<ModuleExpr>, Box<ModuleExpr>),
    Pull(u32, Box<ModuleExpr>),
    Push(u32, Box<ModuleExpr>),
}

impl ModuleExpr {
    pub fn new(kind: ModuleKind) -> Self {
        ModuleExpr {
            kind,
            pos: Pos::default(),
        }
    }
}

impl PartialEq for ModuleExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for ModuleExpr {}

/// Laurent polynomial expression in `u`.
#[derive(Debug, Clone)]
pub struct PhiExpr {
    pub kind: PhiKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhiKind {
    /// Non-negative literal.
    Num(Rat),
    U,
    /// `zeta(N)`, a primitive `N`-th root of unity.
    Zeta(u64),
    Neg(Box<PhiExpr>),
    Add(Box<PhiExpr>, Box<PhiExpr>),
    Sub(Box<PhiExpr>, Box<PhiExpr>),
    Mul(Box<PhiExpr>, Box<PhiExpr>),
    Pow(Box<PhiExpr>, i64),
}

impl PhiExpr {
    pub fn new(kind: PhiKind) -> Self {
        PhiExpr {
            kind,
            pos: Pos::default(),
        }
    }
}

impl PartialEq for PhiExpr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for PhiExpr {}
