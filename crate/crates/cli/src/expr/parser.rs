//! LL(1) recursive descent.
//!
//! ```text
//! module := term ('+' term)*
//! term   := 'El' '(' INT ',' phi ',' 'rank' '=' INT [',' 'exp' '=' list] ')'
//!         | 'Reg' '(' 'rank' '=' INT [',' 'exp' '=' list] ')'
//!         | 'dual' '(' module ')' | 'tensor' '(' module ',' module ')'
//!         | 'pull' '(' INT ',' module ')' | 'push' '(' INT ',' module ')'
//!         | '(' module ')' | '0'
//! list   := '[' [rat (',' rat)*] ']'        rat := ['-'] INT ['/' INT]
//! phi    := ['-'] prod (('+' | '-') prod)*
//! prod   := factor ('*' factor)*
//! factor := atom ['^' ['-'] INT]
//! atom   := INT ['/' INT] | 'u' | 'zeta' '(' INT ')' | '(' phi ')'
//! ```

use slopelab_core::exact_algebra::Rat;

use super::lexer::{lex, Tok, Token};
use super::{ModuleExpr, ModuleKind, ParseError, PhiExpr, PhiKind, Pos};

const TERM_START: &[&str] = &[
    "`El`", "`Reg`", "`dual`", "`tensor`", "`pull`", "`push`", "`(`", "`0`",
];
const ATOM_START: &[&str] = &["integer", "`u`", "`zeta`", "`(`"];

/// Parses and validates a module expression.
pub fn parse_module(text: &str) -> Result<ModuleExpr, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, at: 0 };
    let m = p.module()?;
    p.expect(Tok::Eof, &["`+`", "end of input"])?;
    Ok(m)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

fn names(set: &[&str]) -> Vec<String> {
    set.iter().map(|s| s.to_string()).collect()
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError {
            pos: t.pos,
            message: format!("unexpected {}", t.tok),
            expected: names(expected),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<Pos, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<Pos, ParseError> {
        let quoted = format!("`{word}`");
        self.expect(Tok::Ident(word.into()), &[quoted.as_str()])
    }

    fn int(&mut self) -> Result<(u64, Pos), ParseError> {
        match self.peek().tok {
            Tok::Int(n) => {
                let pos = self.bump().pos;
                Ok((n, pos))
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    /// A positive integer fitting in `u32`; `what` names it in the diagnostic.
    fn positive(&mut self, what: &str) -> Result<u32, ParseError> {
        let (n, pos) = self.int()?;
        if n == 0 {
            return Err(ParseError::semantic(pos, format!("{what} must be ≥ 1")));
        }
        u32::try_from(n).map_err(|_| ParseError::semantic(pos, format!("{what} {n} is too large")))
    }

    fn module(&mut self) -> Result<ModuleExpr, ParseError> {
        let mut lhs = self.term()?;
        while self.peek().tok == Tok::Plus {
            let pos = self.bump().pos;
            let rhs = self.term()?;
            lhs = ModuleExpr {
                kind: ModuleKind::Sum(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ModuleExpr, ParseError> {
        let t = self.peek().clone();
        let kind = match &t.tok {
            Tok::Int(0) => {
                self.bump();
                ModuleKind::Zero
            }
            Tok::LParen => {
                self.bump();
                let inner = self.module()?;
                self.expect(Tok::RParen, &["`+`", "`)`"])?;
                return Ok(inner);
            }
            Tok::Ident(word) => match word.as_str() {
                "El" => self.elementary()?,
                "Reg" => {
                    self.bump();
                    self.expect(Tok::LParen, &["`(`"])?;
                    let (rank, exp) = self.rank_and_exp()?;
                    ModuleKind::Reg { rank, exp }
                }
                "dual" => {
                    self.bump();
                    self.expect(Tok::LParen, &["`(`"])?;
                    let inner = self.module()?;
                    self.expect(Tok::RParen, &["`+`", "`)`"])?;
                    ModuleKind::Dual(Box::new(inner))
                }
                "tensor" => {
                    self.bump();
                    self.expect(Tok::LParen, &["`(`"])?;
                    let a = self.module()?;
                    self.expect(Tok::Comma, &["`+`", "`,`"])?;
                    let b = self.module()?;
                    self.expect(Tok::RParen, &["`+`", "`)`"])?;
                    ModuleKind::Tensor(Box::new(a), Box::new(b))
                }
                "pull" | "push" => {
                    let pull = word == "pull";
                    self.bump();
                    self.expect(Tok::LParen, &["`(`"])?;
                    let d = self.positive("degree")?;
                    self.expect(Tok::Comma, &["`,`"])?;
                    let inner = Box::new(self.module()?);
                    self.expect(Tok::RParen, &["`+`", "`)`"])?;
                    if pull {
                        ModuleKind::Pull(d, inner)
                    } else {
                        ModuleKind::Push(d, inner)
                    }
                }
                _ => return Err(self.unexpected(TERM_START)),
            },
            _ => return Err(self.unexpected(TERM_START)),
        };
        Ok(ModuleExpr { kind, pos: t.pos })
    }

    fn elementary(&mut self) -> Result<ModuleKind, ParseError> {
        self.bump();
        self.expect(Tok::LParen, &["`(`"])?;
        let ram = self.positive("ramification")?;
        self.expect(Tok::Comma, &["`,`"])?;
        let phi = self.phi()?;
        self.expect(Tok::Comma, &["`+`", "`-`", "`*`", "`,`"])?;
        let (rank, exp) = self.rank_and_exp()?;
        Ok(ModuleKind::El {
            ram,
            phi,
            rank,
            exp,
        })
    }

    /// `rank=k [, exp=[...]] )`
    fn rank_and_exp(&mut self) -> Result<(u32, Option<Vec<Rat>>), ParseError> {
        self.keyword("rank")?;
        self.expect(Tok::Eq, &["`=`"])?;
        let rank = self.positive("rank")?;
        let mut exp = None;
        if self.peek().tok == Tok::Comma {
            self.bump();
            let pos = self.keyword("exp")?;
            self.expect(Tok::Eq, &["`=`"])?;
            let list = self.rat_list()?;
            if list.len() != rank as usize {
                return Err(ParseError::semantic(
                    pos,
                    format!("exp lists {} exponents but rank is {rank}", list.len()),
                ));
            }
            exp = Some(list);
        }
        self.expect(Tok::RParen, &["`,`", "`)`"])?;
        Ok((rank, exp))
    }

    fn rat_list(&mut self) -> Result<Vec<Rat>, ParseError> {
        self.expect(Tok::LBracket, &["`[`"])?;
        let mut out = Vec::new();
        if self.peek().tok == Tok::RBracket {
            self.bump();
            return Ok(out);
        }
        loop {
            let neg = if self.peek().tok == Tok::Minus {
                self.bump();
                true
            } else {
                false
            };
            let r = self.rational()?;
            out.push(if neg { -r } else { r });
            match self.peek().tok {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBracket => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(self.unexpected(&["`/`", "`,`", "`]`"])),
            }
        }
    }

    /// `INT ['/' INT]`
    fn rational(&mut self) -> Result<Rat, ParseError> {
        let (n, _) = self.int()?;
        let num = Rat::from(n);
        if self.peek().tok != Tok::Slash {
            return Ok(num);
        }
        self.bump();
        let (d, pos) = self.int()?;
        if d == 0 {
            return Err(ParseError::semantic(pos, "zero denominator"));
        }
        Ok(num / Rat::from(d))
    }

    fn phi(&mut self) -> Result<PhiExpr, ParseError> {
        let mut lhs = if self.peek().tok == Tok::Minus {
            let pos = self.bump().pos;
            PhiExpr {
                kind: PhiKind::Neg(Box::new(self.prod()?)),
                pos,
            }
        } else {
            self.prod()?
        };
        loop {
            let op = self.peek().tok.clone();
            if op != Tok::Plus && op != Tok::Minus {
                return Ok(lhs);
            }
            let pos = self.bump().pos;
            let rhs = Box::new(self.prod()?);
            let kind = if op == Tok::Plus {
                PhiKind::Add(Box::new(lhs), rhs)
            } else {
                PhiKind::Sub(Box::new(lhs), rhs)
            };
            lhs = PhiExpr { kind, pos };
        }
    }

    fn prod(&mut self) -> Result<PhiExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek().tok == Tok::Star {
            let pos = self.bump().pos;
            let rhs = self.factor()?;
            lhs = PhiExpr {
                kind: PhiKind::Mul(Box::new(lhs), Box::new(rhs)),
                pos,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<PhiExpr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let pos = self.bump().pos;
        let neg = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let (n, npos) = match self.peek().tok {
            Tok::Int(n) => (n, self.bump().pos),
            _ => {
                let expected: &[&str] = if neg {
                    &["integer"]
                } else {
                    &["`-`", "integer"]
                };
                return Err(self.unexpected(expected));
            }
        };
        let e = i64::try_from(n)
            .map_err(|_| ParseError::semantic(npos, format!("exponent {n} is too large")))?;
        Ok(PhiExpr {
            kind: PhiKind::Pow(Box::new(base), if neg { -e } else { e }),
            pos,
        })
    }

    fn atom(&mut self) -> Result<PhiExpr, ParseError> {
        let t = self.peek().clone();
        let kind = match &t.tok {
            Tok::Int(_) => PhiKind::Num(self.rational()?),
            Tok::Ident(w) if w == "u" => {
                self.bump();
                PhiKind::U
            }
            Tok::Ident(w) if w == "zeta" => {
                self.bump();
                self.expect(Tok::LParen, &["`(`"])?;
                let (n, pos) = self.int()?;
                if n == 0 {
                    return Err(ParseError::semantic(pos, "zeta order must be ≥ 1"));
                }
                self.expect(Tok::RParen, &["`)`"])?;
                PhiKind::Zeta(n)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.phi()?;
                self.expect(Tok::RParen, &["`+`", "`-`", "`*`", "`)`"])?;
                return Ok(inner);
            }
            _ => return Err(self.unexpected(ATOM_START)),
        };
        Ok(PhiExpr { kind, pos: t.pos })
    }
}
