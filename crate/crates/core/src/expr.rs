//! Text syntax for algebra elements.
//!
//! ```text
//! expr   := ('+' | '-')? term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' uint)?
//! atom   := uint | 'i' | 's2' | gen | '(' expr ')'
//! gen    := 'X' | 'D' | 'P' | 'N' | 'I' | 'a' | 'ad'
//! ```
//!
//! `P` is accepted as an alias for `−i·D`. Divisors must lower to nonzero
//! scalars. Ladder and differential symbols may be mixed; see [`OperatorExpr::lower`].
//! The output of `Display` on [`UeaElement`] parses back to the same element.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::uea::{Basis, Generator, UeaElement, UeaError};
use crate::Scalar;

/// Largest literal exponent accepted by the parser.
pub const MAX_EXPONENT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("divisor at offset {pos} is not a nonzero scalar")]
    BadDivisor { pos: usize },
    #[error(transparent)]
    Algebra(#[from] UeaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    X,
    D,
    P,
    N,
    I,
    A,
    ADag,
}

impl Symbol {
    fn from_ident(s: &str) -> Option<Self> {
        Some(match s {
            "X" => Symbol::X,
            "D" => Symbol::D,
            "P" => Symbol::P,
            "N" => Symbol::N,
            "I" => Symbol::I,
            "a" => Symbol::A,
            "ad" => Symbol::ADag,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Symbol::X => "X",
            Symbol::D => "D",
            Symbol::P => "P",
            Symbol::N => "N",
            Symbol::I => "I",
            Symbol::A => "a",
            Symbol::ADag => "ad",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorExpr {
    Integer(BigInt),
    Imaginary,
    Sqrt2,
    Symbol(Symbol),
    Neg(Box<OperatorExpr>),
    Sum(Box<OperatorExpr>, Box<OperatorExpr>),
    Difference(Box<OperatorExpr>, Box<OperatorExpr>),
    Product(Box<OperatorExpr>, Box<OperatorExpr>),
    Quotient {
        num: Box<OperatorExpr>,
        den: Box<OperatorExpr>,
        pos: usize,
    },
    Power(Box<OperatorExpr>, u32),
    Group(Box<OperatorExpr>),
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Integer(n) => write!(f, "{n}"),
            OperatorExpr::Imaginary => f.write_str("i"),
            OperatorExpr::Sqrt2 => f.write_str("s2"),
            OperatorExpr::Symbol(s) => f.write_str(s.name()),
            OperatorExpr::Neg(e) => write!(f, "-{e}"),
            OperatorExpr::Sum(a, b) => write!(f, "{a} + {b}"),
            OperatorExpr::Difference(a, b) => write!(f, "{a} - {b}"),
            OperatorExpr::Product(a, b) => write!(f, "{a}*{b}"),
            OperatorExpr::Quotient { num, den, .. } => write!(f, "{num}/{den}"),
            OperatorExpr::Power(e, k) => write!(f, "{e}^{k}"),
            OperatorExpr::Group(e) => write!(f, "({e})"),
        }
    }
}

impl OperatorExpr {
    fn visit_symbols(&self, out: &mut Vec<Symbol>) {
        match self {
            OperatorExpr::Symbol(s) => out.push(*s),
            OperatorExpr::Neg(e) | OperatorExpr::Power(e, _) | OperatorExpr::Group(e) => e.visit_symbols(out),
            OperatorExpr::Sum(a, b) | OperatorExpr::Difference(a, b) | OperatorExpr::Product(a, b) => {
                a.visit_symbols(out);
                b.visit_symbols(out);
            }
            OperatorExpr::Quotient { num, den, .. } => {
                num.visit_symbols(out);
                den.visit_symbols(out);
            }
            OperatorExpr::Integer(_) | OperatorExpr::Imaginary | OperatorExpr::Sqrt2 => {}
        }
    }

    /// Basis chosen by [`lower`](Self::lower): ladder if the text uses only
    /// `a`/`ad` (with `N`, `I`), differential otherwise.
    pub fn natural_basis(&self) -> Basis {
        let mut syms = Vec::new();
        self.visit_symbols(&mut syms);
        let differential = syms.iter().any(|s| matches!(s, Symbol::X | Symbol::D | Symbol::P));
        let ladder = syms.iter().any(|s| matches!(s, Symbol::A | Symbol::ADag));
        if ladder && !differential {
            Basis::Ladder
        } else {
            Basis::Differential
        }
    }

    /// Lowers in [`natural_basis`](Self::natural_basis); mixed input goes to the differential basis.
    pub fn lower(&self) -> Result<UeaElement, ExprError> {
        self.lower_in(self.natural_basis())
    }

    /// Lowers to a canonical element of `basis`, converting foreign symbols exactly.
    pub fn lower_in(&self, basis: Basis) -> Result<UeaElement, ExprError> {
        let scalar = |c: Scalar| UeaElement::scalar(basis, c);
        Ok(match self {
            OperatorExpr::Integer(n) => scalar(Scalar::from_rational(BigRational::from_integer(n.clone()))),
            OperatorExpr::Imaginary => scalar(Scalar::i()),
            OperatorExpr::Sqrt2 => scalar(Scalar::sqrt2()),
            OperatorExpr::Symbol(s) => symbol_in(*s, basis)?,
            OperatorExpr::Neg(e) => -e.lower_in(basis)?,
            OperatorExpr::Sum(a, b) => a.lower_in(basis)?.try_add(&b.lower_in(basis)?)?,
            OperatorExpr::Difference(a, b) => a.lower_in(basis)?.try_sub(&b.lower_in(basis)?)?,
            OperatorExpr::Product(a, b) => a.lower_in(basis)?.product(&b.lower_in(basis)?)?,
            OperatorExpr::Quotient { num, den, pos } => {
                let d = den.lower_in(basis)?;
                let inv = match (d.len(), d.coefficient(&[0, 0, 0])) {
                    (1, Some(c)) => c.inverse(),
                    _ => None,
                }
                .ok_or(ExprError::BadDivisor { pos: *pos })?;
                num.lower_in(basis)?.scale(&inv)
            }
            OperatorExpr::Power(e, k) => e.lower_in(basis)?.pow(*k)?,
            OperatorExpr::Group(e) => e.lower_in(basis)?,
        })
    }
}

fn symbol_in(s: Symbol, basis: Basis) -> Result<UeaElement, UeaError> {
    let (g, home) = match s {
        Symbol::X => (Generator::X, Basis::Differential),
        Symbol::D => (Generator::D, Basis::Differential),
        Symbol::A => (Generator::A, Basis::Ladder),
        Symbol::ADag => (Generator::ADag, Basis::Ladder),
        Symbol::N => return UeaElement::generator_in(Generator::N, basis),
        Symbol::I => return Ok(UeaElement::one(basis)),
        Symbol::P => {
            let d = UeaElement::generator(Generator::D).in_basis(basis)?;
            return Ok(d.scale(&-Scalar::i()));
        }
    };
    UeaElement::generator_in(g, home)?.in_basis(basis)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
        } else if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek().filter(|(_, c)| c.is_ascii_digit()) {
                s.push(c);
                chars.next();
            }
            out.push((pos, Tok::Int(s.parse().expect("ascii digits"))));
        } else if ch.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&(_, c)) = chars.peek().filter(|(_, c)| c.is_ascii_alphanumeric() || *c == '_') {
                s.push(c);
                chars.next();
            }
            out.push((pos, Tok::Ident(s)));
        } else if "+-*/^()".contains(ch) {
            out.push((pos, Tok::Op(ch)));
            chars.next();
        } else {
            return Err(ExprError::Syntax {
                pos,
                msg: format!("unexpected character {ch:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<OperatorExpr, ExprError> {
        let mut lhs = if self.eat('-') {
            OperatorExpr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                lhs = OperatorExpr::Sum(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = OperatorExpr::Difference(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = OperatorExpr::Product(Box::new(lhs), Box::new(self.factor()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let pos = self.pos();
                self.at += 1;
                let den = self.factor()?;
                lhs = OperatorExpr::Quotient {
                    num: Box::new(lhs),
                    den: Box::new(den),
                    pos,
                };
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<OperatorExpr, ExprError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                let k = match u32::try_from(k) {
                    Ok(k) if k <= MAX_EXPONENT => k,
                    _ => return self.error(format!("exponent exceeds {MAX_EXPONENT}")),
                };
                self.at += 1;
                Ok(OperatorExpr::Power(Box::new(base), k))
            }
            _ => self.error("expected a non-negative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<OperatorExpr, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return self.error("unexpected end of input");
        };
        match tok {
            Tok::Int(n) => {
                self.at += 1;
                Ok(OperatorExpr::Integer(n))
            }
            Tok::Ident(name) => {
                let atom = match name.as_str() {
                    "i" => OperatorExpr::Imaginary,
                    "s2" => OperatorExpr::Sqrt2,
                    other => match Symbol::from_ident(other) {
                        Some(s) => OperatorExpr::Symbol(s),
                        None => return self.error(format!("unknown symbol {other:?}")),
                    },
                };
                self.at += 1;
                Ok(atom)
            }
            Tok::Op('(') => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.error("expected ')'");
                }
                Ok(OperatorExpr::Group(Box::new(inner)))
            }
            Tok::Op(c) => self.error(format!("unexpected {c:?}")),
        }
    }
}

/// Parses operator text into an AST.
pub fn parse_operator(text: &str) -> Result<OperatorExpr, ExprError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.error("trailing input");
    }
    Ok(e)
}

/// Parses and lowers in the natural basis.
pub fn parse_element(text: &str) -> Result<UeaElement, ExprError> {
    parse_operator(text)?.lower()
}
