//! Formal terms built from `0`, the symbols `D_u` and finite sums.
//!
//! A term is either `0`, a principal term `D_u a`, or a sum
//! `(a_0, ..., a_n)` of at least two principal terms. A one-element sequence
//! is the principal term itself, so every term has exactly one
//! representation and equality is structural.
//!
//! The text syntax is
//!
//! ```text
//! term      := "0" | principal | "(" principal ("," principal)+ ")"
//! principal := "D" idx "(" term ")"
//! idx       := digits | "w"
//! ```
//!
//! Whitespace is ignored when parsing; printing never emits any.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A subscript `u` of `D_u`: a natural number or `ω`.
///
/// Every natural number is below `Omega`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderIndex {
    Finite(u32),
    Omega,
}

impl OrderIndex {
    pub const ZERO: OrderIndex = OrderIndex::Finite(0);

    pub fn finite(self) -> Option<u32> {
        match self {
            OrderIndex::Finite(n) => Some(n),
            OrderIndex::Omega => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, OrderIndex::Finite(_))
    }
}

impl From<u32> for OrderIndex {
    fn from(n: u32) -> Self {
        OrderIndex::Finite(n)
    }
}

impl fmt::Display for OrderIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderIndex::Finite(n) => write!(f, "{n}"),
            OrderIndex::Omega => f.write_str("w"),
        }
    }
}

/// A sum of at least two principal terms.
///
/// The parts are private so that the length and shape invariants cannot be
/// broken after construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sum(Vec<Term>);

impl Sum {
    pub fn parts(&self) -> &[Term] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    Principal(OrderIndex, Box<Term>),
    Sum(Sum),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("sum component {index} is not a principal term")]
    NonPrincipalPart { index: usize },
}

impl Term {
    pub fn zero() -> Term {
        Term::Zero
    }

    pub fn principal(index: impl Into<OrderIndex>, arg: Term) -> Term {
        Term::Principal(index.into(), Box::new(arg))
    }

    /// `D_u 0`.
    pub fn d(index: impl Into<OrderIndex>) -> Term {
        Term::principal(index, Term::Zero)
    }

    /// Builds the term denoted by a sequence of principal terms: the empty
    /// sequence is `0`, a singleton is its only element.
    pub fn from_parts(mut parts: Vec<Term>) -> Result<Term, TermError> {
        if let Some(index) = parts.iter().position(|p| !p.is_principal()) {
            return Err(TermError::NonPrincipalPart { index });
        }
        Ok(match parts.len() {
            0 => Term::Zero,
            1 => parts.pop().unwrap(),
            _ => Term::Sum(Sum(parts)),
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Term::Zero)
    }

    pub fn is_principal(&self) -> bool {
        matches!(self, Term::Principal(..))
    }

    /// The term read as a sequence of principal terms.
    pub fn parts(&self) -> &[Term] {
        match self {
            Term::Zero => &[],
            Term::Principal(..) => std::slice::from_ref(self),
            Term::Sum(s) => s.parts(),
        }
    }

    /// Subscript of a principal term, first component's order for a sum,
    /// and `0` for `0`.
    pub fn order(&self) -> OrderIndex {
        match self {
            Term::Zero => OrderIndex::ZERO,
            Term::Principal(u, _) => *u,
            Term::Sum(s) => s.0[0].order(),
        }
    }

    /// Symbol length: occurrences of `0` plus occurrences of `D`.
    pub fn norm(&self) -> usize {
        match self {
            Term::Zero => 1,
            Term::Principal(_, a) => 1 + a.norm(),
            Term::Sum(s) => s.0.iter().map(Term::norm).sum(),
        }
    }

    /// Largest subscript occurring in the term, if any.
    pub fn max_subscript(&self) -> Option<OrderIndex> {
        match self {
            Term::Zero => None,
            Term::Principal(u, a) => Some(a.max_subscript().map_or(*u, |m| m.max(*u))),
            Term::Sum(s) => s.0.iter().filter_map(Term::max_subscript).max(),
        }
    }

    /// Calls `f` on every subscript in the term.
    pub fn all_subscripts(&self, f: &mut impl FnMut(OrderIndex) -> bool) -> bool {
        match self {
            Term::Zero => true,
            Term::Principal(u, a) => f(*u) && a.all_subscripts(f),
            Term::Sum(s) => s.0.iter().all(|p| p.all_subscripts(f)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => f.write_str("0"),
            Term::Principal(u, a) => write!(f, "D{u}({a})"),
            Term::Sum(s) => {
                f.write_str("(")?;
                for (i, p) in s.0.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected character {0:?}")]
    Unexpected(char),
    #[error("expected {expected}, found {found:?}")]
    Expected { expected: &'static str, found: char },
    #[error("a parenthesized sum needs at least two components")]
    SingletonSum,
    #[error("sum components must be principal terms")]
    NonPrincipalPart,
    #[error("subscript does not fit in 32 bits")]
    SubscriptOverflow,
    #[error("trailing input")]
    Trailing,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { position: self.pos, kind }
    }

    fn expect(&mut self, want: char, expected: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => Err(self.err(ParseErrorKind::Expected { expected, found })),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some('D') => self.principal(),
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                let mut parts = vec![self.sum_part()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    parts.push(self.sum_part()?);
                }
                self.expect(')', "',' or ')'")?;
                if parts.len() < 2 {
                    return Err(ParseError { position: open, kind: ParseErrorKind::SingletonSum });
                }
                Ok(Term::Sum(Sum(parts)))
            }
            Some(c) => Err(self.err(ParseErrorKind::Unexpected(c))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn sum_part(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('D') => self.principal(),
            Some('0') | Some('(') => Err(self.err(ParseErrorKind::NonPrincipalPart)),
            Some(found) => Err(self.err(ParseErrorKind::Expected { expected: "principal term", found })),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn principal(&mut self) -> Result<Term, ParseError> {
        self.expect('D', "'D'")?;
        let index = self.index()?;
        self.expect('(', "'('")?;
        let arg = self.term()?;
        self.expect(')', "')'")?;
        Ok(Term::Principal(index, Box::new(arg)))
    }

    fn index(&mut self) -> Result<OrderIndex, ParseError> {
        match self.peek() {
            Some('w') => {
                self.pos += 1;
                Ok(OrderIndex::Omega)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let digits = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
                self.pos += digits;
                self.src[start..self.pos]
                    .parse::<u32>()
                    .map(OrderIndex::Finite)
                    .map_err(|_| ParseError { position: start, kind: ParseErrorKind::SubscriptOverflow })
            }
            Some(found) => Err(self.err(ParseErrorKind::Expected { expected: "subscript", found })),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }
}

pub fn parse(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(p.err(ParseErrorKind::Trailing));
    }
    Ok(t)
}

impl FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
