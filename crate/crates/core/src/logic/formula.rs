//! Formulas of the toy continuous propositional logic.
//!
//! ```text
//! formula := atom | rational
//!          | 'neg' '(' formula ')' | 'half' '(' formula ')'
//!          | 'min' '(' formula ',' formula ')' | 'max' '(' formula ',' formula ')'
//!          | 'dotminus' '(' formula ',' formula ')'
//! ```
//!
//! Rationals are integers, decimals or `p/q` and must lie in `[0, 1]`.
//! Every connective maps `[0,1]^k` into `[0,1]`. `neg`, `min` and `max` are
//! 1-Lipschitz in the sup norm, `half` contracts by 1/2, and `dotminus` is
//! 1-Lipschitz in each argument separately (2 jointly).

use std::fmt;

use num_traits::{One, Zero};

use super::{Language, Structure};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational, Rational};

pub const CONNECTIVES: [&str; 5] = ["neg", "min", "max", "half", "dotminus"];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(usize),
    Const(Rational),
    Neg(Box<Formula>),
    Half(Box<Formula>),
    Min(Box<Formula>, Box<Formula>),
    Max(Box<Formula>, Box<Formula>),
    DotMinus(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn parse(text: &str, lang: &Language) -> Result<Formula> {
        let mut p = Parser { text, pos: 0, lang };
        let f = p.formula()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(Error::syntax(p.pos, "trailing input after formula"));
        }
        Ok(f)
    }

    pub fn half_n(inner: Formula, n: usize) -> Formula {
        (0..n).fold(inner, |f, _| Formula::Half(Box::new(f)))
    }

    /// Exact value `φ^𝔐 ∈ [0, 1]`.
    pub fn eval(&self, m: &Structure) -> Rational {
        match self {
            Formula::Atom(i) => m.values()[*i].clone(),
            Formula::Const(c) => c.clone(),
            Formula::Neg(a) => Rational::one() - a.eval(m),
            Formula::Half(a) => a.eval(m) / Rational::from_integer(2.into()),
            Formula::Min(a, b) => a.eval(m).min(b.eval(m)),
            Formula::Max(a, b) => a.eval(m).max(b.eval(m)),
            Formula::DotMinus(a, b) => (a.eval(m) - b.eval(m)).max(Rational::zero()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Const(_) => 0,
            Formula::Neg(a) | Formula::Half(a) => 1 + a.depth(),
            Formula::Min(a, b) | Formula::Max(a, b) | Formula::DotMinus(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn display<'a>(&'a self, lang: &'a Language) -> impl fmt::Display + 'a {
        Printer { f: self, lang }
    }
}

struct Printer<'a> {
    f: &'a Formula,
    lang: &'a Language,
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f: &'_ Formula| Printer { f, lang: self.lang }.to_string();
        match self.f {
            Formula::Atom(i) => out.write_str(&self.lang.atoms()[*i]),
            Formula::Const(c) => out.write_str(&format_rational(c)),
            Formula::Neg(a) => write!(out, "neg({})", sub(a)),
            Formula::Half(a) => write!(out, "half({})", sub(a)),
            Formula::Min(a, b) => write!(out, "min({}, {})", sub(a), sub(b)),
            Formula::Max(a, b) => write!(out, "max({}, {})", sub(a), sub(b)),
            Formula::DotMinus(a, b) => write!(out, "dotminus({}, {})", sub(a), sub(b)),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    lang: &'a Language,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(Error::syntax(self.pos, format!("expected `{c}`, found `{d}`"))),
            None => Err(Error::syntax(self.pos, format!("expected `{c}`, found end of input"))),
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while self.text[self.pos..].starts_with(&pred) {
            self.pos += 1;
        }
        &self.text[start..self.pos]
    }

    fn formula(&mut self) -> Result<Formula> {
        let start = match self.peek() {
            None => return Err(Error::syntax(self.pos, "expected a formula, found end of input")),
            Some(_) => self.pos,
        };
        let c = self.text[start..].chars().next().unwrap();
        if c.is_ascii_digit() || c == '.' {
            let lit = self.take_while(|c| c.is_ascii_digit() || c == '.' || c == '/').to_string();
            let value = parse_rational(&lit).map_err(|_| Error::syntax(start, format!("malformed number `{lit}`")))?;
            if value < Rational::zero() || value > Rational::one() {
                return Err(Error::syntax(start, format!("constant {lit} is outside [0, 1]")));
            }
            return Ok(Formula::Const(value));
        }
        if !(c.is_ascii_alphabetic() || c == '_') {
            return Err(Error::syntax(start, format!("unexpected character `{c}`")));
        }
        let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
        let unary = |p: &mut Self| -> Result<Box<Formula>> {
            p.expect('(')?;
            let a = p.formula()?;
            p.expect(')')?;
            Ok(Box::new(a))
        };
        let binary = |p: &mut Self| -> Result<(Box<Formula>, Box<Formula>)> {
            p.expect('(')?;
            let a = p.formula()?;
            p.expect(',')?;
            let b = p.formula()?;
            p.expect(')')?;
            Ok((Box::new(a), Box::new(b)))
        };
        Ok(match name.as_str() {
            "neg" => Formula::Neg(unary(self)?),
            "half" => Formula::Half(unary(self)?),
            "min" => {
                let (a, b) = binary(self)?;
                Formula::Min(a, b)
            }
            "max" => {
                let (a, b) = binary(self)?;
                Formula::Max(a, b)
            }
            "dotminus" => {
                let (a, b) = binary(self)?;
                Formula::DotMinus(a, b)
            }
            atom => match self.lang.index_of(atom) {
                Some(i) => Formula::Atom(i),
                None => {
                    return Err(Error::UnknownAtom {
                        name: atom.to_string(),
                        position: start,
                    })
                }
            },
        })
    }
}
