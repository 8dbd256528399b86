//! A small exact-arithmetic expression language.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := integer | variable
//!          | 'pow' '(' expr ',' expr ')'
//!          | 'mod' '(' expr ',' expr ')'
//!          | 'ite' '(' cond ',' expr ',' expr ')'
//!          | '(' expr ')'
//! cond    := expr ('<' | '<=' | '=' | '>=' | '>') expr
//! ```
//!
//! A rational `p/q` is written as the division of two integers. Sequence
//! expressions use the single variable `n`; rate expressions use `eps`,
//! `maxeta0` and `len`. `pow(a, b)` and `a^b` denote the same node and
//! print as `a^b`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Largest exponent magnitude `pow` will evaluate.
pub const MAX_EXPONENT: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }

    fn holds(self, a: &Rational, b: &Rational) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Eq => a == b,
            CmpOp::Ge => a >= b,
            CmpOp::Gt => a > b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond {
    pub op: CmpOp,
    pub lhs: Box<Expr>,
    pub rhs: Box<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Mod(Box<Expr>, Box<Expr>),
    Ite(Cond, Box<Expr>, Box<Expr>),
}

const KEYWORDS: [&str; 3] = ["pow", "mod", "ite"];

impl Expr {
    pub fn parse(text: &str, vars: &[&str]) -> Result<Expr> {
        let mut p = Parser::new(text, vars)?;
        let e = p.expr()?;
        p.expect_end()?;
        e.validate()?;
        Ok(e)
    }

    /// Rejects divisions, `mod`s and negative powers whose offending operand
    /// is variable-free and evaluates to zero.
    pub fn validate(&self) -> Result<()> {
        match self {
            Expr::Int(_) | Expr::Var(_) => {}
            Expr::Neg(a) => a.validate()?,
            Expr::Bin(_, a, b) | Expr::Mod(a, b) => {
                a.validate()?;
                b.validate()?;
            }
            Expr::Ite(c, a, b) => {
                for e in [&c.lhs, &c.rhs, a, b] {
                    e.validate()?;
                }
            }
        }
        let zero_divisor = match self {
            Expr::Bin(BinOp::Div, _, b) | Expr::Mod(_, b) => b.constant_value()?.is_some_and(|d| d.is_zero()),
            Expr::Bin(BinOp::Pow, a, b) => matches!(
                (a.constant_value()?, b.constant_value()?),
                (Some(base), Some(exp)) if base.is_zero() && exp.is_negative()
            ),
            _ => false,
        };
        if zero_divisor {
            return Err(Error::InvalidExpr(format!("division by zero in `{self}`")));
        }
        Ok(())
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Int(_) => true,
            Expr::Var(_) => false,
            Expr::Neg(a) => a.is_constant(),
            Expr::Bin(_, a, b) | Expr::Mod(a, b) => a.is_constant() && b.is_constant(),
            Expr::Ite(c, a, b) => c.lhs.is_constant() && c.rhs.is_constant() && a.is_constant() && b.is_constant(),
        }
    }

    fn constant_value(&self) -> Result<Option<Rational>> {
        if !self.is_constant() {
            return Ok(None);
        }
        self.eval(&|_| None).map(Some).map_err(Error::InvalidExpr)
    }

    /// Evaluates exactly; `env` resolves variable names.
    pub fn eval(&self, env: &dyn Fn(&str) -> Option<Rational>) -> std::result::Result<Rational, String> {
        Ok(match self {
            Expr::Int(i) => Rational::from_integer(i.clone()),
            Expr::Var(v) => env(v).ok_or_else(|| format!("unbound variable `{v}`"))?,
            Expr::Neg(a) => -a.eval(env)?,
            Expr::Bin(op, a, b) => {
                let x = a.eval(env)?;
                let y = b.eval(env)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y.is_zero() {
                            return Err(format!("division by zero in `{self}`"));
                        }
                        x / y
                    }
                    BinOp::Pow => power(&x, &y)?,
                }
            }
            Expr::Mod(a, b) => {
                let x = a.eval(env)?;
                let y = b.eval(env)?;
                if y.is_zero() {
                    return Err(format!("mod by zero in `{self}`"));
                }
                let q = (&x / &y).floor();
                x - y * q
            }
            Expr::Ite(c, a, b) => {
                if c.op.holds(&c.lhs.eval(env)?, &c.rhs.eval(env)?) {
                    a.eval(env)?
                } else {
                    b.eval(env)?
                }
            }
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Bin(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Expr::Int(i) => write!(f, "{i}")?,
            Expr::Var(v) => f.write_str(v)?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)?;
            }
            Expr::Bin(op, a, b) => {
                let (sym, left, right) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => (" * ", 2, 3),
                    BinOp::Div => (" / ", 2, 3),
                    BinOp::Pow => ("^", 5, 3),
                };
                a.write(f, left)?;
                f.write_str(sym)?;
                b.write(f, right)?;
            }
            Expr::Mod(a, b) => {
                f.write_str("mod(")?;
                a.write(f, 0)?;
                f.write_str(", ")?;
                b.write(f, 0)?;
                f.write_str(")")?;
            }
            Expr::Ite(c, a, b) => {
                f.write_str("ite(")?;
                c.lhs.write(f, 0)?;
                write!(f, " {} ", c.op.symbol())?;
                c.rhs.write(f, 0)?;
                f.write_str(", ")?;
                a.write(f, 0)?;
                f.write_str(", ")?;
                b.write(f, 0)?;
                f.write_str(")")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

fn power(base: &Rational, exp: &Rational) -> std::result::Result<Rational, String> {
    if !exp.is_integer() {
        return Err(format!("non-integer exponent {exp}"));
    }
    let e = exp.to_integer();
    let magnitude = e
        .abs()
        .to_u64()
        .filter(|&m| m <= MAX_EXPONENT)
        .ok_or_else(|| format!("exponent {e} too large"))?;
    if base.is_zero() && e.is_negative() {
        return Err("zero raised to a negative power".into());
    }
    // numerator and denominator stay coprime under powers
    let m = magnitude as usize;
    let result = Rational::new_raw(num_traits::pow(base.numer().clone(), m), num_traits::pow(base.denom().clone(), m));
    Ok(if e.is_negative() { result.recip() } else { result })
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(&'static str),
    End,
}

pub(crate) struct Lexer;

impl Lexer {
    fn tokens(text: &str) -> Result<Vec<(usize, Tok)>> {
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            if c.is_ascii_digit() {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().expect("digits"))));
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            let two = text.get(i..i + 2);
            let sym = match (c, two) {
                (_, Some("<=")) => "<=",
                (_, Some(">=")) => ">=",
                ('+', _) => "+",
                ('-', _) => "-",
                ('*', _) => "*",
                ('/', _) => "/",
                ('^', _) => "^",
                ('(', _) => "(",
                (')', _) => ")",
                (',', _) => ",",
                ('<', _) => "<",
                ('>', _) => ">",
                ('=', _) => "=",
                _ => {
                    return Err(Error::syntax(
                        start,
                        format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                    ))
                }
            };
            i += sym.len();
            out.push((start, Tok::Sym(sym)));
        }
        out.push((text.len(), Tok::End));
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(text: &str, vars: &'a [&'a str]) -> Result<Self> {
        Ok(Parser {
            toks: Lexer::tokens(text)?,
            pos: 0,
            vars,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn unexpected(&self, wanted: &str) -> Error {
        let found = match self.peek() {
            Tok::Int(i) => format!("`{i}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::End => "end of input".to_string(),
        };
        Error::syntax(self.offset(), format!("expected {wanted}, found {found}"))
    }

    fn expect_end(&mut self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => Err(self.unexpected("an operator or end of input")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat("*") {
                BinOp::Mul
            } else if self.eat("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat("^") {
            let exp = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Int(i) => {
                self.bump();
                Ok(Expr::Int(i))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) if KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                self.expect("(")?;
                let e = match name.as_str() {
                    "ite" => {
                        let lhs = self.expr()?;
                        let op = match self.bump() {
                            Tok::Sym("<") => CmpOp::Lt,
                            Tok::Sym("<=") => CmpOp::Le,
                            Tok::Sym("=") => CmpOp::Eq,
                            Tok::Sym(">=") => CmpOp::Ge,
                            Tok::Sym(">") => CmpOp::Gt,
                            _ => {
                                self.pos -= 1;
                                return Err(self.unexpected("a comparison"));
                            }
                        };
                        let rhs = self.expr()?;
                        self.expect(",")?;
                        let then = self.expr()?;
                        self.expect(",")?;
                        let other = self.expr()?;
                        Expr::Ite(
                            Cond {
                                op,
                                lhs: Box::new(lhs),
                                rhs: Box::new(rhs),
                            },
                            Box::new(then),
                            Box::new(other),
                        )
                    }
                    _ => {
                        let a = self.expr()?;
                        self.expect(",")?;
                        let b = self.expr()?;
                        if name == "pow" {
                            Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b))
                        } else {
                            Expr::Mod(Box::new(a), Box::new(b))
                        }
                    }
                };
                self.expect(")")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if self.vars.contains(&name.as_str()) {
                    self.bump();
                    Ok(Expr::Var(name))
                } else {
                    Err(Error::syntax(at, format!("unknown identifier `{name}`")))
                }
            }
            _ => Err(self.unexpected("a number, variable, `(` or function")),
        }
    }
}

/// A closed-form sequence `n ↦ x_n` over the variable `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceExpr(Expr);

impl SequenceExpr {
    pub fn parse(text: &str) -> Result<Self> {
        Expr::parse(text, &["n"]).map(SequenceExpr)
    }

    pub fn expr(&self) -> &Expr {
        &self.0
    }

    pub fn eval(&self, n: usize) -> Result<Rational> {
        let value = Rational::from_integer(BigInt::from(n));
        self.0
            .eval(&|v| (v == "n").then(|| value.clone()))
            .map_err(|message| Error::Eval { index: n, message })
    }

    pub fn values(&self, horizon: usize) -> Result<Vec<Rational>> {
        (0..horizon).map(|n| self.eval(n)).collect()
    }
}

impl fmt::Display for SequenceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for SequenceExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// `⌈value⌉` as a `u64`, saturating; used when an expression must yield a
/// natural number.
pub(crate) fn ceil_to_u64(value: &Rational) -> u64 {
    if value.is_negative() {
        return 0;
    }
    let c = value.ceil().to_integer();
    c.to_u64().unwrap_or(u64::MAX)
}
