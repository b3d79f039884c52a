//! Rational expressions in one variable `i`: integers, `+ - * /`, integer
//! powers `^`, unary minus and parentheses.

use std::fmt;
use std::str::FromStr;

use num::Zero;

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Var,
    Const(Q),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// The exponent must evaluate to an integer.
    Pow(Box<Expr>, Box<Expr>),
    /// The source text, kept for printing.
    Source(String, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, i: u32) -> Result<Q> {
        Ok(match self {
            Expr::Var => Q::from_integer(i.into()),
            Expr::Const(q) => q.clone(),
            Expr::Neg(a) => -a.eval(i)?,
            Expr::Add(a, b) => a.eval(i)? + b.eval(i)?,
            Expr::Sub(a, b) => a.eval(i)? - b.eval(i)?,
            Expr::Mul(a, b) => a.eval(i)? * b.eval(i)?,
            Expr::Div(a, b) => {
                let d = b.eval(i)?;
                if d.is_zero() {
                    return Err(Error::domain(format!("division by zero at i = {i}")));
                }
                a.eval(i)? / d
            }
            Expr::Pow(a, k) => {
                let base = a.eval(i)?;
                let k = k.eval(i)?;
                let k: i32 = match (k.is_integer(), k.to_integer().try_into()) {
                    (true, Ok(k)) => k,
                    _ => {
                        return Err(Error::domain(format!(
                            "exponent {k} at i = {i} is not a small integer"
                        )))
                    }
                };
                if base.is_zero() && k < 0 {
                    return Err(Error::domain(format!("division by zero at i = {i}")));
                }
                num::pow::Pow::pow(base, k)
            }
            Expr::Source(_, e) => e.eval(i)?,
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Source(s, _) => f.write_str(s),
            Expr::Var => f.write_str("i"),
            Expr::Const(q) => write!(f, "{q}"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a})+({b})"),
            Expr::Sub(a, b) => write!(f, "({a})-({b})"),
            Expr::Mul(a, b) => write!(f, "({a})*({b})"),
            Expr::Div(a, b) => write!(f, "({a})/({b})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.error("expr", "unexpected trailing input"));
        }
        Ok(Expr::Source(s.trim().to_string(), Box::new(e)))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error(&self, rule: &'static str, message: &str) -> Error {
        let token = self.src[self.pos..]
            .chars()
            .next()
            .map_or_else(|| "end of input".to_string(), String::from);
        Error::parse(rule, self.pos, token, message)
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut acc = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if c == '+' {
                Expr::Add(Box::new(acc), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(acc), Box::new(rhs))
            };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                Expr::Mul(Box::new(acc), Box::new(rhs))
            } else {
                Expr::Div(Box::new(acc), Box::new(rhs))
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let exponent = self.unary()?;
        Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('i') => {
                self.pos += 1;
                Ok(Expr::Var)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(self.error("atom", "expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n: num::BigInt = self.digits().parse().expect("digits");
                Ok(Expr::Const(Q::from_integer(n)))
            }
            _ => Err(self.error("atom", "expected `i`, an integer or `(`")),
        }
    }
}
