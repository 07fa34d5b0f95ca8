//! Closed expression grammar for generators, multipliers and weights.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exp)?
//! exp    := INT | '(' INT '/' INT ')'
//! atom   := NUMBER | 'i' | 'z' | 'x' | '(' expr ')'
//!         | 'exp' '(' expr ')' | 'abs' '(' expr ')'
//!         | 'mobius' '(' SIGNED ',' SIGNED ')' | 'kernel' '(' SIGNED ',' SIGNED ')'
//! ```
//!
//! Fractional powers of real arguments take the real root (so `x^(1/3)` is
//! odd); for non-real arguments the principal branch is used.

use std::fmt;

use crate::holo::{Domain, FnKind, HoloFn};
use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Int(u32),
    Frac(u32, u32),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    I,
    /// The variable, spelled `z` or `x`.
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    Exp(Box<Expr>),
    Abs(Box<Expr>),
    Mobius(f64, f64),
    Kernel(f64, f64),
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Int(n) => write!(f, "{n}"),
            Exponent::Frac(p, q) => write!(f, "({p}/{q})"),
        }
    }
}

/// Fully parenthesized form; parsing it gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::I => write!(f, "i"),
            Expr::Var(c) => write!(f, "{c}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, e) => write!(f, "({a}^{e})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Mobius(re, im) => write!(f, "mobius({re}, {im})"),
            Expr::Kernel(re, im) => write!(f, "kernel({re}, {im})"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Expr { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e = if self.eat(b'(') {
            let p = self.integer()?;
            self.expect(b'/')?;
            let at = self.pos;
            let q = self.integer()?;
            if q == 0 {
                return err(at, "zero denominator in exponent");
            }
            self.expect(b')')?;
            Exponent::Frac(p, q)
        } else {
            Exponent::Int(self.integer()?)
        };
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn integer(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match s.parse() {
            Ok(v) => Ok(v),
            Err(_) => err(start, "expected an integer exponent"),
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos > s
        };
        let int = digits(self);
        let mut frac = false;
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            frac = digits(self);
        }
        if !int && !frac {
            return err(start, "expected a number");
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !digits(self) {
                self.pos = save;
            }
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => err(start, format!("invalid number '{s}'")),
        }
    }

    fn signed(&mut self) -> Result<f64> {
        let neg = self.eat(b'-');
        let v = self.number()?;
        Ok(if neg { -v } else { v })
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => err(self.pos, "unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Expr::Num(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                match self.ident() {
                    "i" => Ok(Expr::I),
                    "z" => Ok(Expr::Var('z')),
                    "x" => Ok(Expr::Var('x')),
                    name @ ("exp" | "abs") => {
                        self.expect(b'(')?;
                        let a = Box::new(self.expr()?);
                        self.expect(b')')?;
                        Ok(if name == "exp" { Expr::Exp(a) } else { Expr::Abs(a) })
                    }
                    name @ ("mobius" | "kernel") => {
                        self.expect(b'(')?;
                        let re = self.signed()?;
                        self.expect(b',')?;
                        let im = self.signed()?;
                        self.expect(b')')?;
                        Ok(if name == "mobius" {
                            Expr::Mobius(re, im)
                        } else {
                            Expr::Kernel(re, im)
                        })
                    }
                    other => err(start, format!("unknown identifier '{other}'")),
                }
            }
            Some(c) => err(self.pos, format!("unexpected '{}'", c as char)),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return err(p.pos, "trailing input");
    }
    Ok(e)
}

fn real_root(x: f64, p: u32, q: u32) -> f64 {
    let r = if q % 2 == 1 {
        x.signum() * x.abs().powf(1.0 / q as f64)
    } else {
        x.powf(1.0 / q as f64)
    };
    r.powi(p as i32)
}

impl Expr {
    pub fn eval(&self, z: Complex) -> Complex {
        match self {
            Expr::Num(v) => Complex::new(*v, 0.0),
            Expr::I => Complex::new(0.0, 1.0),
            Expr::Var(_) => z,
            Expr::Neg(a) => -a.eval(z),
            Expr::Add(a, b) => a.eval(z) + b.eval(z),
            Expr::Sub(a, b) => a.eval(z) - b.eval(z),
            Expr::Mul(a, b) => a.eval(z) * b.eval(z),
            Expr::Div(a, b) => a.eval(z) / b.eval(z),
            Expr::Pow(a, Exponent::Int(n)) => a.eval(z).powu(*n),
            Expr::Pow(a, Exponent::Frac(p, q)) => {
                let w = a.eval(z);
                if w.im == 0.0 {
                    Complex::new(real_root(w.re, *p, *q), 0.0)
                } else {
                    w.powf(*p as f64 / *q as f64)
                }
            }
            Expr::Exp(a) => a.eval(z).exp(),
            Expr::Abs(a) => Complex::new(a.eval(z).norm(), 0.0),
            Expr::Mobius(re, im) => {
                let a = Complex::new(*re, *im);
                (a - z) / (1.0 - a.conj() * z)
            }
            Expr::Kernel(re, im) => 1.0 / (1.0 - Complex::new(*re, -*im) * z),
        }
    }

    /// Turns the expression into a function on `domain`.
    pub fn to_holofn(&self, domain: Domain) -> HoloFn {
        let e = self.clone();
        HoloFn::new(self.to_string(), domain, FnKind::ClosedForm, move |z| e.eval(z))
    }
}

/// Parses `src` into a function on `domain`, labelled with the source text.
pub fn parse_fn(src: &str, domain: Domain) -> Result<HoloFn> {
    Ok(parse(src)?.to_holofn(domain).relabel(src.trim()))
}
