//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-'? atom ('^' uint)?
//! atom   := rational | name | '(' expr ')'
//! ```
//!
//! A rational literal is an integer optionally followed by `/` and another
//! integer. Power binds tighter than unary minus, so `-q^2` is `-(q^2)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{MultiPoly, Rational, Vars};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn to_poly(&self, vars: &Vars) -> Result<MultiPoly> {
        Ok(match self {
            Expr::Num(q) => MultiPoly::constant(vars, q.clone()),
            Expr::Var(name) => {
                let i = vars
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                MultiPoly::var(vars, i)
            }
            Expr::Neg(e) => -&e.to_poly(vars)?,
            Expr::Add(a, b) => &a.to_poly(vars)? + &b.to_poly(vars)?,
            Expr::Sub(a, b) => &a.to_poly(vars)? - &b.to_poly(vars)?,
            Expr::Mul(a, b) => &a.to_poly(vars)? * &b.to_poly(vars)?,
            Expr::Pow(a, e) => a.to_poly(vars)?.pow(*e),
        })
    }

    /// Names referenced by the expression, in order of first appearance.
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.collect_names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str, line0: usize, col0: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (line0, col0);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            column += 1;
            out.push(Spanned {
                tok,
                line: l,
                column: col,
            });
        } else if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push(Spanned {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l,
                column: col,
            });
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push(Spanned {
                tok: Tok::Name(s),
                line: l,
                column: col,
            });
        } else {
            return Err(Error::Syntax {
                line: l,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    return Err(
                        self.error_here("division is only allowed inside a rational literal such as 1/2")
                    )
                }
                Tok::Name(_) | Tok::Int(_) | Tok::LParen => {
                    return Err(self.error_here("missing operator; products need an explicit `*`"))
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.next();
            let inner = self.power()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let exp = self.exponent()?;
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn exponent(&mut self) -> Result<u32> {
        let start = self.pos;
        let value = match self.peek() {
            Tok::Int(_) => match self.next().tok {
                Tok::Int(n) => Rational::from_integer(n),
                _ => unreachable!(),
            },
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect_rparen()?;
                match constant_value(&e) {
                    Some(v) => v,
                    None => {
                        self.pos = start;
                        return Err(self.error_here("exponent must be a non-negative integer"));
                    }
                }
            }
            Tok::Minus => return Err(self.error_here("negative exponent")),
            _ => return Err(self.error_here("expected an exponent after `^`")),
        };
        self.pos = self.pos.max(start);
        if !value.is_integer() {
            let t = &self.toks[start];
            return Err(Error::Syntax {
                line: t.line,
                column: t.column,
                message: format!("non-integer exponent {value}"),
            });
        }
        let n = value.to_integer();
        if n < BigInt::zero() {
            let t = &self.toks[start];
            return Err(Error::Syntax {
                line: t.line,
                column: t.column,
                message: format!("negative exponent {n}"),
            });
        }
        n.to_u32().ok_or_else(|| {
            let t = &self.toks[start];
            Error::Syntax {
                line: t.line,
                column: t.column,
                message: "exponent too large".into(),
            }
        })
    }

    fn expect_rparen(&mut self) -> Result<()> {
        if *self.peek() == Tok::RParen {
            self.next();
            Ok(())
        } else {
            Err(self.error_here("expected `)`"))
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                if *self.peek() == Tok::Slash {
                    if let Tok::Int(d) = &self.toks[self.pos + 1].tok {
                        let d = d.clone();
                        if d.is_zero() {
                            self.next();
                            return Err(self.error_here("zero denominator"));
                        }
                        self.next();
                        self.next();
                        return Ok(Expr::Num(Rational::new(n, d)));
                    }
                }
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Tok::Name(s) => {
                self.next();
                Ok(Expr::Var(s))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Eof => Err(self.error_here("unexpected end of input")),
            other => Err(self.error_here(format!("unexpected token {other:?}"))),
        }
    }
}

fn constant_value(e: &Expr) -> Option<Rational> {
    Some(match e {
        Expr::Num(q) => q.clone(),
        Expr::Var(_) => return None,
        Expr::Neg(a) => -constant_value(a)?,
        Expr::Add(a, b) => constant_value(a)? + constant_value(b)?,
        Expr::Sub(a, b) => constant_value(a)? - constant_value(b)?,
        Expr::Mul(a, b) => constant_value(a)? * constant_value(b)?,
        Expr::Pow(a, k) => num_traits::pow(constant_value(a)?, *k as usize),
    })
}

/// Parses `src` into an AST. Positions in errors are reported relative to
/// `(line, column)` of the first character.
pub fn parse_ast_at(src: &str, line: usize, column: usize) -> Result<Expr> {
    let toks = lex(src, line, column)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error_here("trailing input"));
    }
    Ok(e)
}

pub fn parse_ast(src: &str) -> Result<Expr> {
    parse_ast_at(src, 1, 1)
}

pub fn parse_expr(src: &str, vars: &Vars) -> Result<MultiPoly> {
    parse_ast(src)?.to_poly(vars)
}

pub fn print_expr(p: &MultiPoly) -> String {
    p.to_string()
}
