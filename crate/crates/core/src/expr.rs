//! Parser for exact literals and polynomials in the basic invariants.
//!
//! Grammar: integers, `zeta(N)`, the variables `X`, `Y`, `Z`, parentheses, binary `+ - * /`,
//! unary minus and `^` with an integer exponent. Division is only by constants, so `a/b` is a
//! rational literal. Negative exponents are allowed on constants.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::arith::{lcm_u32, CycloField, CycloNum, Rational};
use crate::error::{Error, Result};
use crate::invariants::XyzPoly;

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Zeta(u32),
    Var(usize),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Pow(Box<Node>, i64),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

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

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn small(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let n = self.digits()?;
        let n: i64 = match i64::try_from(n) {
            Ok(v) => v,
            Err(_) => return self.err("exponent too large"),
        };
        Ok(if neg { -n } else { n })
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => '+',
                Some(b'-') => '-',
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => '*',
                Some(b'/') => '/',
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat(b'-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = if self.eat(b'(') {
                let e = self.small()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                e
            } else {
                self.small()?
            };
            return Ok(Node::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Node::Int(self.digits()?)),
            Some(b'X') => {
                self.pos += 1;
                Ok(Node::Var(0))
            }
            Some(b'Y') => {
                self.pos += 1;
                Ok(Node::Var(1))
            }
            Some(b'Z') => {
                self.pos += 1;
                Ok(Node::Var(2))
            }
            Some(b'z') if self.src[self.pos..].starts_with(b"zeta") => {
                self.pos += 4;
                if !self.eat(b'(') {
                    return self.err("expected '(' after zeta");
                }
                let n = self.small()?;
                if n < 1 || n > 10_000 {
                    return self.err("zeta order must be between 1 and 10000");
                }
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(Node::Zeta(n as u32))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse(src: &str) -> Result<Node> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let node = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(node)
}

fn field_order(n: &Node) -> u32 {
    match n {
        Node::Int(_) | Node::Var(_) => 1,
        Node::Zeta(k) => *k,
        Node::Neg(a) | Node::Pow(a, _) => field_order(a),
        Node::Bin(_, a, b) => lcm_u32(field_order(a), field_order(b)),
    }
}

fn has_vars(n: &Node) -> bool {
    match n {
        Node::Var(_) => true,
        Node::Int(_) | Node::Zeta(_) => false,
        Node::Neg(a) | Node::Pow(a, _) => has_vars(a),
        Node::Bin(_, a, b) => has_vars(a) || has_vars(b),
    }
}

fn as_constant(p: &XyzPoly) -> Option<CycloNum> {
    if p.is_zero() {
        return Some(p.field().zero());
    }
    if p.terms().count() == 1 {
        p.constant_term().cloned()
    } else {
        None
    }
}

fn eval(n: &Node, f: &Arc<CycloField>) -> Result<XyzPoly> {
    Ok(match n {
        Node::Int(v) => XyzPoly::constant(f.from_rational(Rational::from_integer(v.clone()))),
        Node::Zeta(k) => XyzPoly::constant(f.root_of_unity((f.order() / k) as i64)),
        Node::Var(i) => XyzPoly::var(f, *i),
        Node::Neg(a) => eval(a, f)?.neg(),
        Node::Bin(op, a, b) => {
            let (x, y) = (eval(a, f)?, eval(b, f)?);
            match op {
                '+' => x.add(&y),
                '-' => x.sub(&y),
                '*' => x.mul(&y),
                _ => {
                    let c = as_constant(&y)
                        .ok_or_else(|| Error::Invalid("division by a non-constant".into()))?;
                    x.scale(&c.invert()?)
                }
            }
        }
        Node::Pow(a, e) => {
            let x = eval(a, f)?;
            if *e >= 0 {
                x.pow(*e as u32)
            } else {
                let c = as_constant(&x)
                    .ok_or_else(|| Error::Invalid("negative power of a non-constant".into()))?;
                XyzPoly::constant(c.invert()?.pow(e.unsigned_abs() as u32))
            }
        }
    })
}

/// Parse an exact number such as `3/2`, `-1`, or `1 + zeta(3)^2`.
pub fn parse_number(src: &str) -> Result<CycloNum> {
    let node = parse(src)?;
    if has_vars(&node) {
        return Err(Error::Parse {
            pos: 0,
            msg: "a number cannot contain X, Y or Z".into(),
        });
    }
    let f = CycloField::new(field_order(&node));
    let p = eval(&node, &f)?;
    Ok(as_constant(&p).expect("no variables"))
}

/// Parse a polynomial in X, Y, Z with exact coefficients.
pub fn parse_xyz(src: &str) -> Result<XyzPoly> {
    let node = parse(src)?;
    eval(&node, &CycloField::new(field_order(&node)))
}
