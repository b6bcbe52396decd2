//! Text form of group ring elements and matrices.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (['*'] factor)*
//! factor := atom ['^' signed-int]
//! atom   := int | var | '(' expr ')'
//! matrix := '[' row (',' row)* ']'    row := '[' expr (',' expr)* ']'
//! ```
//!
//! Variables are `t1`..`t9`, with `t` and `x` naming `t1`, `y` naming `t2`
//! and `z` naming `t3`. Products are evaluated left to right in the group
//! law, so over the Heisenberg group `x*y` and `y*x` differ (`x*y = y*x*z`).
//! The printer writes terms in decreasing exponent order and is inverse
//! to the parser on its output.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::groupring::{Exponent, Law, LaurentPoly, PolyMatrix, RingMatrix, MAX_VARS};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            b't' => {
                if i + 1 < bytes.len() && (b'1'..=b'9').contains(&bytes[i + 1]) {
                    i += 2;
                    if i < bytes.len() && bytes[i].is_ascii_digit() {
                        return Err(syntax(start, "variable index out of range t1..t9"));
                    }
                    out.push((start, Tok::Var((bytes[i - 1] - b'0') as usize)));
                    continue;
                }
                Tok::Var(1)
            }
            b'x' => Tok::Var(1),
            b'y' => Tok::Var(2),
            b'z' => Tok::Var(3),
            _ => return Err(syntax(start, format!("unexpected character {:?}", c as char))),
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    Int(BigInt),
    Var(usize),
    Sum(Vec<(bool, Node)>),
    Product(Vec<Node>),
    Power(Box<Node>, i64),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    max_var: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.here(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            terms.push((negative, self.term()?));
            negative = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(Node::Sum(terms))
    }

    fn term(&mut self) -> Result<Node> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(Tok::Int(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(Node::Product(factors))
    }

    fn factor(&mut self) -> Result<Node> {
        let atom = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(atom);
        }
        self.pos += 1;
        let at = self.here();
        let negative = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let Some(Tok::Int(k)) = self.peek().cloned() else {
            return Err(syntax(self.here(), "expected integer exponent"));
        };
        self.pos += 1;
        let k: i64 = k.try_into().map_err(|_| syntax(at, "exponent too large"))?;
        if k > i32::MAX as i64 / 4 {
            return Err(syntax(at, "exponent too large"));
        }
        Ok(Node::Power(Box::new(atom), if negative { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Node> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Node::Int(n))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                self.max_var = self.max_var.max(i);
                Ok(Node::Var(i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(syntax(at, "expected a number, a variable or '('")),
        }
    }
}

fn eval(node: &Node, law: Law) -> Result<LaurentPoly> {
    Ok(match node {
        Node::Int(n) => LaurentPoly::constant(law, n.clone()),
        Node::Var(i) => LaurentPoly::monomial(law, Exponent::unit(i - 1), BigInt::one()),
        Node::Sum(terms) => {
            let mut acc = LaurentPoly::zero(law);
            for (neg, t) in terms {
                let v = eval(t, law)?;
                acc = if *neg { acc.try_sub(&v)? } else { acc.try_add(&v)? };
            }
            acc
        }
        Node::Product(fs) => {
            let mut acc = LaurentPoly::one(law);
            for f in fs {
                acc = acc.try_mul(&eval(f, law)?)?;
            }
            acc
        }
        Node::Power(base, k) => {
            let b = eval(base, law)?;
            let b = if *k < 0 {
                // Only monomials with coefficient +-1 are invertible.
                match b.terms().next() {
                    Some((e, c)) if b.len() == 1 && c.abs().is_one() => {
                        LaurentPoly::monomial(law, law.inverse(e), c.clone())
                    }
                    _ => return Err(syntax(0, "negative power of a non-invertible element")),
                }
            } else {
                b
            };
            let mut acc = LaurentPoly::one(law);
            for _ in 0..k.unsigned_abs() {
                acc = acc.try_mul(&b)?;
            }
            acc
        }
    })
}

fn check_law(law: Law, max_var: usize) -> Result<()> {
    if max_var > law.dim() {
        return Err(Error::DimensionInconsistent(format!(
            "variable t{max_var} used with a group of dimension {}",
            law.dim()
        )));
    }
    Ok(())
}

fn infer_law(law: Option<Law>, max_var: usize) -> Law {
    law.unwrap_or_else(|| Law::abelian(max_var.clamp(1, MAX_VARS)))
}

fn parser(text: &str) -> Result<Parser> {
    Ok(Parser { toks: tokenize(text)?, pos: 0, end: text.len(), max_var: 0 })
}

/// Parses a single group ring element. Without an explicit law the group
/// is Z^d with `d` the largest variable index used (at least 1).
pub fn parse_poly(text: &str, law: Option<Law>) -> Result<LaurentPoly> {
    let mut p = parser(text)?;
    if p.toks.is_empty() {
        return Err(syntax(0, "empty input"));
    }
    let node = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.here(), "unexpected trailing input"));
    }
    let law = infer_law(law, p.max_var);
    check_law(law, p.max_var)?;
    eval(&node, law)
}

/// Parses a matrix `[[..], ..]` or a single element (a 1x1 matrix).
pub fn parse_matrix(text: &str, law: Option<Law>) -> Result<PolyMatrix> {
    let mut p = parser(text)?;
    if p.peek() != Some(&Tok::LBracket) {
        return Ok(RingMatrix::scalar(parse_poly(text, law)?));
    }
    p.pos += 1;
    let mut rows: Vec<Vec<Node>> = Vec::new();
    loop {
        p.expect(Tok::LBracket, "'['")?;
        let mut row = vec![p.expr()?];
        while p.peek() == Some(&Tok::Comma) {
            p.pos += 1;
            row.push(p.expr()?);
        }
        p.expect(Tok::RBracket, "']'")?;
        rows.push(row);
        match p.peek() {
            Some(Tok::Comma) => p.pos += 1,
            _ => break,
        }
    }
    p.expect(Tok::RBracket, "']'")?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.here(), "unexpected trailing input"));
    }
    let r = rows.len();
    if rows.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionInconsistent(format!("matrix with {r} rows is not square")));
    }
    let law = infer_law(law, p.max_var);
    check_law(law, p.max_var)?;
    let entries = rows.iter().flatten().map(|n| eval(n, law)).collect::<Result<Vec<_>>>()?;
    RingMatrix::new(r, entries)
}

fn monomial_text(law: Law, e: &Exponent) -> String {
    let power = |name: &str, k: i64| match k {
        1 => name.to_string(),
        k => format!("{name}^{k}"),
    };
    let parts: Vec<String> = match law {
        Law::Abelian { d: 1 } => (e.0[0] != 0).then(|| power("t", e.0[0] as i64)).into_iter().collect(),
        Law::Abelian { d } => {
            (0..d).filter(|&i| e.0[i] != 0).map(|i| power(&format!("t{}", i + 1), e.0[i] as i64)).collect()
        }
        Law::Heisenberg => {
            let (a, b, c) = (e.0[0] as i64, e.0[1] as i64, e.0[2] as i64);
            [("x", a), ("y", b), ("z", c - a * b)].iter().filter(|(_, k)| *k != 0).map(|(n, k)| power(n, *k)).collect()
        }
    };
    parts.join("*")
}

/// Canonical text of an element.
pub fn print_poly(f: &LaurentPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in f.terms().rev().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mono = monomial_text(f.law(), e);
        let mag = c.abs();
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

/// Canonical text of a matrix; a 1x1 matrix prints as its entry.
pub fn print_matrix(f: &PolyMatrix) -> String {
    let r = f.size();
    if r == 1 {
        return print_poly(f.get(0, 0));
    }
    let rows: Vec<String> =
        (0..r).map(|i| format!("[{}]", (0..r).map(|j| print_poly(f.get(i, j))).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}
