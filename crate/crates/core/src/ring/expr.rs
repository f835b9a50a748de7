//! A tiny arithmetic grammar over a context:
//! `+ - * ^ ( )`, integer literals, variable names, inverse aliases, `rho`, `eta`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{RingCtx, RingElem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Int(lit.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} at {i}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a Arc<RingCtx>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RingElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RingElem> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RingElem> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RingElem> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: u64 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("exponent must be a non-negative integer literal".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RingElem> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(self.ctx.int(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(v) = self.ctx.var_index(&name) {
                    return Ok(self.ctx.var_at(v));
                }
                if let Some(a) = self.ctx.alias(&name) {
                    return Ok(a);
                }
                match name.as_str() {
                    "rho" => Ok(self.ctx.rho()),
                    "eta" => Ok(self.ctx.eta()),
                    _ => Err(Error::Parse(format!("unknown name {name}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse and evaluate `s` in `ctx`.
pub fn parse_elem(ctx: &Arc<RingCtx>, s: &str) -> Result<RingElem> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, ctx };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Prime;
    use crate::ring::BaseRing;

    #[test]
    fn grammar() {
        let p = Prime::new(3).unwrap();
        let ctx = RingCtx::polynomial_ring(BaseRing::integers(p), &["u", "v"]).unwrap();
        let a = parse_elem(&ctx, "(1 + u*eta^3) - -2*v^2").unwrap();
        let u = ctx.var("u").unwrap();
        let v = ctx.var("v").unwrap();
        let expect = &(&ctx.one() + &(&u * &ctx.eta_pow(3))) + &v.pow(2).scale_int(2);
        assert_eq!(a, expect);
        assert_eq!(parse_elem(&ctx, "eta^2").unwrap(), parse_elem(&ctx, "-3*rho").unwrap());
        assert!(parse_elem(&ctx, "u +").is_err());
        assert!(parse_elem(&ctx, "w").is_err());
        assert!(parse_elem(&ctx, "u $ v").is_err());
        assert!(parse_elem(&ctx, "(u").is_err());
    }
}
