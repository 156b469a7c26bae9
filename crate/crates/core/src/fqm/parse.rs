//! Parser for the form grammar.
//!
//! ```text
//! form  := term (('+' | '⊕') term)*
//! term  := [int '*'] block
//! block := 'q(' int ',' int ')' | 'U(' int ')' | 'N(' int ')' | 'U2' | 'V2'
//!        | 'gram[' orders ';' qdiag ';' offdiag ']'
//! ```
//!
//! `offdiag` lists (e_i, e_j) for i < j in row order. Rationals are `n/d`.

use crate::error::{Error, Result};
use crate::exactmath::ResidueQZ;

use super::block::{Block, BlockExpr, Term};
use super::form::FqForm;

pub fn parse_form(text: &str) -> Result<BlockExpr> {
    let mut p = Parser { src: text, pos: 0 };
    let expr = p.form()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{tok}'")))
        }
    }

    fn peek_int(&mut self) -> bool {
        self.skip_ws();
        self.rest().starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+')
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'-' || bytes[end] == b'+') {
            end += 1;
        }
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        self.src[start..end].parse::<i64>().map(|v| {
            self.pos = end;
            v
        })
        .map_err(|_| self.err("expected an integer"))
    }

    fn positive(&mut self) -> Result<u64> {
        let at = self.pos;
        let v = self.int()?;
        if v < 1 {
            return Err(Error::Syntax { pos: at, msg: format!("expected a positive integer, got {v}") });
        }
        Ok(v as u64)
    }

    fn rational(&mut self) -> Result<ResidueQZ> {
        let num = self.int()?;
        if self.eat("/") {
            let at = self.pos;
            let den = self.int()?;
            if den == 0 {
                return Err(Error::Syntax { pos: at, msg: "zero denominator".into() });
            }
            Ok(ResidueQZ::new(num, den))
        } else {
            Ok(ResidueQZ::new(num, 1))
        }
    }

    fn form(&mut self) -> Result<BlockExpr> {
        let mut terms = vec![self.term()?];
        while self.eat("+") || self.eat("⊕") {
            terms.push(self.term()?);
        }
        Ok(BlockExpr::new(terms))
    }

    fn term(&mut self) -> Result<Term> {
        let mut mult = 1;
        if self.peek_int() {
            let at = self.pos;
            let m = self.int()?;
            if m < 1 {
                return Err(Error::Syntax { pos: at, msg: "multiplicity must be at least 1".into() });
            }
            mult = m as u32;
            self.expect("*")?;
        }
        Ok(Term { mult, block: self.block()? })
    }

    fn block(&mut self) -> Result<Block> {
        self.skip_ws();
        let at = self.pos;
        let located = |e: Error| match e {
            Error::InvalidParameter(msg) => Error::InvalidParameter(format!("{msg} (at byte {at})")),
            other => other,
        };
        if self.eat("q(") {
            let n = self.positive()?;
            self.expect(",")?;
            let a = self.int()?;
            self.expect(")")?;
            Block::cyclic(n, a).map_err(located)
        } else if self.eat("U2") {
            Ok(Block::U2)
        } else if self.eat("V2") {
            Ok(Block::V2)
        } else if self.eat("U(") {
            let p = self.positive()?;
            self.expect(")")?;
            Block::hyperbolic(p).map_err(located)
        } else if self.eat("N(") {
            let p = self.positive()?;
            self.expect(")")?;
            Block::anisotropic(p).map_err(located)
        } else if self.eat("gram[") {
            self.gram().map_err(located)
        } else {
            Err(self.err("expected a block: q(n,a), U(p), N(p), U2, V2 or gram[...]"))
        }
    }

    fn list<T>(&mut self, close: &str, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn gram(&mut self) -> Result<Block> {
        let orders = self.list(";", |p| p.positive())?;
        let qdiag = self.list(";", |p| p.rational())?;
        let off = self.list("]", |p| p.rational())?;
        let r = orders.len();
        if qdiag.len() != r {
            return Err(Error::InvalidParameter(format!("gram: {r} orders but {} q-values", qdiag.len())));
        }
        if off.len() != r * r.saturating_sub(1) / 2 {
            return Err(Error::InvalidParameter(format!(
                "gram: expected {} off-diagonal pairings, got {}",
                r * r.saturating_sub(1) / 2,
                off.len()
            )));
        }
        let mut offdiag = vec![vec![ResidueQZ::ZERO; r]; r];
        let mut it = off.into_iter();
        for i in 0..r {
            for j in i + 1..r {
                offdiag[i][j] = it.next().expect("counted");
            }
        }
        Ok(Block::Raw(FqForm::new(orders, qdiag, offdiag)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_blocks() {
        assert_eq!(parse_form("q(9,1)").unwrap(), BlockExpr::of([Block::Cyclic { p: 3, k: 2, a: 1 }]));
        let e = parse_form("U(5) + 2*q(2,1)").unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[0].block, Block::HypOdd(5));
        assert_eq!(e.terms[1].mult, 2);
        assert_eq!(e.blocks().len(), 3);
        assert_eq!(parse_form(" q( 2 , -1 ) ⊕ V2 ").unwrap().blocks()[0], Block::Cyclic { p: 2, k: 1, a: -1 });
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(parse_form("q(6,1)"), Err(Error::InvalidParameter(m)) if m.contains("prime power")));
        assert!(matches!(parse_form("q(4,2)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(parse_form("U(2)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(parse_form("N(9)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(parse_form("q(9,1) +"), Err(Error::Syntax { pos: 8, .. })));
        assert!(matches!(parse_form("0*U2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_form("W2"), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn raw_forms() {
        let e = parse_form("gram[;;]").unwrap();
        assert_eq!(e.realize().rank(), 0);
        let u = parse_form("gram[2,2;0,0;1/2]").unwrap().realize();
        assert_eq!(u, Block::U2.realize());
        assert!(parse_form("gram[2;1/3;]").is_err());
        assert!(parse_form("gram[2,2;0;1/2]").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["q(9,1) + 2*q(3,2)", "U(5) + N(3) + U2 + V2", "gram[12;7/12;]", "q(2,-1)"] {
            let e = parse_form(text).unwrap();
            assert_eq!(parse_form(&e.to_string()).unwrap(), e);
        }
    }
}
