//! Recursive-descent parser for type expressions.
//!
//! ```text
//! term    := clause ('|' clause)*
//! clause  := literal ('&' literal)*
//! literal := NAME | '@' ID | '~@' ID | '(' term ')' | BOT | TOP
//! ```
//!
//! The result is an unnormalized list of clauses; parenthesized sub-terms are
//! distributed over the enclosing meet.

use super::{Clause, Context, Literal};
use crate::error::{Error, Result};

pub(super) fn parse_term(ctx: &Context, text: &str) -> Result<Vec<Clause>> {
    let mut p = Parser {
        ctx,
        src: text,
        pos: 0,
    };
    let out = p.term()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.peek_char().unwrap_or(' '))));
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a Context,
    src: &'a str,
    pos: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\'' | ':')
}

impl<'a> Parser<'a> {
    fn error(&self, message: String) -> Error {
        Error::Parse {
            pos: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek_char() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str)> {
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if is_ident_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.error("expected an identifier".into()));
        }
        Ok((start, &self.src[start..self.pos]))
    }

    fn term(&mut self) -> Result<Vec<Clause>> {
        let mut out = self.clause()?;
        while self.eat('|') {
            out.extend(self.clause()?);
        }
        Ok(out)
    }

    fn clause(&mut self) -> Result<Vec<Clause>> {
        let mut acc = vec![Clause::EMPTY];
        loop {
            let factor = self.literal()?;
            let mut next = Vec::with_capacity(acc.len() * factor.len());
            for a in &acc {
                for b in &factor {
                    next.push(a.meet(b));
                }
            }
            acc = next;
            if !self.eat('&') {
                return Ok(acc);
            }
        }
    }

    fn literal(&mut self) -> Result<Vec<Clause>> {
        self.skip_ws();
        match self.peek_char() {
            Some('(') => {
                self.pos += 1;
                let inner = self.term()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`".into()));
                }
                Ok(inner)
            }
            Some('@') => {
                self.pos += 1;
                let (at, id) = self.ident()?;
                let i = self.point(at, id)?;
                Ok(vec![self.ctx.clause(&[Literal::Pos(i)])?])
            }
            Some('~') => {
                self.pos += 1;
                if self.peek_char() != Some('@') {
                    return Err(self.error("negation applies only to point literals (`~@id`)".into()));
                }
                self.pos += 1;
                let (at, id) = self.ident()?;
                let i = self.point(at, id)?;
                Ok(vec![self.ctx.clause(&[Literal::Neg(i)])?])
            }
            Some(c) if is_ident_char(c) => {
                let (at, name) = self.ident()?;
                match name {
                    "BOT" => Ok(Vec::new()),
                    "TOP" => Ok(vec![Clause::EMPTY]),
                    _ => {
                        let i = self.ctx.poset.index_of(name).ok_or_else(|| {
                            Error::Parse {
                                pos: at,
                                message: format!("unknown generator `{name}`"),
                            }
                        })?;
                        Ok(vec![self.ctx.clause(&[Literal::Gen(i)])?])
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input".into())),
        }
    }

    fn point(&self, at: usize, id: &str) -> Result<usize> {
        self.ctx
            .point_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Parse {
                pos: at,
                message: format!("unknown point `{id}`"),
            })
    }
}
