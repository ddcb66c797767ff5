//! Row predicates: `column op constant` joined by `AND`.
//!
//! Operators are `=`, `≠`, `<`, `≤`, `>`, `≥` and the ASCII forms `!=`,
//! `<=`, `>=`. Constants compare numerically when both sides parse as
//! numbers and as strings otherwise; they may be quoted with `'` or `"`.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Op {
    fn holds(self, ord: Ordering) -> bool {
        match self {
            Op::Eq => ord == Ordering::Equal,
            Op::Ne => ord != Ordering::Equal,
            Op::Lt => ord == Ordering::Less,
            Op::Le => ord != Ordering::Greater,
            Op::Gt => ord == Ordering::Greater,
            Op::Ge => ord != Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub column: String,
    pub op: Op,
    pub constant: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub terms: Vec<Comparison>,
}

const OPS: [(&str, Op); 9] = [
    ("<=", Op::Le),
    (">=", Op::Ge),
    ("!=", Op::Ne),
    ("≤", Op::Le),
    ("≥", Op::Ge),
    ("≠", Op::Ne),
    ("<", Op::Lt),
    (">", Op::Gt),
    ("=", Op::Eq),
];

fn split_and(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut rest = text;
    loop {
        let found = rest
            .char_indices()
            .find(|&(i, _)| {
                let tail = &rest[i..];
                tail.get(..5)
                    .is_some_and(|h| h.eq_ignore_ascii_case(" and "))
            })
            .map(|(i, _)| i);
        match found {
            Some(i) => {
                parts.push(&rest[..i]);
                rest = &rest[i + 5..];
            }
            None => {
                parts.push(rest);
                return parts;
            }
        }
    }
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    for q in ['\'', '"'] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            return &s[1..s.len() - 1];
        }
    }
    s
}

impl Predicate {
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for part in split_and(text) {
            let part = part.trim();
            let (at, sym, op) = OPS
                .iter()
                .filter_map(|(sym, op)| part.find(sym).map(|at| (at, *sym, *op)))
                .min_by_key(|(at, sym, _)| (*at, usize::MAX - sym.len()))
                .ok_or_else(|| Error::Dataset(format!("no comparison operator in `{part}`")))?;
            let column = part[..at].trim();
            let constant = unquote(&part[at + sym.len()..]);
            if column.is_empty() || constant.is_empty() {
                return Err(Error::Dataset(format!("malformed comparison `{part}`")));
            }
            terms.push(Comparison {
                column: column.to_string(),
                op,
                constant: constant.to_string(),
            });
        }
        Ok(Predicate { terms })
    }

    /// Checks that every referenced column exists.
    pub fn check_columns(&self, header: &[String]) -> Result<()> {
        for t in &self.terms {
            if !header.iter().any(|h| h == &t.column) {
                return Err(Error::Dataset(format!("unknown column `{}`", t.column)));
            }
        }
        Ok(())
    }

    pub fn eval(&self, header: &[String], row: &[String]) -> bool {
        self.terms.iter().all(|t| {
            let i = header.iter().position(|h| h == &t.column).expect("checked column");
            let cell = row[i].trim();
            let ord = match (cell.parse::<f64>(), t.constant.parse::<f64>()) {
                (Ok(a), Ok(b)) => a.partial_cmp(&b).unwrap_or(Ordering::Equal),
                _ => cell.cmp(t.constant.as_str()),
            };
            t.op.holds(ord)
        })
    }
}
