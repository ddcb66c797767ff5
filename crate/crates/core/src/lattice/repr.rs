//! JSON encoding of terms:
//! `{"clauses":[[{"gen":"anc"},{"pos":"W"},{"neg":"C"}], ...]}`, with bottom as
//! `{"clauses":[]}` and top as `{"top":true}`.

use serde::{Deserialize, Serialize};

use super::{Context, Literal, TypeTerm};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiteralRepr {
    #[serde(rename = "gen")]
    Gen(String),
    #[serde(rename = "pos")]
    Pos(String),
    #[serde(rename = "neg")]
    Neg(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermRepr {
    Top { top: bool },
    Clauses { clauses: Vec<Vec<LiteralRepr>> },
}

impl Context {
    pub fn to_repr(&self, t: &TypeTerm) -> TermRepr {
        if t.is_top() {
            return TermRepr::Top { top: true };
        }
        let clauses = t
            .clauses()
            .iter()
            .map(|c| {
                self.clause_literals(c)
                    .into_iter()
                    .map(|lit| match lit {
                        Literal::Gen(i) => LiteralRepr::Gen(self.poset().name(i).to_string()),
                        Literal::Pos(i) => LiteralRepr::Pos(self.points()[i].clone()),
                        Literal::Neg(i) => LiteralRepr::Neg(self.points()[i].clone()),
                    })
                    .collect()
            })
            .collect();
        TermRepr::Clauses { clauses }
    }

    pub fn from_repr(&self, repr: &TermRepr) -> Result<TypeTerm> {
        match repr {
            TermRepr::Top { top: true } => Ok(self.top()),
            TermRepr::Top { top: false } => {
                Err(Error::Format("`top` must be true when present".into()))
            }
            TermRepr::Clauses { clauses } => {
                let mut raw = Vec::with_capacity(clauses.len());
                for lits in clauses {
                    let mut resolved = Vec::with_capacity(lits.len());
                    for lit in lits {
                        resolved.push(match lit {
                            LiteralRepr::Gen(n) => Literal::Gen(self.generator_index(n)?),
                            LiteralRepr::Pos(p) => Literal::Pos(self.point_index(p)?),
                            LiteralRepr::Neg(p) => Literal::Neg(self.point_index(p)?),
                        });
                    }
                    raw.push(self.clause(&resolved)?);
                }
                Ok(self.normalize(raw))
            }
        }
    }
}
