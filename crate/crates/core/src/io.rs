//! JSON documents for typed spaces.
//!
//! ```json
//! {"points":["a","b"],
//!  "poset":{"elements":["g"],"leq":[]},
//!  "opens":[{"set":["a"],"type":{"clauses":[[{"gen":"g"}]]}}],
//!  "generators":[{"name":"A","set":["a"],"type":{"clauses":[[{"gen":"g"}]]}}]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::TermRepr;
use crate::lattice::{Context, Poset};
use crate::space::{GeneratorSpec, PointSet, TypedSpace};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OpenDoc {
    pub set: Vec<String>,
    #[serde(rename = "type")]
    pub term: TermRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    pub set: Vec<String>,
    #[serde(rename = "type")]
    pub term: TermRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub poset: PosetDoc,
    pub opens: Vec<OpenDoc>,
    #[serde(default)]
    pub generators: Vec<GeneratorDoc>,
}

impl SpaceDoc {
    pub fn from_space(s: &TypedSpace) -> Self {
        let ctx = s.ctx();
        SpaceDoc {
            points: ctx.points().to_vec(),
            poset: PosetDoc {
                elements: ctx.poset().names().to_vec(),
                leq: ctx.poset().strict_pairs(),
            },
            opens: s
                .opens()
                .iter()
                .zip(s.types())
                .map(|(u, t)| OpenDoc {
                    set: s.set_names(*u),
                    term: ctx.to_repr(t),
                })
                .collect(),
            generators: s
                .generators()
                .iter()
                .map(|g| GeneratorDoc {
                    name: g.name.clone(),
                    set: s.set_names(g.members),
                    term: ctx.to_repr(&g.term),
                })
                .collect(),
        }
    }

    /// Rebuilds and validates the space.
    pub fn into_space(self) -> Result<TypedSpace> {
        self.into_unvalidated()?.validated()
    }

    /// Rebuilds the space without checking the type mapping, so that a
    /// broken document can still be inspected.
    pub fn into_unvalidated(self) -> Result<TypedSpace> {
        let poset = Poset::new(&self.poset.elements, &self.poset.leq)?;
        let ctx = Context::new(poset, &self.points)?;
        let resolve = |names: &[String]| -> Result<PointSet> {
            let mut out = PointSet::EMPTY;
            for n in names {
                let i = ctx.point_index(n)?;
                if out.contains(i) {
                    return Err(Error::Format(format!("point `{n}` repeated in a set")));
                }
                out.insert(i);
            }
            Ok(out)
        };
        let mut opens = Vec::with_capacity(self.opens.len());
        for o in &self.opens {
            opens.push((resolve(&o.set)?, ctx.from_repr(&o.term)?));
        }
        let mut generators = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            generators.push(GeneratorSpec {
                name: g.name.clone(),
                members: resolve(&g.set)?,
                term: ctx.from_repr(&g.term)?,
            });
        }
        TypedSpace::from_parts(ctx, opens, generators)
    }
}

pub fn space_to_json(s: &TypedSpace) -> String {
    let mut out = serde_json::to_string_pretty(&SpaceDoc::from_space(s)).expect("plain data");
    out.push('\n');
    out
}

pub fn space_from_json(text: &str) -> Result<TypedSpace> {
    let doc: SpaceDoc = serde_json::from_str(text)?;
    doc.into_space()
}

pub fn read_space(path: &std::path::Path) -> Result<TypedSpace> {
    space_from_json(&std::fs::read_to_string(path)?)
}
