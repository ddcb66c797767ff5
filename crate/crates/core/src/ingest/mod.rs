//! Dataset builders: advisor genealogies, street communities and predicate
//! tables, plus the small built-in fixtures.

mod predicate;

use std::collections::{BTreeSet, HashMap};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lattice::{Context, Literal, Poset};
use crate::space::{generate_topology, GeneratorSpec, PointSet, TopologyOptions, TypedSpace};

pub use predicate::{Comparison, Op, Predicate};

/// Which points enter the meet on an ancestor generator's type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AncestorScope {
    /// Every proper descendant of the point's advisors.
    #[default]
    AdvisorDescendants,
    /// Only the advisors' direct students.
    CoStudents,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AdvisorEdge {
    pub advisor: String,
    pub student: String,
}

#[derive(Debug, Clone, Default)]
pub struct GenealogyDataset {
    pub edges: Vec<AdvisorEdge>,
}

impl GenealogyDataset {
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        GenealogyDataset {
            edges: pairs
                .iter()
                .map(|(a, s)| AdvisorEdge {
                    advisor: a.to_string(),
                    student: s.to_string(),
                })
                .collect(),
        }
    }

    /// CSV with header `advisor,student`.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let edges = rdr.deserialize().collect::<std::result::Result<Vec<AdvisorEdge>, _>>()?;
        Ok(GenealogyDataset { edges })
    }

    /// Point ids in order of first appearance.
    fn people(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in &self.edges {
            for id in [&e.advisor, &e.student] {
                if seen.insert(id.clone()) {
                    out.push(id.clone());
                }
            }
        }
        out
    }
}

/// Transitive closure of a successor relation, rejecting cycles.
fn reach(n: usize, next: &[Vec<usize>], names: &[String]) -> Result<Vec<PointSet>> {
    let mut out = vec![PointSet::EMPTY; n];
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    fn visit(
        v: usize,
        next: &[Vec<usize>],
        out: &mut [PointSet],
        state: &mut [u8],
        names: &[String],
    ) -> Result<()> {
        match state[v] {
            2 => return Ok(()),
            1 => {
                return Err(Error::Dataset(format!(
                    "advisor relation has a cycle through `{}`",
                    names[v]
                )))
            }
            _ => {}
        }
        state[v] = 1;
        let mut acc = PointSet::EMPTY;
        for &w in &next[v] {
            visit(w, next, out, state, names)?;
            acc = acc | PointSet::singleton(w) | out[w];
        }
        out[v] = acc;
        state[v] = 2;
        Ok(())
    }
    for v in 0..n {
        visit(v, next, &mut out, &mut state, names)?;
    }
    Ok(out)
}

fn meet_of_points(ctx: &Context, generator: usize, points: PointSet) -> Result<crate::lattice::TypeTerm> {
    let mut lits = vec![Literal::Gen(generator)];
    lits.extend(points.iter().map(Literal::Pos));
    Ok(ctx.normalize([ctx.clause(&lits)?]))
}

/// Ancestor and descendant generators for every person.
///
/// A person `x` with advisors gets the set of proper ancestors of `x`, typed
/// `anc & @x` met with `@z` for each `z` in the chosen scope around the
/// advisors. A person with students gets the set of proper descendants,
/// typed `desc & @x` met with `@z` for each proper ancestor `z`.
pub fn build_genealogy(d: &GenealogyDataset, scope: AncestorScope) -> Result<TypedSpace> {
    let people = d.people();
    let n = people.len();
    let idx: HashMap<&str, usize> = people.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    let mut students = vec![Vec::new(); n];
    let mut advisors = vec![Vec::new(); n];
    for e in &d.edges {
        let (a, s) = (idx[e.advisor.as_str()], idx[e.student.as_str()]);
        if a == s {
            return Err(Error::Dataset(format!("`{}` advises themself", e.advisor)));
        }
        if !students[a].contains(&s) {
            students[a].push(s);
            advisors[s].push(a);
        }
    }
    let descendants = reach(n, &students, &people)?;
    let ancestors = reach(n, &advisors, &people)?;
    let ctx = Context::new(Poset::antichain(&["anc", "desc"])?, &people)?;
    let (anc, desc) = (ctx.generator_index("anc")?, ctx.generator_index("desc")?);
    let mut specs = Vec::new();
    for x in 0..n {
        if !advisors[x].is_empty() {
            let scope_pts = advisors[x].iter().fold(PointSet::EMPTY, |acc, &a| {
                acc | match scope {
                    AncestorScope::AdvisorDescendants => descendants[a],
                    AncestorScope::CoStudents => PointSet::from_indices(students[a].iter().copied()),
                }
            });
            specs.push(GeneratorSpec {
                name: format!("ancestors of {}", people[x]),
                members: ancestors[x],
                term: meet_of_points(&ctx, anc, scope_pts | PointSet::singleton(x))?,
            });
        }
    }
    for x in 0..n {
        if !descendants[x].is_empty() {
            specs.push(GeneratorSpec {
                name: format!("descendants of {}", people[x]),
                members: descendants[x],
                term: meet_of_points(&ctx, desc, ancestors[x] | PointSet::singleton(x))?,
            });
        }
    }
    generate_topology(ctx, specs, TopologyOptions::default())
}

#[derive(Debug, Clone, Deserialize)]
pub struct Street {
    pub name: String,
    pub residents: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Relation {
    pub name: String,
    pub pairs: Vec<(String, String)>,
}

#[derive(Debug, Clone, Deserialize, Default)]
pub struct CommunityDataset {
    pub streets: Vec<Street>,
    #[serde(default)]
    pub relations: Vec<Relation>,
}

impl CommunityDataset {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// One generator per street, per resident a left and a right neighborhood
/// (each including the resident), and per relation member the member with
/// its partners.
pub fn build_community(d: &CommunityDataset) -> Result<TypedSpace> {
    let mut points = Vec::new();
    let mut seen = BTreeSet::new();
    for st in &d.streets {
        for r in &st.residents {
            if !seen.insert(r.clone()) {
                return Err(Error::DuplicatePoint(r.clone()));
            }
            points.push(r.clone());
        }
    }
    let mut gens: Vec<String> = vec!["left".into(), "right".into()];
    for name in d.streets.iter().map(|s| &s.name).chain(d.relations.iter().map(|r| &r.name)) {
        if gens.contains(name) {
            return Err(Error::Dataset(format!("type name `{name}` used twice")));
        }
        gens.push(name.clone());
    }
    let ctx = Context::new(Poset::antichain(&gens)?, &points)?;
    let (left, right) = (ctx.generator_index("left")?, ctx.generator_index("right")?);
    let mut specs = Vec::new();
    for st in &d.streets {
        let ids: Vec<usize> = st
            .residents
            .iter()
            .map(|r| ctx.point_index(r))
            .collect::<Result<_>>()?;
        if ids.is_empty() {
            continue;
        }
        specs.push(GeneratorSpec {
            name: st.name.clone(),
            members: PointSet::from_indices(ids.iter().copied()),
            term: ctx.generator(&st.name)?,
        });
        for (i, &x) in ids.iter().enumerate() {
            let who = PointSet::singleton(x);
            specs.push(GeneratorSpec {
                name: format!("right of {}", st.residents[i]),
                members: PointSet::from_indices(ids[i..].iter().copied()),
                term: meet_of_points(&ctx, right, who)?,
            });
            specs.push(GeneratorSpec {
                name: format!("left of {}", st.residents[i]),
                members: PointSet::from_indices(ids[..=i].iter().copied()),
                term: meet_of_points(&ctx, left, who)?,
            });
        }
    }
    for rel in &d.relations {
        let g = ctx.generator_index(&rel.name)?;
        let mut partners: Vec<PointSet> = vec![PointSet::EMPTY; points.len()];
        for (a, b) in &rel.pairs {
            let (ia, ib) = (ctx.point_index(a)?, ctx.point_index(b)?);
            if ia == ib {
                return Err(Error::Dataset(format!(
                    "relation `{}` pairs `{a}` with itself",
                    rel.name
                )));
            }
            partners[ia].insert(ib);
            partners[ib].insert(ia);
        }
        for (x, p) in partners.iter().enumerate() {
            if p.is_empty() {
                continue;
            }
            specs.push(GeneratorSpec {
                name: format!("{} of {}", rel.name, points[x]),
                members: *p | PointSet::singleton(x),
                term: meet_of_points(&ctx, g, PointSet::singleton(x))?,
            });
        }
    }
    generate_topology(ctx, specs, TopologyOptions::default())
}

#[derive(Debug, Clone, Deserialize)]
pub struct PredicateDef {
    pub name: String,
    pub expr: String,
    #[serde(default)]
    pub implies: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PredicateTableDataset {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub predicates: Vec<PredicateDef>,
}

impl PredicateTableDataset {
    pub fn from_csv_and_json<R: std::io::Read>(table: R, predicates: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(table);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<Vec<Vec<String>>, _>>()?;
        let predicates: Vec<PredicateDef> = serde_json::from_str(predicates)?;
        Ok(PredicateTableDataset {
            header,
            rows,
            predicates,
        })
    }

    /// Row ids: the `id` column when present, else `row1`, `row2`, ...
    fn row_ids(&self) -> Vec<String> {
        match self.header.iter().position(|h| h == "id") {
            Some(i) => self.rows.iter().map(|r| r[i].clone()).collect(),
            None => (1..=self.rows.len()).map(|i| format!("row{i}")).collect(),
        }
    }
}

/// One generator per predicate with a nonempty result, typed by the
/// predicate itself. Declared implications order the predicates and must
/// hold row by row. With `strict`, the result is passed through
/// [`TypedSpace::strictify`].
pub fn build_table(d: &PredicateTableDataset, strict: bool) -> Result<TypedSpace> {
    let ids = d.row_ids();
    for r in &d.rows {
        if r.len() != d.header.len() {
            return Err(Error::Dataset("ragged table row".into()));
        }
    }
    let names: Vec<&str> = d.predicates.iter().map(|p| p.name.as_str()).collect();
    let mut order = Vec::new();
    for p in &d.predicates {
        for q in &p.implies {
            if !names.contains(&q.as_str()) {
                return Err(Error::UnknownGenerator(q.clone()));
            }
            order.push((p.name.as_str(), q.as_str()));
        }
    }
    let poset = Poset::new(&names, &order)?;
    let ctx = Context::new(poset, &ids)?;
    let mut results: HashMap<&str, PointSet> = HashMap::new();
    for p in &d.predicates {
        let pred = Predicate::parse(&p.expr)?;
        pred.check_columns(&d.header)?;
        let rows = PointSet::from_indices(
            d.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| pred.eval(&d.header, r))
                .map(|(i, _)| i),
        );
        results.insert(p.name.as_str(), rows);
    }
    for (p, q) in &order {
        let extra = results[p] - results[q];
        if let Some(row) = extra.first() {
            return Err(Error::Dataset(format!(
                "`{p}` is declared to imply `{q}` but row `{}` satisfies only `{p}`",
                ids[row]
            )));
        }
    }
    let specs = d
        .predicates
        .iter()
        .filter(|p| !results[p.name.as_str()].is_empty())
        .map(|p| {
            Ok(GeneratorSpec {
                name: p.name.clone(),
                members: results[p.name.as_str()],
                term: ctx.generator(&p.name)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let space = generate_topology(ctx, specs, TopologyOptions::default())?;
    if strict {
        space.strictify()
    } else {
        Ok(space)
    }
}

/// Built-in fixtures.
pub mod fixtures {
    use super::*;

    pub const GENEALOGY5_CSV: &str = "advisor,student\nB,S\nS,H\nH,C\nC,W\n";

    pub const STREET5_JSON: &str =
        r#"{"streets":[{"name":"main","residents":["r1","r2","r3","r4","r5"]}]}"#;

    pub const STREET2X3_JSON: &str = r#"{"streets":[{"name":"a","residents":["a1","a2","a3"]},{"name":"b","residents":["b1","b2","b3"]}]}"#;

    pub const COURSES_CSV: &str = "id,fee,mode\n\
c1,150,online\n\
c2,600,online\n\
c3,900,campus\n\
c4,1500,campus\n\
c5,80,campus\n";

    pub const COURSES_PREDICATES: &str = r#"[
  {"name":"cheap","expr":"fee < 200","implies":["affordable"]},
  {"name":"affordable","expr":"fee < 1000"},
  {"name":"online","expr":"mode = online"},
  {"name":"premium","expr":"fee > 5000"}
]"#;

    /// The advisor chain B → S → H → C → W.
    pub fn genealogy5() -> TypedSpace {
        let d = GenealogyDataset::from_csv(GENEALOGY5_CSV.as_bytes()).expect("fixture parses");
        build_genealogy(&d, AncestorScope::default()).expect("fixture builds")
    }

    /// One street `main` with residents r1 … r5.
    pub fn street5() -> TypedSpace {
        build_community(&CommunityDataset::from_json(STREET5_JSON).expect("fixture parses"))
            .expect("fixture builds")
    }

    /// Streets `a` (a1, a2, a3) and `b` (b1, b2, b3).
    pub fn street2x3() -> TypedSpace {
        build_community(&CommunityDataset::from_json(STREET2X3_JSON).expect("fixture parses"))
            .expect("fixture builds")
    }

    /// Points a, b, c; opens {a} and {a,b} both typed `g`.
    pub fn degenerate() -> TypedSpace {
        let ctx = Context::new(Poset::antichain(&["g"]).expect("poset"), &["a", "b", "c"])
            .expect("context");
        let g = ctx.generator("g").expect("generator");
        let specs = vec![
            GeneratorSpec {
                name: "A".into(),
                members: PointSet::from_indices([0]),
                term: g.clone(),
            },
            GeneratorSpec {
                name: "AB".into(),
                members: PointSet::from_indices([0, 1]),
                term: g,
            },
        ];
        generate_topology(ctx, specs, TopologyOptions::default()).expect("fixture builds")
    }

    pub fn courses() -> TypedSpace {
        let d = PredicateTableDataset::from_csv_and_json(COURSES_CSV.as_bytes(), COURSES_PREDICATES)
            .expect("fixture parses");
        build_table(&d, false).expect("fixture builds")
    }

    pub fn by_name(name: &str) -> Option<TypedSpace> {
        match name {
            "genealogy5" => Some(genealogy5()),
            "street5" => Some(street5()),
            "street2x3" => Some(street2x3()),
            "degenerate" => Some(degenerate()),
            "courses" => Some(courses()),
            _ => None,
        }
    }

    pub const NAMES: [&str; 5] = ["genealogy5", "street5", "street2x3", "degenerate", "courses"];
}
