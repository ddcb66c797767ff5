//! Typed topological spaces: a finite point set, a topology stored as
//! bit-sets, and a type mapping from opens to lattice elements.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{bits, low_mask, Clause, Context, Literal, TypeTerm};

/// Subset of the point set, one bit per point in context order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    /// The first `n` points.
    pub fn full(n: usize) -> Self {
        PointSet(low_mask(n))
    }

    pub fn singleton(i: usize) -> Self {
        PointSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        PointSet(it.into_iter().fold(0, |acc, i| acc | 1 << i))
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bits(self.0)
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

/// Serialized as the sorted list of point indices.
impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.iter())
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 | rhs.0)
    }
}

impl BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & rhs.0)
    }
}

impl Sub for PointSet {
    type Output = PointSet;
    fn sub(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & !rhs.0)
    }
}

/// Index of an open set within its space.
pub type OpenId = usize;

/// A named open set with a declared type, the input to topology generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub members: PointSet,
    pub term: TypeTerm,
}

#[derive(Debug, Clone, Copy)]
pub struct TopologyOptions {
    pub max_opens: usize,
    /// Cap on generator combinations visited while typing intersections.
    pub max_combinations: usize,
}

impl Default for TopologyOptions {
    fn default() -> Self {
        TopologyOptions {
            max_opens: 1 << 16,
            max_combinations: 1 << 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TypedSpace {
    ctx: Context,
    opens: Vec<PointSet>,
    types: Vec<TypeTerm>,
    lookup: HashMap<PointSet, OpenId>,
    generators: Vec<GeneratorSpec>,
}

impl TypedSpace {
    /// Assembles a space without validating it. Opens are re-sorted into
    /// canonical order (by size, then by member indices).
    pub fn from_parts(
        ctx: Context,
        opens: Vec<(PointSet, TypeTerm)>,
        generators: Vec<GeneratorSpec>,
    ) -> Result<Self> {
        let universe = PointSet::full(ctx.point_count());
        let mut opens = opens;
        for (set, term) in &opens {
            if !set.is_subset(&universe) {
                return Err(Error::Format(format!(
                    "open set {set:?} mentions points outside the space"
                )));
            }
            ctx.check(term)?;
        }
        for g in &generators {
            ctx.check(&g.term)?;
        }
        opens.sort_by(|a, b| open_order(&a.0, &b.0));
        let mut lookup = HashMap::with_capacity(opens.len());
        for (i, (set, _)) in opens.iter().enumerate() {
            if lookup.insert(*set, i).is_some() {
                return Err(Error::Format(format!("open set {set:?} listed twice")));
            }
        }
        let (sets, types) = opens.into_iter().unzip();
        Ok(TypedSpace {
            ctx,
            opens: sets,
            types,
            lookup,
            generators,
        })
    }

    /// Runs [`TypedSpace::validate_type_mapping`] and fails on any violation.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate_type_mapping();
        if report.passed() {
            Ok(self)
        } else {
            Err(Error::Validation(Box::new(report)))
        }
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn point_count(&self) -> usize {
        self.ctx.point_count()
    }

    pub fn universe(&self) -> PointSet {
        PointSet::full(self.point_count())
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn open(&self, id: OpenId) -> PointSet {
        self.opens[id]
    }

    pub fn type_of(&self, id: OpenId) -> &TypeTerm {
        &self.types[id]
    }

    pub fn types(&self) -> &[TypeTerm] {
        &self.types
    }

    pub fn open_id(&self, set: PointSet) -> Option<OpenId> {
        self.lookup.get(&set).copied()
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    /// Ids of the nonempty opens.
    pub fn nonempty(&self) -> impl Iterator<Item = OpenId> + '_ {
        (0..self.opens.len()).filter(|&i| !self.opens[i].is_empty())
    }

    pub fn point_id(&self, name: &str) -> Result<usize> {
        self.ctx.point_index(name)
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.point_count() {
            Ok(())
        } else {
            Err(Error::UnknownPoint(format!("#{x}")))
        }
    }

    pub fn check_set(&self, a: PointSet) -> Result<()> {
        match (a - self.universe()).first() {
            None => Ok(()),
            Some(i) => Err(Error::UnknownPoint(format!("#{i}"))),
        }
    }

    /// Resolves point names into a set.
    pub fn point_set<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet> {
        let mut out = PointSet::EMPTY;
        for n in names {
            out.insert(self.ctx.point_index(n.as_ref())?);
        }
        Ok(out)
    }

    pub fn set_names(&self, set: PointSet) -> Vec<String> {
        set.iter().map(|i| self.ctx.points()[i].clone()).collect()
    }

    /// `{a,b,c}` rendering of a set.
    pub fn format_set(&self, set: PointSet) -> String {
        format!("{{{}}}", self.set_names(set).join(","))
    }

    pub fn format_type(&self, id: OpenId) -> String {
        self.ctx.display(&self.types[id]).to_string()
    }

    /// Copy of the space with the type of one open replaced. The result is
    /// not validated.
    pub fn with_type(&self, id: OpenId, term: TypeTerm) -> TypedSpace {
        let mut out = self.clone();
        out.types[id] = term;
        out
    }

    /// Checks the topology axioms and the three type-mapping conditions,
    /// plus the meet and join bounds that follow from them.
    pub fn validate_type_mapping(&self) -> ValidationReport {
        let ctx = &self.ctx;
        let n = self.opens.len();
        let mut report = ValidationReport::default();

        let mut topo = Check::new("topology");
        if self.open_id(PointSet::EMPTY).is_none() {
            topo.fail("the empty set is not open".into());
        }
        if self.open_id(self.universe()).is_none() {
            topo.fail("the whole point set is not open".into());
        }
        for i in 0..n {
            for j in (i + 1)..n {
                topo.examined += 1;
                let (u, v) = (self.opens[i], self.opens[j]);
                if self.open_id(u | v).is_none() {
                    topo.fail(format!(
                        "{} ∪ {} is not open",
                        self.format_set(u),
                        self.format_set(v)
                    ));
                }
                if self.open_id(u & v).is_none() {
                    topo.fail(format!(
                        "{} ∩ {} is not open",
                        self.format_set(u),
                        self.format_set(v)
                    ));
                }
            }
        }
        report.checks.push(topo);

        let mut empty_iff_bottom = Check::new("empty-iff-bottom");
        let mut never_top = Check::new("never-top");
        for i in 0..n {
            empty_iff_bottom.examined += 1;
            never_top.examined += 1;
            let (u, t) = (self.opens[i], &self.types[i]);
            if u.is_empty() != t.is_bottom() {
                empty_iff_bottom.fail(format!(
                    "open {} has type {}",
                    self.format_set(u),
                    ctx.display(t)
                ));
            }
            if t.is_top() {
                never_top.fail(format!("open {} has type TOP", self.format_set(u)));
            }
        }
        report.checks.push(empty_iff_bottom);
        report.checks.push(never_top);

        let mut monotone = Check::new("monotone");
        let mut meet_bound = Check::new("meet-bound");
        let mut join_bound = Check::new("join-bound");
        for i in 0..n {
            for j in 0..n {
                let (u, v) = (self.opens[i], self.opens[j]);
                if u.is_subset(&v) {
                    monotone.examined += 1;
                    if !ctx.leq_unchecked(&self.types[i], &self.types[j]) {
                        monotone.fail(format!(
                            "{} ⊆ {} but {} is not below {}",
                            self.format_set(u),
                            self.format_set(v),
                            ctx.display(&self.types[i]),
                            ctx.display(&self.types[j])
                        ));
                    }
                }
                if j < i {
                    continue;
                }
                if let Some(k) = self.open_id(u & v) {
                    meet_bound.examined += 1;
                    let m = ctx.meet_unchecked(&self.types[i], &self.types[j]);
                    if !ctx.leq_unchecked(&self.types[k], &m) {
                        meet_bound.fail(format!(
                            "type of {} ∩ {} exceeds the meet of their types",
                            self.format_set(u),
                            self.format_set(v)
                        ));
                    }
                }
                if let Some(k) = self.open_id(u | v) {
                    join_bound.examined += 1;
                    let jn = ctx.join_unchecked(&self.types[i], &self.types[j]);
                    if !ctx.leq_unchecked(&jn, &self.types[k]) {
                        join_bound.fail(format!(
                            "join of the types of {} and {} exceeds the type of their union",
                            self.format_set(u),
                            self.format_set(v)
                        ));
                    }
                }
            }
        }
        report.checks.push(monotone);
        report.checks.push(meet_bound);
        report.checks.push(join_bound);
        report
    }

    /// Proper inclusion of nonempty opens must strictly raise the type.
    pub fn is_strictly_typed(&self) -> StrictnessReport {
        let ctx = &self.ctx;
        for u in self.nonempty() {
            for v in self.nonempty() {
                let (su, sv) = (self.opens[u], self.opens[v]);
                if su != sv && su.is_subset(&sv) {
                    let (tu, tv) = (&self.types[u], &self.types[v]);
                    if !ctx.leq_unchecked(tu, tv) || ctx.leq_unchecked(tv, tu) {
                        return StrictnessReport {
                            strict: false,
                            counterexample: Some((u, v)),
                        };
                    }
                }
            }
        }
        StrictnessReport {
            strict: true,
            counterexample: None,
        }
    }

    /// Separates types of nested opens by joining each proper nonempty open
    /// `U` with the meet of `~@x` over the points outside `U`. The whole
    /// space gets the join of `~@x` over all points instead, which stays
    /// below top and above every added clause. The result is re-validated
    /// and must be strictly typed.
    pub fn strictify(&self) -> Result<TypedSpace> {
        let ctx = &self.ctx;
        let universe = self.universe();
        let mut out = self.clone();
        for id in self.nonempty() {
            let u = self.opens[id];
            let extra: Vec<Clause> = if u == universe {
                universe
                    .iter()
                    .map(|x| ctx.clause(&[Literal::Neg(x)]))
                    .collect::<Result<_>>()?
            } else {
                let lits: Vec<Literal> = (universe - u).iter().map(Literal::Neg).collect();
                vec![ctx.clause(&lits)?]
            };
            let raw = self.types[id].clauses().iter().copied().chain(extra);
            out.types[id] = ctx.normalize(raw);
        }
        let out = out.validated()?;
        let strict = out.is_strictly_typed();
        if let Some((u, v)) = strict.counterexample {
            return Err(Error::NotStrict(format!(
                "{} ⊊ {} still share a type after strictification",
                out.format_set(out.opens[u]),
                out.format_set(out.opens[v])
            )));
        }
        Ok(out)
    }

    /// `p` forces `x` when some open of type exactly `p` contains `x`.
    pub fn forces(&self, p: &TypeTerm, x: usize) -> Result<bool> {
        self.check_point(x)?;
        self.ctx.check(p)?;
        Ok(self
            .nonempty()
            .any(|id| self.opens[id].contains(x) && &self.types[id] == p))
    }

    /// Distinct types of nonempty opens with their induced order.
    pub fn realized_types(&self) -> RealizedTypes {
        let mut types: Vec<TypeTerm> = Vec::new();
        let mut opens_of: Vec<Vec<OpenId>> = Vec::new();
        let mut seen: HashMap<&TypeTerm, usize> = HashMap::new();
        for id in self.nonempty() {
            let t = &self.types[id];
            match seen.get(t) {
                Some(&k) => opens_of[k].push(id),
                None => {
                    seen.insert(t, types.len());
                    types.push(t.clone());
                    opens_of.push(vec![id]);
                }
            }
        }
        let leq = types
            .iter()
            .map(|a| {
                types
                    .iter()
                    .map(|b| self.ctx.leq_unchecked(a, b))
                    .collect()
            })
            .collect();
        RealizedTypes {
            types,
            leq,
            opens_of,
        }
    }
}

fn open_order(a: &PointSet, b: &PointSet) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().cmp(b.iter()))
}

/// Builds the topology generated by the given sets and types it with the
/// least extension of the declared types.
///
/// The opens are all unions of nonempty intersections of generator sets,
/// plus the empty set and the whole point set. An open `U` receives the join,
/// over every generator combination whose intersection is nonempty and
/// contained in `U`, of the meet of the combination's declared types.
pub fn generate_topology(
    ctx: Context,
    specs: Vec<GeneratorSpec>,
    opts: TopologyOptions,
) -> Result<TypedSpace> {
    let universe = PointSet::full(ctx.point_count());
    for g in &specs {
        ctx.check(&g.term)?;
        if !g.members.is_subset(&universe) {
            return Err(Error::Precondition(format!(
                "generator `{}` mentions points outside the space",
                g.name
            )));
        }
        if g.term.is_top() {
            return Err(Error::Precondition(format!(
                "generator `{}` is typed TOP",
                g.name
            )));
        }
        if !g.members.is_empty() && g.term.is_bottom() {
            return Err(Error::Precondition(format!(
                "generator `{}` is nonempty but typed BOT",
                g.name
            )));
        }
    }
    let active: Vec<&GeneratorSpec> = specs.iter().filter(|g| !g.members.is_empty()).collect();

    // Types contributed by each reachable intersection.
    let mut contrib: HashMap<PointSet, Vec<Clause>> = HashMap::new();
    let mut budget = opts.max_combinations;
    for (k, g) in active.iter().enumerate() {
        collect_intersections(
            &ctx,
            &active,
            k + 1,
            g.members,
            g.term.clone(),
            &mut contrib,
            &mut budget,
        )?;
    }
    let tau: HashMap<PointSet, TypeTerm> = contrib
        .into_iter()
        .map(|(set, raw)| (set, ctx.normalize(raw)))
        .collect();

    let mut base: Vec<PointSet> = tau.keys().copied().collect();
    base.sort_by(open_order);
    let mut opens: HashSet<PointSet> = HashSet::from([PointSet::EMPTY]);
    for &b in &base {
        let snapshot: Vec<PointSet> = opens.iter().copied().collect();
        for r in snapshot {
            opens.insert(r | b);
        }
        if opens.len() > opts.max_opens {
            return Err(Error::Capacity {
                what: "open sets",
                count: opens.len(),
                limit: opts.max_opens,
            });
        }
    }
    opens.insert(universe);

    let mut typed = Vec::with_capacity(opens.len());
    for u in opens {
        let raw = base
            .iter()
            .filter(|b| b.is_subset(&u))
            .flat_map(|b| tau[b].clauses().iter().copied());
        typed.push((u, ctx.normalize(raw)));
    }
    TypedSpace::from_parts(ctx, typed, specs)?.validated()
}

fn collect_intersections(
    ctx: &Context,
    gens: &[&GeneratorSpec],
    start: usize,
    current: PointSet,
    meet: TypeTerm,
    contrib: &mut HashMap<PointSet, Vec<Clause>>,
    budget: &mut usize,
) -> Result<()> {
    if *budget == 0 {
        return Err(Error::Capacity {
            what: "generator combinations",
            count: usize::MAX,
            limit: TopologyOptions::default().max_combinations,
        });
    }
    *budget -= 1;
    contrib
        .entry(current)
        .or_default()
        .extend(meet.clauses().iter().copied());
    for k in start..gens.len() {
        let next = current & gens[k].members;
        // A generator that does not shrink the intersection only lowers the
        // meet, so every combination containing it is dominated.
        if next.is_empty() || next == current {
            continue;
        }
        let m = ctx.meet_unchecked(&meet, &gens[k].term);
        collect_intersections(ctx, gens, k + 1, next, m, contrib, budget)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub examined: usize,
    pub counterexamples: Vec<String>,
}

const MAX_COUNTEREXAMPLES: usize = 8;

impl Check {
    pub fn new(name: &str) -> Self {
        Check {
            name: name.to_string(),
            passed: true,
            examined: 0,
            counterexamples: Vec::new(),
        }
    }

    pub fn fail(&mut self, why: String) {
        self.passed = false;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(why);
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.counterexamples.join("; ")))
            .collect();
        if failed.is_empty() {
            f.write_str("all checks passed")
        } else {
            f.write_str(&failed.join(" | "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrictnessReport {
    pub strict: bool,
    /// A pair `U ⊊ V` whose types fail to increase strictly.
    pub counterexample: Option<(OpenId, OpenId)>,
}

/// The poset of types carried by nonempty opens.
#[derive(Debug, Clone)]
pub struct RealizedTypes {
    pub types: Vec<TypeTerm>,
    /// `leq[i][j]` iff `types[i] <= types[j]`.
    pub leq: Vec<Vec<bool>>,
    pub opens_of: Vec<Vec<OpenId>>,
}

impl RealizedTypes {
    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn index_of(&self, t: &TypeTerm) -> Option<usize> {
        self.types.iter().position(|u| u == t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Poset;

    fn ctx(points: &[&str]) -> Context {
        Context::new(Poset::antichain(&["g", "h"]).unwrap(), points).unwrap()
    }

    fn spec(ctx: &Context, name: &str, members: &[&str], term: &str) -> GeneratorSpec {
        GeneratorSpec {
            name: name.into(),
            members: PointSet::from_indices(members.iter().map(|m| ctx.point_index(m).unwrap())),
            term: ctx.parse(term).unwrap(),
        }
    }

    #[test]
    fn empty_spec_list_is_rejected() {
        let c = ctx(&["a", "b"]);
        match generate_topology(c, vec![], TopologyOptions::default()) {
            Err(Error::Validation(report)) => {
                assert!(!report.check("empty-iff-bottom").unwrap().passed);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_generator_on_whole_space() {
        let c = ctx(&["a", "b"]);
        let g = spec(&c, "G", &["a", "b"], "g");
        let s = generate_topology(c, vec![g], TopologyOptions::default()).unwrap();
        assert_eq!(s.opens().len(), 2);
        let x = s.open_id(s.universe()).unwrap();
        assert_eq!(s.format_type(x), "g");
    }

    #[test]
    fn uncovered_space_gets_join_of_generator_types() {
        let c = ctx(&["a", "b", "c"]);
        let gens = vec![spec(&c, "A", &["a"], "g & @a"), spec(&c, "B", &["b"], "h")];
        let s = generate_topology(c, gens, TopologyOptions::default()).unwrap();
        let x = s.open_id(s.universe()).unwrap();
        assert_eq!(s.format_type(x), "g & @a | h");
        // {a,b} is the union of the two generators
        let ab = s.point_set(&["a", "b"]).unwrap();
        assert_eq!(s.format_type(s.open_id(ab).unwrap()), "g & @a | h");
        assert!(s.validate_type_mapping().passed());
    }

    #[test]
    fn intersections_are_typed_by_meets() {
        let c = ctx(&["a", "b", "c"]);
        let gens = vec![
            spec(&c, "A", &["a", "b"], "g"),
            spec(&c, "B", &["b", "c"], "h"),
        ];
        let s = generate_topology(c, gens, TopologyOptions::default()).unwrap();
        let b = s.point_set(&["b"]).unwrap();
        assert_eq!(s.format_type(s.open_id(b).unwrap()), "g & h");
        let abc = s.universe();
        assert_eq!(s.format_type(s.open_id(abc).unwrap()), "g | h");
        assert!(s.is_strictly_typed().strict);
    }

    #[test]
    fn injected_top_fails_never_top() {
        let c = ctx(&["a", "b"]);
        let g = spec(&c, "G", &["a"], "g");
        let s = generate_topology(c, vec![g], TopologyOptions::default()).unwrap();
        let a = s.open_id(s.point_set(&["a"]).unwrap()).unwrap();
        let bad = s.with_type(a, s.ctx().top());
        let report = bad.validate_type_mapping();
        assert!(!report.check("never-top").unwrap().passed);
    }

    #[test]
    fn injected_type_on_empty_fails_empty_iff_bottom() {
        let c = ctx(&["a", "b"]);
        let g = spec(&c, "G", &["a"], "g");
        let s = generate_topology(c, vec![g], TopologyOptions::default()).unwrap();
        let empty = s.open_id(PointSet::EMPTY).unwrap();
        let bad = s.with_type(empty, s.ctx().parse("g").unwrap());
        let report = bad.validate_type_mapping();
        assert!(!report.check("empty-iff-bottom").unwrap().passed);
        assert!(report.check("never-top").unwrap().passed);
    }

    #[test]
    fn nested_equal_types_are_not_strict_until_strictified() {
        let c = ctx(&["a", "b", "c"]);
        let gens = vec![spec(&c, "A", &["a"], "g"), spec(&c, "AB", &["a", "b"], "g")];
        let s = generate_topology(c, gens, TopologyOptions::default()).unwrap();
        let report = s.is_strictly_typed();
        let (u, v) = report.counterexample.unwrap();
        assert_eq!(s.format_set(s.open(u)), "{a}");
        assert_eq!(s.format_set(s.open(v)), "{a,b}");
        let fixed = s.strictify().unwrap();
        assert!(fixed.is_strictly_typed().strict);
        let a = fixed.open_id(fixed.point_set(&["a"]).unwrap()).unwrap();
        assert_eq!(fixed.format_type(a), "g | ~@b & ~@c");
        let x = fixed.open_id(fixed.universe()).unwrap();
        assert_eq!(fixed.format_type(x), "g | ~@a | ~@b | ~@c");
    }

    #[test]
    fn forces_requires_exact_type() {
        let c = ctx(&["a", "b"]);
        let g = spec(&c, "G", &["a"], "g & @a");
        let s = generate_topology(c, vec![g], TopologyOptions::default()).unwrap();
        let a = s.point_id("a").unwrap();
        let b = s.point_id("b").unwrap();
        assert!(s.forces(&s.ctx().parse("g & @a").unwrap(), a).unwrap());
        assert!(!s.forces(&s.ctx().parse("g").unwrap(), a).unwrap());
        assert!(!s.forces(&s.ctx().bottom(), b).unwrap());
        assert!(matches!(s.forces(&s.ctx().bottom(), 9), Err(Error::UnknownPoint(_))));
    }

    #[test]
    fn realized_types_of_two_open_space() {
        let c = ctx(&["a", "b"]);
        let g = spec(&c, "G", &["a", "b"], "g");
        let s = generate_topology(c, vec![g], TopologyOptions::default()).unwrap();
        let r = s.realized_types();
        assert_eq!(r.len(), 1);
        assert!(r.leq[0][0]);
    }

    #[test]
    fn point_set_ops() {
        let a = PointSet::from_indices([0, 2]);
        let b = PointSet::from_indices([2, 3]);
        assert_eq!((a | b).len(), 3);
        assert_eq!((a & b), PointSet::singleton(2));
        assert_eq!((a - b), PointSet::singleton(0));
        assert!(PointSet::singleton(2).is_subset(&a));
        assert_eq!(PointSet::full(3).iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    }
}
