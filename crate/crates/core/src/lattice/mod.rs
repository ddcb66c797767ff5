//! The bounded distributive lattice of types generated by a poset of
//! generators plus complemented point literals.
//!
//! Elements are kept as joins of clauses (meets of literals). Every
//! [`TypeTerm`] handed out by a [`Context`] is in canonical form: the set of
//! all prime implicants of the term, with absorbed clauses removed. Prime
//! implicants are computed by iterated consensus on complemented point
//! literals; generator literals only ever occur positively, so they never take
//! part in a consensus step. Two terms are semantically equal exactly when
//! their canonical forms are identical.
//!
//! Admissible valuations assign 0/1 to generators monotonically along the
//! poset and assign 0/1 freely to points, with `~@x` evaluating to the
//! complement of `@x`. The lattice order is defined by these valuations;
//! [`Context::leq_by_valuations`] implements that definition directly and
//! [`Context::leq`] answers the same question clause-wise on canonical forms.

mod parse;
mod repr;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use repr::{LiteralRepr, TermRepr};

/// Generators and points are both addressed by bit position in a `u64`.
pub const MAX_GENERATORS: usize = 64;
pub const MAX_POINTS: usize = 64;
/// Default cap on relevant literals for valuation enumeration.
pub const DEFAULT_VALUATION_BOUND: usize = 20;

/// Finite partial order on named generators.
///
/// Element indices follow the lexicographic order of the names, so index
/// order doubles as the canonical literal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    // up[i]: every j with i <= j, including i itself
    up: Vec<u64>,
}

impl Poset {
    /// Builds a poset from elements and `(lower, upper)` pairs. The relation
    /// is closed reflexively and transitively; a cycle between distinct
    /// elements is rejected.
    pub fn new<S: AsRef<str>>(elements: &[S], leq: &[(S, S)]) -> Result<Self> {
        let mut names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        names.dedup();
        if names.len() > MAX_GENERATORS {
            return Err(Error::Capacity {
                what: "generators",
                count: names.len(),
                limit: MAX_GENERATORS,
            });
        }
        let index: HashMap<String, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut up: Vec<u64> = (0..names.len()).map(|i| 1u64 << i).collect();
        for (a, b) in leq {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownGenerator(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownGenerator(b.as_ref().to_string()))?;
            up[ia] |= 1 << ib;
        }
        // Warshall on bit rows.
        for k in 0..names.len() {
            for i in 0..names.len() {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        for i in 0..names.len() {
            for j in (i + 1)..names.len() {
                if up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1 {
                    return Err(Error::PosetCycle(names[i].clone(), names[j].clone()));
                }
            }
        }
        Ok(Poset { names, index, up })
    }

    /// A poset with no order between distinct elements.
    pub fn antichain<S: AsRef<str>>(elements: &[S]) -> Result<Self> {
        Poset::new::<S>(elements, &[])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    /// Smallest up-set containing `mask`.
    pub fn up_closure(&self, mask: u64) -> u64 {
        bits(mask).fold(mask, |acc, i| acc | self.up[i])
    }

    /// Minimal elements of `mask`.
    pub fn minimal(&self, mask: u64) -> u64 {
        let strictly_above = bits(mask).fold(0u64, |acc, i| acc | (self.up[i] & !(1 << i)));
        mask & !strictly_above
    }

    /// All strict `(lower, upper)` pairs, in index order.
    pub fn strict_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in bits(self.up[i] & !(1 << i)) {
                out.push((self.names[i].clone(), self.names[j].clone()));
            }
        }
        out
    }

    fn all_mask(&self) -> u64 {
        low_mask(self.len())
    }
}

/// One literal of the generating set: a poset generator, `@x` or `~@x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Literal {
    Gen(usize),
    Pos(usize),
    Neg(usize),
}

/// A meet of literals.
///
/// Generators are stored up-closed (a clause containing `p` also records
/// every `q >= p`), which makes meet absorption and the clause order plain
/// bit operations. Use [`Context::clause_literals`] for the minimal,
/// human-facing literal list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    gens: u64,
    pos: u64,
    neg: u64,
}

impl Clause {
    /// The empty meet, i.e. top.
    pub const EMPTY: Clause = Clause {
        gens: 0,
        pos: 0,
        neg: 0,
    };

    /// Up-closed generator mask.
    pub fn gens(&self) -> u64 {
        self.gens
    }

    pub fn positive_points(&self) -> u64 {
        self.pos
    }

    pub fn negative_points(&self) -> u64 {
        self.neg
    }

    /// Points mentioned with either polarity.
    pub fn points(&self) -> u64 {
        self.pos | self.neg
    }

    pub fn is_contradictory(&self) -> bool {
        self.pos & self.neg != 0
    }

    /// `self <= other`: every literal of `other` also occurs in `self`.
    pub fn implies(&self, other: &Clause) -> bool {
        other.gens & !self.gens == 0 && other.pos & !self.pos == 0 && other.neg & !self.neg == 0
    }

    fn meet(&self, other: &Clause) -> Clause {
        Clause {
            gens: self.gens | other.gens,
            pos: self.pos | other.pos,
            neg: self.neg | other.neg,
        }
    }

    fn consensus(&self, other: &Clause) -> Option<Clause> {
        let opposed = (self.pos & other.neg) | (self.neg & other.pos);
        if opposed.count_ones() != 1 {
            return None;
        }
        Some(Clause {
            gens: self.gens | other.gens,
            pos: (self.pos | other.pos) & !opposed,
            neg: (self.neg | other.neg) & !opposed,
        })
    }

    fn satisfied_by(&self, v: &Valuation) -> bool {
        self.gens & !v.gens == 0 && self.pos & !v.points == 0 && self.neg & v.points == 0
    }
}

/// A lattice element in canonical join-of-meets form.
///
/// Only a [`Context`] constructs terms, so every value is canonical and
/// structural equality is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeTerm {
    clauses: Vec<Clause>,
}

impl PartialOrd for Clause {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Clause {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.gens, self.pos, self.neg).cmp(&(other.gens, other.pos, other.neg))
    }
}

impl TypeTerm {
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_bottom(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.clauses.len() == 1 && self.clauses[0] == Clause::EMPTY
    }
}

/// A {0,1} assignment. `gens` must be an up-set of the poset for the
/// valuation to be admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Valuation {
    pub gens: u64,
    pub points: u64,
}

/// Generators and points a term actually mentions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Support {
    /// Minimal generators of each clause, merged.
    pub gens: u64,
    pub points: u64,
}

impl Support {
    pub fn union(self, other: Support) -> Support {
        Support {
            gens: self.gens | other.gens,
            points: self.points | other.points,
        }
    }

    pub fn len(&self) -> usize {
        (self.gens.count_ones() + self.points.count_ones()) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Ambient context of the lattice: the generator poset and the point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    poset: Poset,
    points: Vec<String>,
    point_index: HashMap<String, usize>,
}

impl Context {
    /// Points keep the order given here; that order is the canonical point
    /// order for literals and for serialized sets.
    pub fn new<S: AsRef<str>>(poset: Poset, points: &[S]) -> Result<Self> {
        if points.len() > MAX_POINTS {
            return Err(Error::Capacity {
                what: "points",
                count: points.len(),
                limit: MAX_POINTS,
            });
        }
        let mut point_index = HashMap::new();
        let mut names = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref().to_string();
            if point_index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(p));
            }
            names.push(p);
        }
        Ok(Context {
            poset,
            points: names,
            point_index,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn point_index(&self, id: &str) -> Result<usize> {
        self.point_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.poset
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn all_points(&self) -> u64 {
        low_mask(self.points.len())
    }

    // ----- construction -------------------------------------------------

    pub fn bottom(&self) -> TypeTerm {
        TypeTerm {
            clauses: Vec::new(),
        }
    }

    pub fn top(&self) -> TypeTerm {
        TypeTerm {
            clauses: vec![Clause::EMPTY],
        }
    }

    /// Builds a clause from literals. Index ranges are checked.
    pub fn clause(&self, literals: &[Literal]) -> Result<Clause> {
        let mut c = Clause::EMPTY;
        for lit in literals {
            match *lit {
                Literal::Gen(i) => {
                    if i >= self.poset.len() {
                        return Err(Error::ContextMismatch);
                    }
                    c.gens |= 1 << i;
                }
                Literal::Pos(i) => {
                    if i >= self.points.len() {
                        return Err(Error::ContextMismatch);
                    }
                    c.pos |= 1 << i;
                }
                Literal::Neg(i) => {
                    if i >= self.points.len() {
                        return Err(Error::ContextMismatch);
                    }
                    c.neg |= 1 << i;
                }
            }
        }
        c.gens = self.poset.up_closure(c.gens);
        Ok(c)
    }

    /// The term consisting of a single literal.
    pub fn literal(&self, lit: Literal) -> Result<TypeTerm> {
        Ok(self.normalize([self.clause(&[lit])?]))
    }

    pub fn generator(&self, name: &str) -> Result<TypeTerm> {
        self.literal(Literal::Gen(self.generator_index(name)?))
    }

    pub fn point(&self, id: &str) -> Result<TypeTerm> {
        self.literal(Literal::Pos(self.point_index(id)?))
    }

    pub fn not_point(&self, id: &str) -> Result<TypeTerm> {
        self.literal(Literal::Neg(self.point_index(id)?))
    }

    /// Canonical form of the join of `raw` clauses.
    ///
    /// Contradictory clauses are dropped, absorbed clauses removed, and
    /// consensus on complemented point literals is iterated until every
    /// prime implicant is present.
    pub fn normalize<I: IntoIterator<Item = Clause>>(&self, raw: I) -> TypeTerm {
        let mut set: Vec<Clause> = raw
            .into_iter()
            .filter(|c| !c.is_contradictory())
            .map(|mut c| {
                c.gens = self.poset.up_closure(c.gens);
                c
            })
            .collect();
        absorb(&mut set);
        loop {
            let mut fresh: Vec<Clause> = Vec::new();
            for i in 0..set.len() {
                for j in (i + 1)..set.len() {
                    if let Some(c) = set[i].consensus(&set[j]) {
                        let known = set.iter().chain(fresh.iter()).any(|d| c.implies(d));
                        if !known {
                            fresh.retain(|d| !d.implies(&c));
                            fresh.push(c);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            set.extend(fresh);
            absorb(&mut set);
        }
        let mut clauses: Vec<Clause> = set.into_iter().collect();
        clauses.sort_by_cached_key(|c| self.sort_key(c));
        TypeTerm { clauses }
    }

    fn sort_key(&self, c: &Clause) -> Vec<(u8, usize, u8)> {
        let mut key: Vec<(u8, usize, u8)> =
            bits(self.poset.minimal(c.gens)).map(|i| (0, i, 0)).collect();
        for i in bits(c.pos | c.neg) {
            key.push((1, i, u8::from(c.neg >> i & 1 == 1)));
        }
        key
    }

    /// Literals of a clause in canonical order, with generators reduced to
    /// their minimal elements.
    pub fn clause_literals(&self, c: &Clause) -> Vec<Literal> {
        let mut out: Vec<Literal> = bits(self.poset.minimal(c.gens)).map(Literal::Gen).collect();
        for i in bits(c.pos | c.neg) {
            if c.pos >> i & 1 == 1 {
                out.push(Literal::Pos(i));
            } else {
                out.push(Literal::Neg(i));
            }
        }
        out
    }

    /// Fails with [`Error::ContextMismatch`] if `t` mentions generators or
    /// points outside this context.
    pub fn check(&self, t: &TypeTerm) -> Result<()> {
        let gens = self.poset.all_mask();
        let pts = self.all_points();
        for c in &t.clauses {
            if c.gens & !gens != 0 || (c.pos | c.neg) & !pts != 0 {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(())
    }

    // ----- lattice operations ---------------------------------------------

    pub fn meet(&self, a: &TypeTerm, b: &TypeTerm) -> Result<TypeTerm> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.meet_unchecked(a, b))
    }

    pub fn join(&self, a: &TypeTerm, b: &TypeTerm) -> Result<TypeTerm> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.join_unchecked(a, b))
    }

    pub(crate) fn meet_unchecked(&self, a: &TypeTerm, b: &TypeTerm) -> TypeTerm {
        let mut raw = Vec::with_capacity(a.clauses.len() * b.clauses.len());
        for x in &a.clauses {
            for y in &b.clauses {
                raw.push(x.meet(y));
            }
        }
        self.normalize(raw)
    }

    pub(crate) fn join_unchecked(&self, a: &TypeTerm, b: &TypeTerm) -> TypeTerm {
        self.normalize(a.clauses.iter().chain(b.clauses.iter()).copied())
    }

    /// Meet of all terms; the empty meet is top.
    pub fn meet_all<'a, I: IntoIterator<Item = &'a TypeTerm>>(&self, terms: I) -> TypeTerm {
        terms
            .into_iter()
            .fold(self.top(), |acc, t| self.meet_unchecked(&acc, t))
    }

    /// Join of all terms; the empty join is bottom.
    pub fn join_all<'a, I: IntoIterator<Item = &'a TypeTerm>>(&self, terms: I) -> TypeTerm {
        self.normalize(terms.into_iter().flat_map(|t| t.clauses.iter().copied()))
    }

    /// Lattice order.
    ///
    /// Canonical forms list every prime implicant, so `a <= b` holds exactly
    /// when each clause of `a` lies below some clause of `b`.
    pub fn leq(&self, a: &TypeTerm, b: &TypeTerm) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq_unchecked(a, b))
    }

    pub(crate) fn leq_unchecked(&self, a: &TypeTerm, b: &TypeTerm) -> bool {
        a.clauses
            .iter()
            .all(|d| b.clauses.iter().any(|c| d.implies(c)))
    }

    /// Lattice order decided by enumerating every admissible valuation over
    /// the literals of `a` and `b`.
    pub fn leq_by_valuations(&self, a: &TypeTerm, b: &TypeTerm, bound: usize) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        let support = self.support(a).union(self.support(b));
        Ok(self
            .enumerate_valuations(support, bound)?
            .all(|v| !self.eval(a, &v) || self.eval(b, &v)))
    }

    pub fn eval(&self, t: &TypeTerm, v: &Valuation) -> bool {
        t.clauses.iter().any(|c| c.satisfied_by(v))
    }

    pub fn support(&self, t: &TypeTerm) -> Support {
        t.clauses.iter().fold(Support::default(), |acc, c| Support {
            gens: acc.gens | self.poset.minimal(c.gens),
            points: acc.points | c.pos | c.neg,
        })
    }

    /// Every admissible valuation restricted to `support`: up-sets of the
    /// induced sub-order on the generators (closed upward in the full poset)
    /// times all assignments of the points.
    pub fn enumerate_valuations(
        &self,
        support: Support,
        bound: usize,
    ) -> Result<impl Iterator<Item = Valuation>> {
        let needed = support.len();
        if needed > bound {
            return Err(Error::ValuationBound { needed, bound });
        }
        let gen_bits: Vec<usize> = bits(support.gens).collect();
        let point_bits: Vec<usize> = bits(support.points).collect();
        let mut gen_parts = Vec::new();
        for sub in 0u64..(1u64 << gen_bits.len()) {
            let chosen = spread(sub, &gen_bits);
            let closed = gen_bits.iter().all(|&i| {
                chosen >> i & 1 == 0 || self.poset.up[i] & support.gens & !chosen == 0
            });
            if closed {
                gen_parts.push(self.poset.up_closure(chosen));
            }
        }
        let point_count = point_bits.len();
        Ok(gen_parts.into_iter().flat_map(move |gens| {
            let point_bits = point_bits.clone();
            (0u64..(1u64 << point_count)).map(move |sub| Valuation {
                gens,
                points: spread(sub, &point_bits),
            })
        }))
    }

    /// Join-irreducibility decided semantically: the admissible valuations
    /// satisfying `t` (over its literals plus every point of the context)
    /// must have a least element. Point parts are compared for equality,
    /// since a point literal and its complement are incomparable atoms.
    pub fn is_join_irreducible(&self, t: &TypeTerm, bound: usize) -> Result<bool> {
        self.check(t)?;
        if t.is_bottom() {
            return Ok(false);
        }
        let support = Support {
            gens: self.support(t).gens,
            points: self.all_points(),
        };
        let mut point_part: Option<u64> = None;
        let mut least = u64::MAX;
        for v in self.enumerate_valuations(support, bound)? {
            if !self.eval(t, &v) {
                continue;
            }
            match point_part {
                None => point_part = Some(v.points),
                Some(p) if p != v.points => return Ok(false),
                Some(_) => {}
            }
            least &= v.gens;
        }
        let Some(points) = point_part else {
            return Ok(false);
        };
        Ok(self.eval(
            t,
            &Valuation {
                gens: least,
                points,
            },
        ))
    }

    /// Structural join-irreducibility test: a single clause that fixes the
    /// polarity of every point.
    pub fn is_join_irreducible_fast(&self, t: &TypeTerm) -> bool {
        t.clauses.len() == 1 && t.clauses[0].points() == self.all_points()
    }

    /// Candidates `q` with `t <= q`, in input order.
    pub fn filter_upset(&self, t: &TypeTerm, candidates: &[TypeTerm]) -> Result<Vec<TypeTerm>> {
        self.check(t)?;
        if t.is_bottom() {
            return Err(Error::Precondition(
                "a filter cannot be generated by bottom".into(),
            ));
        }
        let mut out = Vec::new();
        for q in candidates {
            if self.leq(t, q)? {
                out.push(q.clone());
            }
        }
        Ok(out)
    }

    /// Whether every clause of `t` uses only generators from `gens` (plus
    /// point literals), i.e. `t` lies in the sublattice generated by `gens`
    /// and the point literals.
    pub fn in_sublattice(&self, t: &TypeTerm, gens: u64) -> bool {
        t.clauses
            .iter()
            .all(|c| self.poset.minimal(c.gens) & !gens == 0)
    }

    /// Parses a type expression; see the crate docs for the grammar.
    pub fn parse(&self, text: &str) -> Result<TypeTerm> {
        let raw = parse::parse_term(self, text)?;
        Ok(self.normalize(raw))
    }

    pub fn display<'a>(&'a self, t: &'a TypeTerm) -> TermDisplay<'a> {
        TermDisplay { ctx: self, term: t }
    }
}

/// Renders a term in the expression grammar, e.g. `anc & @W | desc`.
pub struct TermDisplay<'a> {
    ctx: &'a Context,
    term: &'a TypeTerm,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.term.is_bottom() {
            return f.write_str("BOT");
        }
        if self.term.is_top() {
            return f.write_str("TOP");
        }
        for (k, c) in self.term.clauses.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            for (j, lit) in self.ctx.clause_literals(c).into_iter().enumerate() {
                if j > 0 {
                    f.write_str(" & ")?;
                }
                match lit {
                    Literal::Gen(i) => f.write_str(self.ctx.poset.name(i))?,
                    Literal::Pos(i) => write!(f, "@{}", self.ctx.points[i])?,
                    Literal::Neg(i) => write!(f, "~@{}", self.ctx.points[i])?,
                }
            }
        }
        Ok(())
    }
}

fn absorb(set: &mut Vec<Clause>) {
    set.sort_by_key(|c| (c.gens.count_ones() + c.pos.count_ones() + c.neg.count_ones(), *c));
    set.dedup();
    let mut kept: Vec<Clause> = Vec::with_capacity(set.len());
    for c in set.drain(..) {
        if !kept.iter().any(|d| c.implies(d)) {
            kept.push(c);
        }
    }
    *set = kept;
}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

// Deposits the low bits of `sub` at the given positions.
fn spread(sub: u64, positions: &[usize]) -> u64 {
    positions
        .iter()
        .enumerate()
        .filter(|(k, _)| sub >> k & 1 == 1)
        .fold(0, |acc, (_, &i)| acc | 1 << i)
}
