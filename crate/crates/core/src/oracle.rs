//! Brute-force reference implementations.
//!
//! Nothing here calls into `basis`, `chains`, `closure` or `connect`: the
//! neighborhood systems are rebuilt from the raw open list by exhaustive
//! pair search, using only the lattice order and the space's accessors.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::chains::{NeighborhoodMode, TypeChain};
use crate::error::{Error, Result};
use crate::lattice::{Context, TypeTerm};
use crate::space::{PointSet, TypedSpace};

#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    /// Largest point count for exhaustive density search.
    pub max_points: usize,
    /// Largest region size for exhaustive connection search.
    pub max_connect_points: usize,
    pub max_subsets: u64,
    /// Cap on chains examined by [`oracle_check_space`].
    pub max_chains: usize,
    pub time_limit: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_points: 12,
            max_connect_points: 10,
            max_subsets: 1 << 24,
            max_chains: 200_000,
            time_limit: None,
        }
    }
}

struct Clock {
    start: Instant,
    limit: Option<Duration>,
}

impl Clock {
    fn new(limit: Option<Duration>) -> Self {
        Clock {
            start: Instant::now(),
            limit,
        }
    }

    fn check(&self) -> Result<()> {
        match self.limit {
            Some(l) if self.start.elapsed() > l => {
                Err(Error::Budget(format!("time limit of {l:?} exceeded")))
            }
            _ => Ok(()),
        }
    }
}

/// Minimal generators of a clause's up-closed mask, by direct comparison.
fn lowest_gens(ctx: &Context, mask: u64) -> u64 {
    let p = ctx.poset();
    let mut out = 0;
    for g in 0..p.len() {
        if mask >> g & 1 == 0 {
            continue;
        }
        let dominated = (0..p.len()).any(|h| h != g && mask >> h & 1 == 1 && p.leq(h, g));
        if !dominated {
            out |= 1 << g;
        }
    }
    out
}

fn term_gens(ctx: &Context, t: &TypeTerm) -> u64 {
    t.clauses()
        .iter()
        .fold(0, |acc, c| acc | lowest_gens(ctx, c.gens()))
}

/// `T_c(X)` and `J_c(X)` rebuilt from scratch.
struct NaiveSystem {
    /// Sandwiched opens.
    tc: Vec<PointSet>,
    /// Members of `J_c(X)`.
    jc: Vec<PointSet>,
    /// Visible opens above `p_0` that admit no binary split among them.
    j_bottom: Vec<PointSet>,
}

impl NaiveSystem {
    fn build(s: &TypedSpace, levels: &[TypeTerm], mode: NeighborhoodMode) -> Self {
        let ctx = s.ctx();
        let support = levels.iter().fold(0, |acc, t| acc | term_gens(ctx, t));
        let visible: Vec<(PointSet, &TypeTerm)> = s
            .opens()
            .iter()
            .zip(s.types())
            .filter(|(u, _)| !u.is_empty())
            .filter(|(_, t)| {
                mode == NeighborhoodMode::Literal || term_gens(ctx, t) & !support == 0
            })
            .map(|(u, t)| (*u, t))
            .collect();
        let k = levels.len();
        let families: Vec<Vec<PointSet>> = levels[..k - 1]
            .iter()
            .map(|p| {
                visible
                    .iter()
                    .filter(|(_, t)| ctx.leq(p, t).expect("same context"))
                    .map(|(u, _)| *u)
                    .collect()
            })
            .collect();
        let splits = |fam: &[PointSet], u: PointSet| {
            fam.iter().any(|&w| {
                w != u && fam.iter().any(|&v| v != u && (w | v) == u)
            })
        };
        let mut tc = Vec::new();
        let mut jc = Vec::new();
        for &(u, t) in &visible {
            let mut sandwiched = false;
            for i in 0..k - 1 {
                if ctx.leq(&levels[i], t).unwrap() && ctx.leq(t, &levels[i + 1]).unwrap() {
                    sandwiched = true;
                }
            }
            if !sandwiched {
                continue;
            }
            tc.push(u);
            if families
                .iter()
                .any(|fam| fam.contains(&u) && !splits(fam, u))
            {
                jc.push(u);
            }
        }
        let j_bottom = families[0]
            .iter()
            .copied()
            .filter(|&u| !splits(&families[0], u))
            .collect();
        NaiveSystem { tc, jc, j_bottom }
    }

    fn jc_at(&self, x: usize) -> Vec<PointSet> {
        self.jc.iter().copied().filter(|u| u.contains(x)).collect()
    }

    fn tc_at(&self, x: usize) -> Vec<PointSet> {
        self.tc.iter().copied().filter(|u| u.contains(x)).collect()
    }

    fn dense(&self, n: usize, d: PointSet) -> bool {
        (0..n).all(|x| {
            let fam = self.jc_at(x);
            if fam.is_empty() {
                d.contains(x)
            } else {
                fam.iter().all(|u| u.intersects(&d))
            }
        })
    }

    fn closure(&self, n: usize, a: PointSet) -> PointSet {
        PointSet::from_indices((0..n).filter(|&x| self.jc_at(x).iter().all(|u| u.intersects(&a))))
    }

    /// A separating pair for `a`, if any.
    fn separator(&self, a: PointSet) -> Option<(PointSet, PointSet)> {
        for (i, &u) in self.tc.iter().enumerate() {
            if !u.intersects(&a) {
                continue;
            }
            for &v in &self.tc[i + 1..] {
                if !u.intersects(&v) && v.intersects(&a) && a.is_subset(&(u | v)) {
                    return Some((u, v));
                }
            }
        }
        None
    }
}

fn check_points(s: &TypedSpace, n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::Budget(format!(
            "{} points exceed the oracle budget of {limit}",
            n
        )));
    }
    if s.point_count() > 63 {
        return Err(Error::Budget("too many points for subset search".into()));
    }
    Ok(())
}

/// Every `size`-subset of `universe`, in increasing bit order.
fn subsets_of_size(universe: PointSet, size: usize) -> impl Iterator<Item = PointSet> {
    let idx: Vec<usize> = universe.iter().collect();
    let n = idx.len();
    let mut mask: u64 = if size == 0 { 0 } else { (1u64 << size) - 1 };
    let mut done = size > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = PointSet::from_indices(
            idx.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x),
        );
        if mask == 0 {
            done = true;
        } else {
            // next combination with the same popcount
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
            if mask >> n != 0 {
                done = true;
            }
        }
        Some(out)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MinDense {
    pub size: usize,
    pub witnesses: Vec<PointSet>,
}

/// Smallest c-dense sets by search in increasing size.
pub fn oracle_min_dense(
    s: &TypedSpace,
    c: &TypeChain,
    mode: NeighborhoodMode,
    budget: &OracleBudget,
) -> Result<MinDense> {
    let n = s.point_count();
    check_points(s, n, budget.max_points)?;
    let clock = Clock::new(budget.time_limit);
    let sys = NaiveSystem::build(s, c.levels(), mode);
    let mut examined = 0u64;
    for size in 0..=n {
        let mut witnesses = Vec::new();
        for d in subsets_of_size(s.universe(), size) {
            examined += 1;
            if examined > budget.max_subsets {
                return Err(Error::Budget("subset budget exceeded".into()));
            }
            if sys.dense(n, d) {
                witnesses.push(d);
            }
        }
        clock.check()?;
        if !witnesses.is_empty() {
            return Ok(MinDense { size, witnesses });
        }
    }
    Err(Error::Invariant("the whole point set is not c-dense".into()))
}

/// Whether some subset of the region covered by `T_c(X)` contains both
/// points and admits no separating pair.
pub fn oracle_connected(
    s: &TypedSpace,
    c: &TypeChain,
    mode: NeighborhoodMode,
    x: usize,
    y: usize,
    budget: &OracleBudget,
) -> Result<bool> {
    s.check_point(x)?;
    s.check_point(y)?;
    let sys = NaiveSystem::build(s, c.levels(), mode);
    let region = sys.tc.iter().fold(PointSet::EMPTY, |acc, &u| acc | u);
    if !region.contains(x) || !region.contains(y) {
        return Ok(false);
    }
    check_points(s, region.len(), budget.max_connect_points)?;
    let clock = Clock::new(budget.time_limit);
    let fixed = PointSet::singleton(x) | PointSet::singleton(y);
    let free = region - fixed;
    let mut sub = free.bits();
    loop {
        let a = PointSet::from_bits(sub) | fixed;
        if sys.separator(a).is_none() {
            return Ok(true);
        }
        if sub == 0 {
            return Ok(false);
        }
        sub = (sub - 1) & free.bits();
        if sub & 0xff == 0 {
            clock.check()?;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub name: String,
    /// What the check quantifies over.
    pub scope: String,
    pub passed: bool,
    pub examined: u64,
    pub counterexamples: Vec<String>,
}

impl OracleCheck {
    fn new(name: &str, scope: &str) -> Self {
        OracleCheck {
            name: name.into(),
            scope: scope.into(),
            passed: true,
            examined: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.examined += 1;
        if !ok {
            self.passed = false;
            if self.counterexamples.len() < 5 {
                self.counterexamples.push(why());
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub mode: NeighborhoodMode,
    pub chains_examined: usize,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&OracleCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&OracleCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Strictly increasing chains of realized types with two or three levels.
fn realized_chains(ctx: &Context, types: &[TypeTerm], cap: usize) -> Result<Vec<Vec<TypeTerm>>> {
    let n = types.len();
    let lt: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && ctx.leq(&types[i], &types[j]).unwrap())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !lt[i][j] {
                continue;
            }
            out.push(vec![types[i].clone(), types[j].clone()]);
            for k in 0..n {
                if lt[j][k] {
                    out.push(vec![types[i].clone(), types[j].clone(), types[k].clone()]);
                }
            }
            if out.len() > cap {
                return Err(Error::Budget(format!("more than {cap} realized chains")));
            }
        }
    }
    Ok(out)
}

/// Re-verifies the structural properties of a space exhaustively. Chain
/// properties range over every strictly increasing chain of two or three
/// realized types plus the `extra` chains.
pub fn oracle_check_space(
    s: &TypedSpace,
    mode: NeighborhoodMode,
    extra: &[TypeChain],
    budget: &OracleBudget,
) -> Result<OracleReport> {
    let ctx = s.ctx();
    let clock = Clock::new(budget.time_limit);
    let n = s.point_count();
    let opens: Vec<(PointSet, &TypeTerm)> = s.opens().iter().copied().zip(s.types()).collect();
    let name = |u: PointSet| s.format_set(u);
    let show = |t: &TypeTerm| ctx.display(t).to_string();
    let leq = |a: &TypeTerm, b: &TypeTerm| ctx.leq(a, b).expect("same context");
    let type_of = |u: PointSet| opens.iter().find(|(v, _)| *v == u).map(|(_, t)| *t);
    let mut checks = Vec::new();

    let mut topo = OracleCheck::new("topology", "pairs of opens; empty set and whole space");
    let set: HashSet<PointSet> = opens.iter().map(|(u, _)| *u).collect();
    topo.record(set.contains(&PointSet::EMPTY), || "empty set missing".into());
    topo.record(set.contains(&s.universe()), || "whole space missing".into());
    for &(u, _) in &opens {
        for &(v, _) in &opens {
            topo.record(set.contains(&(u | v)), || format!("{} ∪ {} not open", name(u), name(v)));
            topo.record(set.contains(&(u & v)), || format!("{} ∩ {} not open", name(u), name(v)));
        }
    }
    checks.push(topo);

    let mut empty = OracleCheck::new("empty-iff-bottom", "every open");
    let mut top = OracleCheck::new("never-top", "every open");
    for &(u, t) in &opens {
        empty.record(u.is_empty() == t.is_bottom(), || {
            format!("{} typed {}", name(u), show(t))
        });
        top.record(!leq(&ctx.top(), t), || format!("{} typed TOP", name(u)));
    }
    checks.push(empty);
    checks.push(top);

    let mut mono = OracleCheck::new("monotone", "nested pairs of opens");
    let mut meet_b = OracleCheck::new("meet-bound", "pairs of opens");
    let mut join_b = OracleCheck::new("join-bound", "pairs of opens");
    for &(u, tu) in &opens {
        for &(v, tv) in &opens {
            if u.is_subset(&v) {
                mono.record(leq(tu, tv), || {
                    format!("{} ⊆ {} but {} ≰ {}", name(u), name(v), show(tu), show(tv))
                });
            }
            if let Some(ti) = type_of(u & v) {
                let m = ctx.meet(tu, tv)?;
                meet_b.record(leq(ti, &m), || {
                    format!("σ({} ∩ {}) = {} ≰ {}", name(u), name(v), show(ti), show(&m))
                });
            }
            if let Some(tj) = type_of(u | v) {
                let j = ctx.join(tu, tv)?;
                join_b.record(leq(&j, tj), || {
                    format!("{} ≰ σ({} ∪ {}) = {}", show(&j), name(u), name(v), show(tj))
                });
            }
        }
    }
    checks.push(mono);
    checks.push(meet_b);
    checks.push(join_b);

    let mut realized: Vec<TypeTerm> = Vec::new();
    for &(u, t) in &opens {
        if !u.is_empty() && !realized.contains(t) {
            realized.push(t.clone());
        }
    }

    let mut forcing = OracleCheck::new(
        "incompatible-forcing",
        "points × pairs of realized types with BOT meet",
    );
    for x in 0..n {
        let forced: Vec<&TypeTerm> = realized
            .iter()
            .filter(|p| opens.iter().any(|(u, t)| u.contains(x) && t == p))
            .collect();
        for (i, p) in forced.iter().enumerate() {
            for q in &forced[i + 1..] {
                let m = ctx.meet(p, q)?;
                forcing.record(!m.is_bottom(), || {
                    format!("{} and {} both force {}", show(p), show(q), s.ctx().points()[x])
                });
            }
        }
    }
    checks.push(forcing);

    let nonempty: Vec<(PointSet, &TypeTerm)> =
        opens.iter().copied().filter(|(u, _)| !u.is_empty()).collect();
    let splits = |fam: &[PointSet], u: PointSet| {
        fam.iter()
            .any(|&w| w != u && fam.iter().any(|&v| v != u && (w | v) == u))
    };
    let above = |p: &TypeTerm| -> Vec<PointSet> {
        nonempty
            .iter()
            .filter(|(_, t)| leq(p, t))
            .map(|(u, _)| *u)
            .collect()
    };

    let mut own = OracleCheck::new("own-type-irreducible", "nonempty opens");
    for &(u, t) in &nonempty {
        let fam = above(t);
        own.record(!splits(&fam, u), || {
            format!("{} splits above its own type {}", name(u), show(t))
        });
    }
    checks.push(own);

    let mut basis = OracleCheck::new("join-basis", "realized types p × opens above p");
    for p in &realized {
        let fam = above(p);
        let irr: Vec<PointSet> = fam.iter().copied().filter(|&u| !splits(&fam, u)).collect();
        for &u in &fam {
            let cover = irr
                .iter()
                .filter(|v| v.is_subset(&u))
                .fold(PointSet::EMPTY, |acc, &v| acc | v);
            basis.record(cover == u, || {
                format!("irreducibles above {} inside {} cover only {}", show(p), name(u), name(cover))
            });
        }
    }
    checks.push(basis);
    clock.check()?;

    let mut chains = realized_chains(ctx, &realized, budget.max_chains)?;
    for c in extra {
        if c.levels().iter().any(|t| ctx.check(t).is_err()) {
            return Err(Error::ContextMismatch);
        }
        chains.push(c.levels().to_vec());
    }
    let chain_scope = "points × realized chains of 2 or 3 levels and the given chains";
    let mut nbhd = OracleCheck::new("chain-nbhd-base", chain_scope);
    let mut core_check = OracleCheck::new(
        "closure-intersection-criterion",
        "realized chains × points outside the exceptional set × subsets",
    );
    let mut exceptional = OracleCheck::new("exceptional-set", "realized chains");
    let mut irr_conn = OracleCheck::new(
        "irreducible-connected",
        "realized chains × members of J_c(X) irreducible above the bottom level",
    );
    let mut anchor_conn = OracleCheck::new(
        "anchor-irreducible-connected",
        "realized chains × visible opens irreducible above the bottom level",
    );
    let subsets: Vec<PointSet> = if n <= 10 {
        (0..1u64 << n).map(PointSet::from_bits).collect()
    } else {
        let mut v: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for x in 0..n {
            for y in x + 1..n {
                v.push(PointSet::singleton(x) | PointSet::singleton(y));
            }
        }
        v
    };
    for levels in &chains {
        let sys = NaiveSystem::build(s, levels, mode);
        let label = || {
            levels
                .iter()
                .map(&show)
                .collect::<Vec<_>>()
                .join(" ; ")
        };
        let mut exc = PointSet::EMPTY;
        let mut reach = PointSet::EMPTY;
        for x in 0..n {
            let jx = sys.jc_at(x);
            for u in sys.tc_at(x) {
                let ok = jx.iter().any(|v| v.is_subset(&u));
                nbhd.record(ok, || {
                    format!("chain {}: no base member at {} inside {}", label(), s.ctx().points()[x], name(u))
                });
            }
            if jx.is_empty() {
                exc.insert(x);
                continue;
            }
            for v in &jx {
                reach = reach | *v;
            }
            let core = jx.iter().fold(s.universe(), |acc, &v| acc & v);
            for &a in &subsets {
                let by_def = jx.iter().all(|v| v.intersects(&a));
                core_check.record(by_def == core.intersects(&a), || {
                    format!(
                        "chain {}: at {} with A = {}, intersection {} disagrees with the definition",
                        label(),
                        s.ctx().points()[x],
                        name(a),
                        name(core)
                    )
                });
            }
        }
        exceptional.record(exc == s.universe() - reach, || {
            format!("chain {}: exceptional set {} vs uncovered {}", label(), name(exc), name(s.universe() - reach))
        });
        exceptional.record(sys.closure(n, exc) == exc, || {
            format!("chain {}: exceptional set {} is not closed", label(), name(exc))
        });
        for &u in &sys.jc {
            if sys.j_bottom.contains(&u) {
                irr_conn.record(sys.separator(u).is_none(), || {
                    format!("chain {}: {} is not c-connected", label(), name(u))
                });
            }
        }
        for &u in &sys.j_bottom {
            anchor_conn.record(sys.separator(u).is_none(), || {
                format!("chain {}: {} is not c-connected", label(), name(u))
            });
        }
        clock.check()?;
    }

    let mut pchain_irr = OracleCheck::new(
        "pchain-members-irreducible",
        "generators p × points × opens typed in the sublattice of p below p",
    );
    let mut pchain_conn = OracleCheck::new(
        "pchain-connected",
        "generators p × opens typed in the sublattice of p below p",
    );
    for g in 0..ctx.poset().len() {
        let p = ctx.generator(ctx.poset().name(g))?;
        for &(u, t) in &nonempty {
            if term_gens(ctx, t) & !(1u64 << g) != 0 || !leq(t, &p) {
                continue;
            }
            let levels = vec![t.clone(), p.clone()];
            let sys = NaiveSystem::build(s, &levels, mode);
            for x in u.iter() {
                pchain_irr.record(sys.jc_at(x).contains(&u), || {
                    format!(
                        "{} is not in J_c({}) for the chain {} ; {}",
                        name(u),
                        s.ctx().points()[x],
                        show(t),
                        show(&p)
                    )
                });
            }
            pchain_conn.record(sys.separator(u).is_none(), || {
                format!("{} is not c-connected for {} ; {}", name(u), show(t), show(&p))
            });
        }
    }

    checks.push(nbhd);
    checks.push(pchain_irr);
    checks.push(core_check);
    checks.push(exceptional);
    checks.push(irr_conn);
    checks.push(anchor_conn);
    checks.push(pchain_conn);
    Ok(OracleReport {
        mode,
        chains_examined: chains.len(),
        checks,
    })
}

/// Closure computed by the naive system, for cross-checks in tests.
pub fn oracle_closure(
    s: &TypedSpace,
    c: &TypeChain,
    mode: NeighborhoodMode,
    a: PointSet,
) -> PointSet {
    NaiveSystem::build(s, c.levels(), mode).closure(s.point_count(), a)
}

/// `J_c(x)` from the naive system, as sets.
pub fn oracle_jc_at(s: &TypedSpace, c: &TypeChain, mode: NeighborhoodMode, x: usize) -> Vec<PointSet> {
    NaiveSystem::build(s, c.levels(), mode).jc_at(x)
}

/// `T_c(x)` from the naive system, as sets.
pub fn oracle_tc_at(s: &TypedSpace, c: &TypeChain, mode: NeighborhoodMode, x: usize) -> Vec<PointSet> {
    NaiveSystem::build(s, c.levels(), mode).tc_at(x)
}

/// Whether `a` admits no separating pair, by the naive system.
pub fn oracle_is_connected(s: &TypedSpace, c: &TypeChain, mode: NeighborhoodMode, a: PointSet) -> bool {
    NaiveSystem::build(s, c.levels(), mode).separator(a).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerate_binomially() {
        let u = PointSet::from_indices([1, 3, 4, 6]);
        for k in 0..=4 {
            let all: Vec<PointSet> = subsets_of_size(u, k).collect();
            let expected = [1, 4, 6, 4, 1][k];
            assert_eq!(all.len(), expected, "size {k}");
            assert!(all.iter().all(|s| s.len() == k && s.is_subset(&u)));
        }
        assert_eq!(subsets_of_size(u, 5).count(), 0);
    }
}
