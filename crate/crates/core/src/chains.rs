//! Chains of types, the neighborhood systems they select, and chain covers.
//!
//! A chain `p_0 <= ... <= p_{k-1}` selects, at a point `x`, the opens around
//! `x` whose type sits between two consecutive levels (`T_c(x)`), and among
//! those the ones that are join-irreducible above some level (`J_c(x)`).
//!
//! By default only opens typed inside the sublattice spanned by the chain's
//! own generators take part (see [`NeighborhoodMode`]).

use std::fmt;

use serde::Serialize;

use crate::basis::binary_split;
use crate::error::{Error, Result};
use crate::lattice::{Context, TypeTerm};
use crate::space::{OpenId, PointSet, TypedSpace};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeChain {
    levels: Vec<TypeTerm>,
}

impl TypeChain {
    pub fn new(ctx: &Context, levels: Vec<TypeTerm>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidChain(format!(
                "a chain needs at least two levels, got {}",
                levels.len()
            )));
        }
        for (i, t) in levels.iter().enumerate() {
            ctx.check(t)?;
            if t.is_bottom() || t.is_top() {
                return Err(Error::InvalidChain(format!("level {i} is BOT or TOP")));
            }
        }
        for i in 1..levels.len() {
            if !ctx.leq_unchecked(&levels[i - 1], &levels[i]) {
                return Err(Error::InvalidChain(format!(
                    "level {} ({}) is not below level {} ({})",
                    i - 1,
                    ctx.display(&levels[i - 1]),
                    i,
                    ctx.display(&levels[i])
                )));
            }
        }
        Ok(TypeChain { levels })
    }

    /// Parses `expr ; expr ; ...`.
    pub fn parse(ctx: &Context, text: &str) -> Result<Self> {
        let levels = text
            .split(';')
            .map(|part| ctx.parse(part))
            .collect::<Result<Vec<_>>>()?;
        TypeChain::new(ctx, levels)
    }

    pub fn levels(&self) -> &[TypeTerm] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn bottom_level(&self) -> &TypeTerm {
        &self.levels[0]
    }

    pub fn top_level(&self) -> &TypeTerm {
        &self.levels[self.levels.len() - 1]
    }

    /// Minimal generators mentioned by any level.
    pub fn generator_support(&self, ctx: &Context) -> u64 {
        self.levels
            .iter()
            .flat_map(|t| t.clauses())
            .fold(0, |acc, c| acc | ctx.poset().minimal(c.gens()))
    }

    pub fn display<'a>(&'a self, ctx: &'a Context) -> ChainDisplay<'a> {
        ChainDisplay { ctx, chain: self }
    }
}

pub struct ChainDisplay<'a> {
    ctx: &'a Context,
    chain: &'a TypeChain,
}

impl fmt::Display for ChainDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.chain.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{}", self.ctx.display(t))?;
        }
        Ok(())
    }
}

/// Which opens a chain can see.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighborhoodMode {
    /// Only opens whose type lies in the sublattice generated by the
    /// chain's generators and the point literals.
    #[default]
    Restricted,
    /// Every open, read straight from the sandwich condition.
    Literal,
}

/// Neighborhood data for one chain over one space, computed once.
#[derive(Debug, Clone)]
pub struct ChainView<'s> {
    space: &'s TypedSpace,
    chain: TypeChain,
    mode: NeighborhoodMode,
    visible: Vec<bool>,
    /// `above[i][u]`: `U` visible and `p_i <= σ(U)`, for `i < k - 1`.
    above: Vec<Vec<bool>>,
    /// `irreducible[i][u]`: `U` is join-irreducible within `above[i]`.
    irreducible: Vec<Vec<bool>>,
    sandwiched: Vec<bool>,
    in_jc: Vec<bool>,
    tc: Vec<OpenId>,
    jc: Vec<OpenId>,
}

impl<'s> ChainView<'s> {
    pub fn new(space: &'s TypedSpace, chain: &TypeChain, mode: NeighborhoodMode) -> Result<Self> {
        let ctx = space.ctx();
        for t in chain.levels() {
            ctx.check(t)?;
        }
        let n = space.opens().len();
        let support = chain.generator_support(ctx);
        let visible: Vec<bool> = (0..n)
            .map(|u| {
                !space.open(u).is_empty()
                    && (mode == NeighborhoodMode::Literal
                        || ctx.in_sublattice(space.type_of(u), support))
            })
            .collect();
        let levels = chain.levels();
        let k = levels.len();
        let above: Vec<Vec<bool>> = levels[..k - 1]
            .iter()
            .map(|p| {
                (0..n)
                    .map(|u| visible[u] && ctx.leq_unchecked(p, space.type_of(u)))
                    .collect()
            })
            .collect();
        let irreducible: Vec<Vec<bool>> = above
            .iter()
            .map(|fam| {
                let sets: Vec<PointSet> =
                    (0..n).filter(|&u| fam[u]).map(|u| space.open(u)).collect();
                (0..n)
                    .map(|u| fam[u] && binary_split(space.open(u), sets.iter().copied()).is_none())
                    .collect()
            })
            .collect();
        let sandwiched: Vec<bool> = (0..n)
            .map(|u| {
                visible[u]
                    && (0..k - 1).any(|i| {
                        above[i][u] && ctx.leq_unchecked(space.type_of(u), &levels[i + 1])
                    })
            })
            .collect();
        let in_jc: Vec<bool> = (0..n)
            .map(|u| sandwiched[u] && (0..k - 1).any(|i| irreducible[i][u]))
            .collect();
        let tc = (0..n).filter(|&u| sandwiched[u]).collect();
        let jc = (0..n).filter(|&u| in_jc[u]).collect();
        Ok(ChainView {
            space,
            chain: chain.clone(),
            mode,
            visible,
            above,
            irreducible,
            sandwiched,
            in_jc,
            tc,
            jc,
        })
    }

    pub fn space(&self) -> &'s TypedSpace {
        self.space
    }

    pub fn chain(&self) -> &TypeChain {
        &self.chain
    }

    pub fn mode(&self) -> NeighborhoodMode {
        self.mode
    }

    pub fn is_visible(&self, u: OpenId) -> bool {
        self.visible[u]
    }

    /// `T_c(X)`: every sandwiched open.
    pub fn tc(&self) -> &[OpenId] {
        &self.tc
    }

    /// `J_c(X)`: every member of some `J_c(x)`.
    pub fn jc(&self) -> &[OpenId] {
        &self.jc
    }

    pub fn in_tc(&self, u: OpenId) -> bool {
        self.sandwiched[u]
    }

    pub fn in_jc(&self, u: OpenId) -> bool {
        self.in_jc[u]
    }

    /// Visible opens above `p_0` that are join-irreducible among them.
    pub fn j_geq_bottom(&self) -> Vec<OpenId> {
        (0..self.visible.len())
            .filter(|&u| self.irreducible[0][u])
            .collect()
    }

    /// Whether `U` lies above level `i` and is join-irreducible there.
    pub fn irreducible_at_level(&self, i: usize, u: OpenId) -> bool {
        self.irreducible.get(i).is_some_and(|row| row[u])
    }

    pub fn above_level(&self, i: usize, u: OpenId) -> bool {
        self.above.get(i).is_some_and(|row| row[u])
    }

    pub fn tc_at(&self, x: usize) -> Result<Vec<OpenId>> {
        self.space.check_point(x)?;
        Ok(self.members_at(&self.tc, x))
    }

    pub fn jc_at(&self, x: usize) -> Result<Vec<OpenId>> {
        self.space.check_point(x)?;
        Ok(self.members_at(&self.jc, x))
    }

    fn members_at(&self, family: &[OpenId], x: usize) -> Vec<OpenId> {
        family
            .iter()
            .copied()
            .filter(|&u| self.space.open(u).contains(x))
            .collect()
    }

    /// Points lying in some member of `T_c(X)`.
    pub fn covered(&self) -> PointSet {
        self.tc
            .iter()
            .fold(PointSet::EMPTY, |acc, &u| acc | self.space.open(u))
    }
}

/// Convenience wrapper for one-off queries in the default mode.
pub fn tc_at(s: &TypedSpace, x: usize, c: &TypeChain) -> Result<Vec<OpenId>> {
    ChainView::new(s, c, NeighborhoodMode::default())?.tc_at(x)
}

pub fn jc_at(s: &TypedSpace, x: usize, c: &TypeChain) -> Result<Vec<OpenId>> {
    ChainView::new(s, c, NeighborhoodMode::default())?.jc_at(x)
}

/// A chain is a `p`-chain when all its levels lie in the sublattice spanned
/// by `p` and the point literals and its top level is `p` itself.
pub fn is_p_chain(ctx: &Context, c: &TypeChain, p: usize) -> bool {
    let Ok(name) = ctx.generator(ctx.poset().name(p)) else {
        return false;
    };
    c.levels().iter().all(|t| ctx.in_sublattice(t, 1 << p)) && c.top_level() == &name
}

/// Opens around `x` typed inside the sublattice spanned by `gens` and lying
/// below the join of those generators.
pub fn t_pchain_at(s: &TypedSpace, x: usize, gens: u64) -> Result<Vec<OpenId>> {
    s.check_point(x)?;
    let ctx = s.ctx();
    if gens == 0 {
        return Err(Error::Precondition("empty generator set".into()));
    }
    if gens >> ctx.poset().len() != 0 && ctx.poset().len() < 64 {
        return Err(Error::Precondition("generator index out of range".into()));
    }
    let names: Vec<TypeTerm> = crate::lattice::bits(gens)
        .map(|g| ctx.generator(ctx.poset().name(g)))
        .collect::<Result<_>>()?;
    let ceiling = ctx.join_all(names.iter());
    Ok(s.nonempty()
        .filter(|&u| s.open(u).contains(x))
        .filter(|&u| ctx.in_sublattice(s.type_of(u), gens))
        .filter(|&u| ctx.leq_unchecked(s.type_of(u), &ceiling))
        .collect())
}

/// Union of `T_c(x)` over the two-level `p`-chains `q ; p` with `q` a
/// realized type. Longer `p`-chains select nothing more.
pub fn pchain_union_at(
    s: &TypedSpace,
    x: usize,
    p: usize,
    mode: NeighborhoodMode,
) -> Result<Vec<OpenId>> {
    s.check_point(x)?;
    let ctx = s.ctx();
    let top = ctx.generator(ctx.poset().name(p))?;
    let mut lows: Vec<TypeTerm> = s
        .realized_types()
        .types
        .into_iter()
        .filter(|q| ctx.in_sublattice(q, 1 << p) && ctx.leq_unchecked(q, &top))
        .collect();
    lows.push(top.clone());
    let mut out: Vec<OpenId> = Vec::new();
    for q in lows {
        let chain = TypeChain::new(ctx, vec![q, top.clone()])?;
        let view = ChainView::new(s, &chain, mode)?;
        out.extend(view.tc_at(x)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ChainCover {
    pub chains: Vec<TypeChain>,
}

/// Minimum chain partition of the realized types via bipartite matching on
/// the strict order. One-level chains are padded by repeating the level.
pub fn chain_cover(s: &TypedSpace) -> Result<ChainCover> {
    let realized = s.realized_types();
    let n = realized.len();
    let less = |i: usize, j: usize| i != j && realized.leq[i][j];
    // match_right[j] = i means i is immediately followed by j in a chain.
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        augment(i, &less, &mut match_right, &mut seen, n);
    }
    let mut next: Vec<Option<usize>> = vec![None; n];
    let mut has_prev = vec![false; n];
    for (j, m) in match_right.iter().enumerate() {
        if let Some(i) = *m {
            next[i] = Some(j);
            has_prev[j] = true;
        }
    }
    let mut chains = Vec::new();
    for start in (0..n).filter(|&i| !has_prev[i]) {
        let mut levels = vec![realized.types[start].clone()];
        let mut cur = start;
        while let Some(j) = next[cur] {
            levels.push(realized.types[j].clone());
            cur = j;
        }
        if levels.len() == 1 {
            levels.push(levels[0].clone());
        }
        chains.push(TypeChain::new(s.ctx(), levels)?);
    }
    Ok(ChainCover { chains })
}

fn augment(
    i: usize,
    less: &impl Fn(usize, usize) -> bool,
    match_right: &mut [Option<usize>],
    seen: &mut [bool],
    n: usize,
) -> bool {
    for j in 0..n {
        if !less(i, j) || seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match match_right[j] {
            None => true,
            Some(k) => augment(k, less, match_right, seen, n),
        };
        if free {
            match_right[j] = Some(i);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Poset;
    use crate::space::{generate_topology, GeneratorSpec, TopologyOptions};

    fn ray_space() -> TypedSpace {
        // nested rays {c} ⊂ {b,c} ⊂ {a,b,c}
        let ctx = Context::new(Poset::antichain(&["r", "s"]).unwrap(), &["a", "b", "c"]).unwrap();
        let spec = |name: &str, idx: &[usize], t: &str| GeneratorSpec {
            name: name.into(),
            members: PointSet::from_indices(idx.iter().copied()),
            term: ctx.parse(t).unwrap(),
        };
        let gens = vec![
            spec("c", &[2], "r & @c"),
            spec("bc", &[1, 2], "r & @b"),
            spec("abc", &[0, 1, 2], "r & @a"),
        ];
        generate_topology(ctx.clone(), gens, TopologyOptions::default()).unwrap()
    }

    #[test]
    fn chain_rejects_descending_and_short_inputs() {
        let s = ray_space();
        let ctx = s.ctx();
        assert!(matches!(TypeChain::parse(ctx, "r"), Err(Error::InvalidChain(_))));
        assert!(matches!(
            TypeChain::parse(ctx, "r ; r & @a"),
            Err(Error::InvalidChain(_))
        ));
        assert!(matches!(TypeChain::parse(ctx, "BOT ; r"), Err(Error::InvalidChain(_))));
        let c = TypeChain::parse(ctx, "r & @a ; r").unwrap();
        assert_eq!(c.display(ctx).to_string(), "r & @a ; r");
    }

    #[test]
    fn nested_rays_are_all_irreducible() {
        let s = ray_space();
        let c = TypeChain::parse(s.ctx(), "r & @a & @b & @c ; r").unwrap();
        let view = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
        let c_pt = s.point_id("c").unwrap();
        assert_eq!(view.tc_at(c_pt).unwrap().len(), 3);
        assert_eq!(view.jc_at(c_pt).unwrap(), view.tc_at(c_pt).unwrap());
    }

    #[test]
    fn foreign_generator_hides_opens_in_restricted_mode() {
        let s = ray_space();
        let c = TypeChain::parse(s.ctx(), "s & @c ; s").unwrap();
        let view = ChainView::new(&s, &c, NeighborhoodMode::Restricted).unwrap();
        assert!(view.tc().is_empty());
    }

    #[test]
    fn two_level_chain_is_plain_sandwich() {
        let s = ray_space();
        let ctx = s.ctx();
        let lo = ctx.parse("r & @b & @c").unwrap();
        let hi = ctx.parse("r & @b").unwrap();
        let c = TypeChain::new(ctx, vec![lo.clone(), hi.clone()]).unwrap();
        let view = ChainView::new(&s, &c, NeighborhoodMode::Literal).unwrap();
        for u in s.nonempty() {
            let t = s.type_of(u);
            let expected = ctx.leq_unchecked(&lo, t) && ctx.leq_unchecked(t, &hi);
            assert_eq!(view.in_tc(u), expected);
        }
    }

    #[test]
    fn p_chain_recognition() {
        let s = ray_space();
        let ctx = s.ctx();
        let r = ctx.poset().index_of("r").unwrap();
        let good = TypeChain::parse(ctx, "r & @c ; r").unwrap();
        assert!(is_p_chain(ctx, &good, r));
        let mixed = TypeChain::parse(ctx, "r & s ; r").unwrap();
        assert!(!is_p_chain(ctx, &mixed, r));
        let wrong_top = TypeChain::parse(ctx, "r & @c ; r | s").unwrap();
        assert!(!is_p_chain(ctx, &wrong_top, r));
    }

    #[test]
    fn pchain_family_matches_union_over_chains() {
        let s = ray_space();
        let r = s.ctx().poset().index_of("r").unwrap();
        for x in 0..3 {
            let direct = t_pchain_at(&s, x, 1 << r).unwrap();
            let union = pchain_union_at(&s, x, r, NeighborhoodMode::Restricted).unwrap();
            assert_eq!(direct, union);
        }
    }

    #[test]
    fn cover_of_total_order_is_one_chain() {
        let s = ray_space();
        let cover = chain_cover(&s).unwrap();
        assert_eq!(cover.chains.len(), 1);
        assert_eq!(cover.chains[0].len(), 3);
    }

    #[test]
    fn cover_of_antichain_pads_levels() {
        let ctx = Context::new(Poset::antichain(&["g", "h"]).unwrap(), &["a", "b"]).unwrap();
        let gens = vec![
            GeneratorSpec {
                name: "A".into(),
                members: PointSet::from_indices([0]),
                term: ctx.parse("g").unwrap(),
            },
            GeneratorSpec {
                name: "B".into(),
                members: PointSet::from_indices([1]),
                term: ctx.parse("h").unwrap(),
            },
        ];
        let s = generate_topology(ctx, gens, TopologyOptions::default()).unwrap();
        // types g, h, g|h: width 2
        let cover = chain_cover(&s).unwrap();
        assert_eq!(cover.chains.len(), 2);
        for x in 0..2 {
            let mut all: Vec<OpenId> = Vec::new();
            for c in &cover.chains {
                all.extend(tc_at(&s, x, c).unwrap());
            }
            all.sort_unstable();
            all.dedup();
            let expected: Vec<OpenId> = s.nonempty().filter(|&u| s.open(u).contains(x)).collect();
            assert_eq!(all, expected);
        }
    }
}
