//! Families of opens above a type and their join-irreducible members.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::TypeTerm;
use crate::space::{OpenId, PointSet, TypedSpace};

/// Opens whose type lies above `anchor`, optionally restricted to those
/// containing one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypedFamily {
    #[serde(skip)]
    pub anchor: TypeTerm,
    pub at: Option<usize>,
    pub members: Vec<OpenId>,
}

impl TypedFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn sets(&self, s: &TypedSpace) -> Vec<PointSet> {
        self.members.iter().map(|&u| s.open(u)).collect()
    }
}

/// Finds `W, V`, both proper subsets of `target` and drawn from `members`,
/// with `W ∪ V = target`.
pub(crate) fn binary_split<I>(target: PointSet, members: I) -> Option<(PointSet, PointSet)>
where
    I: IntoIterator<Item = PointSet>,
{
    let parts: Vec<PointSet> = members
        .into_iter()
        .filter(|m| m.is_subset(&target) && *m != target)
        .collect();
    let cover = parts.iter().fold(PointSet::EMPTY, |acc, &m| acc | m);
    if cover != target {
        return None;
    }
    for (i, &w) in parts.iter().enumerate() {
        let need = target - w;
        if let Some(&v) = parts[i..].iter().find(|v| need.is_subset(v)) {
            return Some((w, v));
        }
    }
    None
}

fn check_anchor(s: &TypedSpace, p: &TypeTerm) -> Result<()> {
    s.ctx().check(p)?;
    if p.is_bottom() {
        return Err(Error::Precondition("anchor type must not be BOT".into()));
    }
    Ok(())
}

fn check_member(s: &TypedSpace, u: OpenId, p: &TypeTerm) -> Result<()> {
    check_anchor(s, p)?;
    if u >= s.opens().len() {
        return Err(Error::Precondition(format!("no open with id {u}")));
    }
    if s.open(u).is_empty() {
        return Err(Error::Precondition("the open set must be nonempty".into()));
    }
    if !s.ctx().leq_unchecked(p, s.type_of(u)) {
        return Err(Error::Precondition(format!(
            "type of {} is not above {}",
            s.format_set(s.open(u)),
            s.ctx().display(p)
        )));
    }
    Ok(())
}

/// `T_{>=p}`: every open `U` with `p <= σ(U)`, containing `at` if given.
pub fn t_geq(s: &TypedSpace, p: &TypeTerm, at: Option<usize>) -> Result<TypedFamily> {
    check_anchor(s, p)?;
    if let Some(x) = at {
        s.check_point(x)?;
    }
    let members = s
        .nonempty()
        .filter(|&u| at.is_none_or(|x| s.open(u).contains(x)))
        .filter(|&u| s.ctx().leq_unchecked(p, s.type_of(u)))
        .collect();
    Ok(TypedFamily {
        anchor: p.clone(),
        at,
        members,
    })
}

fn geq_sets<'a>(s: &'a TypedSpace, p: &TypeTerm) -> impl Iterator<Item = PointSet> + 'a {
    let p = p.clone();
    s.nonempty()
        .filter(move |&u| s.ctx().leq_unchecked(&p, s.type_of(u)))
        .map(|u| s.open(u))
}

/// Returns a split `W ∪ V = U` inside `T_{>=p}` if one exists.
pub fn join_split(s: &TypedSpace, u: OpenId, p: &TypeTerm) -> Result<Option<(PointSet, PointSet)>> {
    check_member(s, u, p)?;
    Ok(binary_split(s.open(u), geq_sets(s, p)))
}

pub fn is_p_join_irreducible(s: &TypedSpace, u: OpenId, p: &TypeTerm) -> Result<bool> {
    Ok(join_split(s, u, p)?.is_none())
}

/// Dual of [`is_p_join_irreducible`]: no two other members of `T_{>=p}`
/// intersect to `U`.
pub fn is_p_meet_irreducible(s: &TypedSpace, u: OpenId, p: &TypeTerm) -> Result<bool> {
    check_member(s, u, p)?;
    let target = s.open(u);
    let above: Vec<PointSet> = geq_sets(s, p)
        .filter(|m| target.is_subset(m) && *m != target)
        .collect();
    for (i, &w) in above.iter().enumerate() {
        if above[i + 1..].iter().any(|&v| w & v == target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `J_{>=p}`: the p-join-irreducible members of `T_{>=p}`.
pub fn j_geq(s: &TypedSpace, p: &TypeTerm, at: Option<usize>) -> Result<TypedFamily> {
    let all = t_geq(s, p, None)?;
    let sets = all.sets(s);
    let members = all
        .members
        .iter()
        .copied()
        .filter(|&u| at.is_none_or(|x| s.open(u).contains(x)))
        .filter(|&u| binary_split(s.open(u), sets.iter().copied()).is_none())
        .collect();
    Ok(TypedFamily {
        anchor: p.clone(),
        at,
        members,
    })
}

/// All members of `J_{>=p}` inside `U`. Their union must be `U`; anything
/// else is reported as an invariant failure.
pub fn join_decompose(s: &TypedSpace, u: OpenId, p: &TypeTerm) -> Result<Vec<OpenId>> {
    check_member(s, u, p)?;
    let target = s.open(u);
    let parts: Vec<OpenId> = j_geq(s, p, None)?
        .members
        .into_iter()
        .filter(|&v| s.open(v).is_subset(&target))
        .collect();
    let union = parts.iter().fold(PointSet::EMPTY, |acc, &v| acc | s.open(v));
    if union != target {
        return Err(Error::Invariant(format!(
            "irreducible members of {} above {} only cover {}",
            s.format_set(target),
            s.ctx().display(p),
            s.format_set(union)
        )));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Context, Poset};
    use crate::space::{generate_topology, GeneratorSpec, TopologyOptions};

    fn three_opens() -> TypedSpace {
        // {a}, {b}, {a,b} plus the whole space {a,b,c}
        let ctx = Context::new(Poset::antichain(&["g"]).unwrap(), &["a", "b", "c"]).unwrap();
        let gens = vec![
            GeneratorSpec {
                name: "A".into(),
                members: PointSet::from_indices([0]),
                term: ctx.parse("g & @a").unwrap(),
            },
            GeneratorSpec {
                name: "B".into(),
                members: PointSet::from_indices([1]),
                term: ctx.parse("g & @b").unwrap(),
            },
            GeneratorSpec {
                name: "X".into(),
                members: PointSet::from_indices([0, 1, 2]),
                term: ctx.parse("g").unwrap(),
            },
        ];
        generate_topology(ctx, gens, TopologyOptions::default()).unwrap()
    }

    #[test]
    fn union_of_two_points_splits_under_common_anchor() {
        let s = three_opens();
        let g = s.ctx().parse("g & @a & @b").unwrap();
        let ab = s.open_id(PointSet::from_indices([0, 1])).unwrap();
        assert!(!is_p_join_irreducible(&s, ab, &g).unwrap());
        let own = s.type_of(ab).clone();
        assert!(is_p_join_irreducible(&s, ab, &own).unwrap());
    }

    #[test]
    fn singletons_are_irreducible() {
        let s = three_opens();
        let a = s.open_id(PointSet::singleton(0)).unwrap();
        let bottomish = s.ctx().parse("g & @a & @b").unwrap();
        assert!(is_p_join_irreducible(&s, a, &bottomish).unwrap());
    }

    #[test]
    fn own_type_makes_member_irreducible() {
        let s = three_opens();
        for u in s.nonempty() {
            let p = s.type_of(u).clone();
            assert!(is_p_join_irreducible(&s, u, &p).unwrap());
            assert!(j_geq(&s, &p, None).unwrap().members.contains(&u));
        }
    }

    #[test]
    fn top_anchor_gives_empty_families() {
        let s = three_opens();
        let top = s.ctx().top();
        assert!(t_geq(&s, &top, None).unwrap().is_empty());
        assert!(j_geq(&s, &top, None).unwrap().is_empty());
    }

    #[test]
    fn bottom_anchor_is_rejected() {
        let s = three_opens();
        assert!(matches!(
            t_geq(&s, &s.ctx().bottom(), None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn decomposition_covers_every_open() {
        let s = three_opens();
        for u in s.nonempty() {
            for v in s.nonempty() {
                let p = s.type_of(v).clone();
                if s.ctx().leq_unchecked(&p, s.type_of(u)) {
                    let parts = join_decompose(&s, u, &p).unwrap();
                    assert!(!parts.is_empty());
                }
            }
        }
    }

    #[test]
    fn meet_irreducibility_of_whole_space() {
        let s = three_opens();
        let x = s.open_id(s.universe()).unwrap();
        let p = s.type_of(x).clone();
        assert!(is_p_meet_irreducible(&s, x, &p).unwrap());
        let a = s.open_id(PointSet::singleton(0)).unwrap();
        let low = s.ctx().parse("g & @a & @b").unwrap();
        // {a} = {a,b} ∩ ... needs a second superset other than X
        assert!(is_p_meet_irreducible(&s, a, &low).unwrap());
    }

    #[test]
    fn precondition_requires_anchor_below_type() {
        let s = three_opens();
        let a = s.open_id(PointSet::singleton(0)).unwrap();
        let p = s.ctx().parse("g & @b").unwrap();
        assert!(matches!(
            is_p_join_irreducible(&s, a, &p),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn split_helper_finds_pair() {
        let t = PointSet::from_indices([0, 1, 2]);
        let parts = [
            PointSet::from_indices([0, 1]),
            PointSet::from_indices([1, 2]),
            t,
        ];
        let (w, v) = binary_split(t, parts).unwrap();
        assert_eq!(w | v, t);
        assert!(binary_split(t, [PointSet::from_indices([0, 1])]).is_none());
    }
}
