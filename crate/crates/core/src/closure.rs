//! Chain-restricted closure, the exceptional set, and c-dense sets.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chains::ChainView;
use crate::error::{Error, Result};
use crate::space::{OpenId, PointSet};

/// Point sets up to this size are cross-checked against exhaustive search.
pub const DENSITY_ORACLE_LIMIT: usize = 12;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `J_c(x)` is empty, so `x` is in every closure.
    Vacuous,
    /// Intersection of `J_c(x)`.
    Core { core: PointSet },
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub input: PointSet,
    pub closure: PointSet,
    pub witnesses: Vec<(usize, Witness)>,
    /// Points where the intersection criterion disagrees with the definition.
    pub criterion_mismatches: PointSet,
}

fn core_of(view: &ChainView<'_>, family: &[OpenId]) -> PointSet {
    let s = view.space();
    family
        .iter()
        .fold(s.universe(), |acc, &u| acc & s.open(u))
}

/// `x` is in the closure of `A` when every member of `J_c(x)` meets `A`.
pub fn c_closure(view: &ChainView<'_>, a: PointSet) -> Result<ClosureReport> {
    let s = view.space();
    s.check_set(a)?;
    let mut closure = PointSet::EMPTY;
    let mut mismatches = PointSet::EMPTY;
    let mut witnesses = Vec::with_capacity(s.point_count());
    for x in 0..s.point_count() {
        let family = view.jc_at(x)?;
        if family.is_empty() {
            closure.insert(x);
            witnesses.push((x, Witness::Vacuous));
            continue;
        }
        let by_definition = family.iter().all(|&u| s.open(u).intersects(&a));
        let core = core_of(view, &family);
        if by_definition {
            closure.insert(x);
        }
        if core.intersects(&a) != by_definition {
            mismatches.insert(x);
        }
        witnesses.push((x, Witness::Core { core }));
    }
    Ok(ClosureReport {
        input: a,
        closure,
        witnesses,
        criterion_mismatches: mismatches,
    })
}

/// Closure membership through the intersection criterion alone.
pub fn c_closure_by_core(view: &ChainView<'_>, a: PointSet) -> Result<PointSet> {
    let s = view.space();
    s.check_set(a)?;
    let mut out = PointSet::EMPTY;
    for x in 0..s.point_count() {
        let family = view.jc_at(x)?;
        if family.is_empty() || core_of(view, &family).intersects(&a) {
            out.insert(x);
        }
    }
    Ok(out)
}

/// `E_c`: points with an empty `J_c(x)`.
pub fn e_c(view: &ChainView<'_>) -> PointSet {
    let s = view.space();
    let covered = view
        .jc()
        .iter()
        .fold(PointSet::EMPTY, |acc, &u| acc | s.open(u));
    s.universe() - covered
}

/// Points outside `E_c` grouped by identical `J_c(x)`, each class paired
/// with its family. Classes are ordered by their smallest point.
pub fn equiv_families(view: &ChainView<'_>) -> Vec<(PointSet, Vec<OpenId>)> {
    let s = view.space();
    let mut by_family: BTreeMap<Vec<OpenId>, PointSet> = BTreeMap::new();
    for x in 0..s.point_count() {
        let family = view.jc_at(x).expect("point in range");
        if !family.is_empty() {
            by_family.entry(family).or_default().insert(x);
        }
    }
    let mut out: Vec<(PointSet, Vec<OpenId>)> =
        by_family.into_iter().map(|(f, class)| (class, f)).collect();
    out.sort_by_key(|(class, _)| class.first());
    out
}

pub fn equiv_classes(view: &ChainView<'_>) -> Vec<PointSet> {
    equiv_families(view).into_iter().map(|(c, _)| c).collect()
}

fn is_subfamily(small: &[OpenId], big: &[OpenId]) -> bool {
    small.iter().all(|u| big.binary_search(u).is_ok())
}

/// `D` is c-dense in `Y` when it contains `E_c ∩ Y` and meets every member
/// of `J_c(x)` for each other `x` in `Y`.
pub fn is_c_dense(view: &ChainView<'_>, d: PointSet, y: PointSet) -> Result<bool> {
    let s = view.space();
    s.check_set(y)?;
    if !d.is_subset(&y) {
        return Err(Error::Precondition(format!(
            "{} is not a subset of {}",
            s.format_set(d),
            s.format_set(y)
        )));
    }
    for x in y.iter() {
        let family = view.jc_at(x)?;
        if family.is_empty() {
            if !d.contains(x) {
                return Ok(false);
            }
        } else if !family.iter().all(|&u| s.open(u).intersects(&d)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Density through family inclusion: each `x` in `Y` outside `E_c` needs a
/// `y` in `D` with `J_c(x) ⊆ J_c(y)`.
pub fn is_c_dense_by_inclusion(view: &ChainView<'_>, d: PointSet, y: PointSet) -> Result<bool> {
    let s = view.space();
    s.check_set(y)?;
    if !d.is_subset(&y) {
        return Err(Error::Precondition(format!(
            "{} is not a subset of {}",
            s.format_set(d),
            s.format_set(y)
        )));
    }
    let families: Vec<Vec<OpenId>> = (0..s.point_count())
        .map(|x| view.jc_at(x))
        .collect::<Result<_>>()?;
    Ok(y.iter().all(|x| {
        if families[x].is_empty() {
            d.contains(x)
        } else {
            d.iter().any(|z| is_subfamily(&families[x], &families[z]))
        }
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub exceptional: PointSet,
    pub classes: Vec<PointSet>,
    /// Classes whose family is maximal under inclusion.
    pub maximal_classes: Vec<PointSet>,
    pub density: usize,
    pub witness: PointSet,
    /// Minimum found by exhaustive search, when the space is small enough.
    pub oracle_density: Option<usize>,
}

/// `d_c = |E_c|` plus the number of maximal families, with a witness made
/// of `E_c` and the smallest point of each maximal class. For small spaces
/// the value is compared with exhaustive search and a disagreement is an
/// error.
pub fn min_c_dense(view: &ChainView<'_>) -> Result<DensityReport> {
    let report = density_by_formula(view);
    let s = view.space();
    if s.point_count() > DENSITY_ORACLE_LIMIT {
        return Ok(report);
    }
    let budget = crate::oracle::OracleBudget {
        max_points: DENSITY_ORACLE_LIMIT,
        ..Default::default()
    };
    let found = crate::oracle::oracle_min_dense(s, view.chain(), view.mode(), &budget)?;
    if found.size != report.density {
        return Err(Error::Invariant(format!(
            "maximal-family count gives {} but the smallest c-dense set has size {} (e.g. {})",
            report.density,
            found.size,
            s.format_set(found.witnesses[0])
        )));
    }
    Ok(DensityReport {
        oracle_density: Some(found.size),
        ..report
    })
}

/// The formula alone, without the exhaustive comparison.
pub fn density_by_formula(view: &ChainView<'_>) -> DensityReport {
    let exceptional = e_c(view);
    let fams = equiv_families(view);
    let maximal: Vec<PointSet> = fams
        .iter()
        .filter(|(_, f)| {
            !fams
                .iter()
                .any(|(_, g)| g.len() > f.len() && is_subfamily(f, g))
        })
        .map(|(c, _)| *c)
        .collect();
    let witness = maximal.iter().fold(exceptional, |acc, class| {
        acc | PointSet::singleton(class.first().expect("classes are nonempty"))
    });
    DensityReport {
        exceptional,
        classes: fams.into_iter().map(|(c, _)| c).collect(),
        density: exceptional.len() + maximal.len(),
        maximal_classes: maximal,
        witness,
        oracle_density: None,
    }
}

/// Whether `w` is `E_c` plus exactly one point from each maximal class,
/// which is the shape every smallest c-dense set must have.
pub fn is_class_transversal(report: &DensityReport, w: PointSet) -> bool {
    if !report.exceptional.is_subset(&w) || w.len() != report.density {
        return false;
    }
    report
        .maximal_classes
        .iter()
        .all(|class| (*class & w).len() == 1)
}

/// Three readings of "x is attached to y": family inclusion, membership in
/// the closure of every set containing `y`, and membership in the closure
/// of `{y}`.
pub fn closure_equivalence_check(
    view: &ChainView<'_>,
    x: usize,
    y: usize,
) -> Result<(bool, bool, bool)> {
    let s = view.space();
    s.check_point(x)?;
    s.check_point(y)?;
    if x == y {
        return Err(Error::Precondition("the two points must differ".into()));
    }
    let jx = view.jc_at(x)?;
    let jy = view.jc_at(y)?;
    if jx.is_empty() || jy.is_empty() {
        return Err(Error::Precondition(
            "both points must lie outside the exceptional set".into(),
        ));
    }
    let inclusion = is_subfamily(&jx, &jy);
    let n = s.point_count();
    let others = s.universe() - PointSet::singleton(y);
    let every_superset = if n <= DENSITY_ORACLE_LIMIT {
        // all subsets of the other points, each joined with y
        let mut ok = true;
        let mut sub = others.bits();
        loop {
            let a = PointSet::from_bits(sub) | PointSet::singleton(y);
            if !c_closure(view, a)?.closure.contains(x) {
                ok = false;
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others.bits();
        }
        ok
    } else {
        let mut ok = true;
        for z in others.iter() {
            let a = PointSet::singleton(y) | PointSet::singleton(z);
            if !c_closure(view, a)?.closure.contains(x) {
                ok = false;
                break;
            }
        }
        ok && c_closure(view, PointSet::singleton(y))?.closure.contains(x)
    };
    let singleton = c_closure(view, PointSet::singleton(y))?.closure.contains(x);
    Ok((inclusion, every_superset, singleton))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{NeighborhoodMode, TypeChain};
    use crate::lattice::{Context, Poset};
    use crate::space::{generate_topology, GeneratorSpec, TopologyOptions, TypedSpace};

    fn ray_space() -> TypedSpace {
        // rays {d} ⊂ {c,d} ⊂ {b,c,d}; a only lies in the whole space
        let ctx =
            Context::new(Poset::antichain(&["r", "s"]).unwrap(), &["a", "b", "c", "d"]).unwrap();
        let spec = |name: &str, idx: &[usize], t: &str| GeneratorSpec {
            name: name.into(),
            members: PointSet::from_indices(idx.iter().copied()),
            term: ctx.parse(t).unwrap(),
        };
        let gens = vec![
            spec("d", &[3], "r & @d"),
            spec("cd", &[2, 3], "r & @c"),
            spec("bcd", &[1, 2, 3], "r & @b"),
            spec("all", &[0, 1, 2, 3], "s"),
        ];
        generate_topology(ctx.clone(), gens, TopologyOptions::default()).unwrap()
    }

    fn chain(s: &TypedSpace) -> TypeChain {
        TypeChain::parse(s.ctx(), "r & @b & @c & @d ; r").unwrap()
    }

    #[test]
    fn closure_collects_left_side() {
        let s = ray_space();
        let c = chain(&s);
        let view = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
        assert_eq!(e_c(&view), s.point_set(&["a"]).unwrap());
        let r = c_closure(&view, s.point_set(&["c"]).unwrap()).unwrap();
        assert_eq!(r.closure, s.point_set(&["a", "b", "c"]).unwrap());
        assert!(r.criterion_mismatches.is_empty());
        let empty = c_closure(&view, PointSet::EMPTY).unwrap();
        assert_eq!(empty.closure, e_c(&view));
    }

    #[test]
    fn density_of_ray_space() {
        let s = ray_space();
        let c = chain(&s);
        let view = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
        let report = min_c_dense(&view).unwrap();
        assert_eq!(report.density, 2);
        assert_eq!(report.witness, s.point_set(&["a", "d"]).unwrap());
        assert_eq!(report.oracle_density, Some(2));
        assert_eq!(report.classes.len(), 3);
        assert!(is_c_dense(&view, report.witness, s.universe()).unwrap());
        assert!(!is_c_dense(&view, s.point_set(&["b"]).unwrap(), s.universe()).unwrap());
        assert!(is_c_dense(&view, s.universe(), s.universe()).unwrap());
    }

    #[test]
    fn dense_requires_subset() {
        let s = ray_space();
        let c = chain(&s);
        let view = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
        let d = s.point_set(&["a", "b"]).unwrap();
        let y = s.point_set(&["b"]).unwrap();
        assert!(matches!(is_c_dense(&view, d, y), Err(Error::Precondition(_))));
    }

    #[test]
    fn equivalence_triples_agree() {
        let s = ray_space();
        let c = chain(&s);
        let view = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
        let (b, cc) = (s.point_id("b").unwrap(), s.point_id("c").unwrap());
        assert_eq!(closure_equivalence_check(&view, b, cc).unwrap(), (true, true, true));
        assert_eq!(closure_equivalence_check(&view, cc, b).unwrap(), (false, false, false));
        assert!(closure_equivalence_check(&view, b, b).is_err());
    }
}
