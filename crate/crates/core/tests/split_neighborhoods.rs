//! A strictly typed space on three points where the chain neighborhoods of
//! x1 are {x0,x1}, {x1,x2} and X. Their intersection {x1} is not itself a
//! neighborhood, so a set can reach x1 through two different points. The
//! density count still agrees with search, but intersection-based closure
//! and the "one point per maximal class" description of smallest dense sets
//! both break.

use tts_core::closure::{c_closure, density_by_formula, is_c_dense, is_c_dense_by_inclusion, is_class_transversal};
use tts_core::oracle::{oracle_min_dense, OracleBudget};
use tts_core::space::TypedSpace;
use tts_core::*;

const CHAIN: &str = "f & @x0 & @x1 ; f & @x0 | f & @x1 ; f & @x0 | f & @x1 | f & ~@x2";

fn space() -> TypedSpace {
    let ctx = Context::new(Poset::antichain(&["f"]).unwrap(), &["x0", "x1", "x2"]).unwrap();
    let open = |names: &[usize], t: &str| (PointSet::from_indices(names.iter().copied()), ctx.parse(t).unwrap());
    let opens = vec![
        (PointSet::EMPTY, ctx.bottom()),
        open(&[1], "f & @x0 & ~@x1"),
        open(&[2], "f & @x0 & @x1"),
        open(&[0, 1], "f & @x0 | f & @x1"),
        open(&[1, 2], "f & @x0"),
        open(&[0, 1, 2], "f & @x0 | f & @x1 | f & ~@x2"),
    ];
    TypedSpace::from_parts(ctx.clone(), opens, Vec::new()).unwrap().validated().unwrap()
}

#[test]
fn space_is_strict() {
    assert!(space().is_strictly_typed().strict);
}

#[test]
fn neighborhoods_of_x1_do_not_nest() {
    let s = space();
    let c = TypeChain::parse(s.ctx(), CHAIN).unwrap();
    let v = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
    let j1: Vec<PointSet> = v.jc_at(1).unwrap().iter().map(|&u| s.open(u)).collect();
    assert_eq!(
        j1,
        vec![
            PointSet::from_indices([0, 1]),
            PointSet::from_indices([1, 2]),
            s.universe()
        ]
    );
    let a = PointSet::from_indices([0, 2]);
    let r = c_closure(&v, a).unwrap();
    assert!(r.closure.contains(1));
    assert!(r.criterion_mismatches.contains(1));
}

#[test]
fn smallest_dense_sets_are_not_unique_up_to_classes() {
    let s = space();
    let c = TypeChain::parse(s.ctx(), CHAIN).unwrap();
    let v = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
    let report = density_by_formula(&v);
    let found = oracle_min_dense(&s, &c, NeighborhoodMode::default(), &OracleBudget::default()).unwrap();
    assert_eq!(report.density, 2);
    assert_eq!(found.size, 2);
    let odd = PointSet::from_indices([0, 2]);
    assert!(found.witnesses.contains(&odd));
    assert!(is_class_transversal(&report, PointSet::from_indices([1, 2])));
    assert!(!is_class_transversal(&report, odd));
    assert!(is_c_dense(&v, odd, s.universe()).unwrap());
    assert!(!is_c_dense_by_inclusion(&v, odd, s.universe()).unwrap());
}
