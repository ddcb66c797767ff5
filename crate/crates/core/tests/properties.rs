mod common;

use common::random_strict_space;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tts_core::basis::{is_p_join_irreducible, join_decompose};
use tts_core::chains::chain_cover;
use tts_core::closure::{c_closure, density_by_formula, e_c, is_class_transversal};
use tts_core::connect::{find_connection, is_c_connected, ConnectionOutcome};
use tts_core::oracle::*;
use tts_core::stats::ScoreTable;
use tts_core::*;

fn space(seed: u64) -> Option<TypedSpace> {
    random_strict_space(&mut ChaCha8Rng::seed_from_u64(seed), 6)
}

fn some_chain(s: &TypedSpace, pick: usize) -> TypeChain {
    let cover = chain_cover(s).unwrap();
    cover.chains[pick % cover.chains.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_spaces_are_strict_and_valid(seed in any::<u64>()) {
        let Some(s) = space(seed) else { return Ok(()) };
        prop_assert!(s.validate_type_mapping().passed());
        prop_assert!(s.is_strictly_typed().strict);
        prop_assert!(s.strictify().unwrap().is_strictly_typed().strict);
    }

    #[test]
    fn own_type_is_irreducible_and_decomposes(seed in any::<u64>()) {
        let Some(s) = space(seed) else { return Ok(()) };
        for u in s.nonempty() {
            let p = s.type_of(u).clone();
            prop_assert!(is_p_join_irreducible(&s, u, &p).unwrap());
            let parts = join_decompose(&s, u, &p).unwrap();
            let union = parts.iter().fold(PointSet::EMPTY, |acc, &v| acc | s.open(v));
            prop_assert_eq!(union, s.open(u));
        }
    }

    #[test]
    fn neighborhoods_match_naive(seed in any::<u64>(), pick in any::<usize>()) {
        let Some(s) = space(seed) else { return Ok(()) };
        let c = some_chain(&s, pick);
        for mode in [NeighborhoodMode::Restricted, NeighborhoodMode::Literal] {
            let v = ChainView::new(&s, &c, mode).unwrap();
            for x in 0..s.point_count() {
                let mut jc: Vec<PointSet> = v.jc_at(x).unwrap().iter().map(|&u| s.open(u)).collect();
                let mut tc: Vec<PointSet> = v.tc_at(x).unwrap().iter().map(|&u| s.open(u)).collect();
                let mut ojc = oracle_jc_at(&s, &c, mode, x);
                let mut otc = oracle_tc_at(&s, &c, mode, x);
                for f in [&mut jc, &mut tc, &mut ojc, &mut otc] {
                    f.sort_by_key(|p| p.bits());
                }
                prop_assert_eq!(jc, ojc);
                prop_assert_eq!(tc, otc);
            }
        }
    }

    #[test]
    fn closure_is_a_closure_operator(seed in any::<u64>(), pick in any::<usize>(), a in any::<u64>(), b in any::<u64>()) {
        let Some(s) = space(seed) else { return Ok(()) };
        let c = some_chain(&s, pick);
        let v = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
        let full = s.universe().bits();
        let a = PointSet::from_bits(a & full);
        let ab = a | PointSet::from_bits(b & full);
        let cl = |x: PointSet| c_closure(&v, x).unwrap().closure;
        prop_assert!(a.is_subset(&cl(a)));
        prop_assert!(cl(a).is_subset(&cl(ab)));
        prop_assert_eq!(cl(cl(a)), cl(a));
        prop_assert_eq!(cl(PointSet::EMPTY), e_c(&v));
        prop_assert_eq!(cl(a), oracle_closure(&s, &c, NeighborhoodMode::default(), a));
    }

    #[test]
    fn density_formula_matches_search(seed in any::<u64>(), pick in any::<usize>()) {
        let Some(s) = space(seed) else { return Ok(()) };
        let c = some_chain(&s, pick);
        let v = ChainView::new(&s, &c, NeighborhoodMode::default()).unwrap();
        let report = density_by_formula(&v);
        let found = oracle_min_dense(&s, &c, NeighborhoodMode::default(), &OracleBudget::default()).unwrap();
        prop_assert_eq!(report.density, found.size);
        prop_assert!(is_class_transversal(&report, report.witness));
        prop_assert!(found.witnesses.contains(&report.witness));
    }

    #[test]
    fn connectedness_matches_naive(seed in any::<u64>(), pick in any::<usize>(), a in any::<u64>()) {
        let Some(s) = space(seed) else { return Ok(()) };
        let c = some_chain(&s, pick);
        let mode = NeighborhoodMode::default();
        let v = ChainView::new(&s, &c, mode).unwrap();
        let a = PointSet::from_bits(a & s.universe().bits());
        let r = is_c_connected(&v, a).unwrap();
        prop_assert_eq!(r.connected, oracle_is_connected(&s, &c, mode, a));
        if let Some((u, w)) = r.separator {
            prop_assert!(!(s.open(u) & a).is_empty() && !(s.open(w) & a).is_empty());
        }
    }

    #[test]
    fn certificates_are_sound(seed in any::<u64>(), pick in any::<usize>()) {
        let Some(s) = space(seed) else { return Ok(()) };
        let c = some_chain(&s, pick);
        let mode = NeighborhoodMode::default();
        let v = ChainView::new(&s, &c, mode).unwrap();
        let budget = OracleBudget::default();
        for x in 0..s.point_count() {
            for y in x + 1..s.point_count() {
                match find_connection(&v, x, y, &budget).unwrap() {
                    ConnectionOutcome::Found(cert) => {
                        prop_assert!(cert.set.contains(x) && cert.set.contains(y));
                        prop_assert!(oracle_is_connected(&s, &c, mode, cert.set));
                    }
                    ConnectionOutcome::Absent { oracle_confirmed: true } => {
                        prop_assert!(!oracle_connected(&s, &c, mode, x, y, &budget).unwrap());
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn z_scores_ignore_order_and_scale(values in prop::collection::vec(0.0f64..1e3, 2..20), k in 0.01f64..100.0, rot in any::<usize>()) {
        let names: Vec<String> = (0..values.len()).map(|i| i.to_string()).collect();
        let Ok(t) = ScoreTable::new(names.clone(), values.clone()) else { return Ok(()) };
        let sum: f64 = t.z.iter().sum();
        prop_assert!(sum.abs() < 1e-6);
        let scaled = ScoreTable::new(names.clone(), values.iter().map(|v| v * k).collect()).unwrap();
        for (a, b) in t.z.iter().zip(&scaled.z) {
            prop_assert!((a - b).abs() < 1e-6);
        }
        let r = rot % values.len();
        let mut rn = names.clone();
        let mut rv = values.clone();
        rn.rotate_left(r);
        rv.rotate_left(r);
        let rotated = ScoreTable::new(rn, rv).unwrap();
        prop_assert!((rotated.mean - t.mean).abs() < 1e-9 * t.mean.abs().max(1.0));
        prop_assert!((rotated.sample_std - t.sample_std).abs() < 1e-9 * t.sample_std.max(1.0));
        for name in &names {
            prop_assert!((rotated.z_of(name).unwrap() - t.z_of(name).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn most_seeds_give_a_space() {
    let made = (0..200u64).filter(|&seed| space(seed).is_some()).count();
    assert!(made > 150, "only {made} of 200 seeds produced a space");
}
