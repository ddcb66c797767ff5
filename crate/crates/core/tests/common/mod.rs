#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tts_core::*;

pub const STREET5_RIGHT: &str = "right&@r1&@r2&@r3&@r4&@r5 ; right";
pub const GENEALOGY5_ANC: &str = "anc&@S&@H&@C&@W ; anc";
pub const STREET2X3_RIGHT: &str = "right&@a1&@a2&@a3&@b1&@b2&@b3 ; right";

pub fn view<'s>(s: &'s TypedSpace, chain: &str) -> ChainView<'s> {
    let c = TypeChain::parse(s.ctx(), chain).unwrap();
    ChainView::new(s, &c, NeighborhoodMode::default()).unwrap()
}

pub fn set(s: &TypedSpace, names: &[&str]) -> PointSet {
    s.point_set(names).unwrap()
}

/// A random space on 3 to `max_points` points over up to three generators,
/// made strictly typed. `None` when generation or strictification fails.
pub fn random_strict_space(rng: &mut ChaCha8Rng, max_points: usize) -> Option<TypedSpace> {
    let n = rng.gen_range(3..=max_points);
    let pts: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let names = ["f", "g", "h"];
    let k = rng.gen_range(1..=3);
    let mut order = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(0.3) {
                order.push((names[i], names[j]));
            }
        }
    }
    let ctx = Context::new(Poset::new(&names[..k], &order).ok()?, &pts).ok()?;
    let mut specs = Vec::new();
    for i in 0..rng.gen_range(2..=6) {
        let mut members = PointSet::EMPTY;
        while members.is_empty() {
            for x in 0..n {
                if rng.gen_bool(0.4) {
                    members.insert(x);
                }
            }
        }
        let mut lits = vec![Literal::Gen(rng.gen_range(0..k))];
        for x in 0..n {
            match rng.gen_range(0..6) {
                0 => lits.push(Literal::Pos(x)),
                1 => lits.push(Literal::Neg(x)),
                _ => {}
            }
        }
        let term = ctx.normalize([ctx.clause(&lits).ok()?]);
        specs.push(GeneratorSpec {
            name: format!("G{i}"),
            members,
            term,
        });
    }
    let s = generate_topology(ctx, specs, TopologyOptions::default()).ok()?;
    if s.is_strictly_typed().strict {
        Some(s)
    } else {
        s.strictify().ok()
    }
}
