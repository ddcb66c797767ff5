//! c-connected sets and connections between points.

use std::collections::VecDeque;

use serde::Serialize;

use crate::chains::ChainView;
use crate::error::{Error, Result};
use crate::oracle::{oracle_connected, OracleBudget};
use crate::space::{OpenId, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Connectedness {
    pub connected: bool,
    /// Disjoint members of `T_c(X)` that split the set.
    pub separator: Option<(OpenId, OpenId)>,
}

/// `A` is c-connected when no two disjoint members of `T_c(X)` cover it
/// while each meets it.
pub fn is_c_connected(view: &ChainView<'_>, a: PointSet) -> Result<Connectedness> {
    let s = view.space();
    s.check_set(a)?;
    let tc = view.tc();
    for (i, &u) in tc.iter().enumerate() {
        let su = s.open(u);
        if !su.intersects(&a) {
            continue;
        }
        for &v in &tc[i + 1..] {
            let sv = s.open(v);
            if !su.intersects(&sv) && sv.intersects(&a) && a.is_subset(&(su | sv)) {
                return Ok(Connectedness {
                    connected: false,
                    separator: Some((u, v)),
                });
            }
        }
    }
    Ok(Connectedness {
        connected: true,
        separator: None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConnectionCertificate {
    pub x: usize,
    pub y: usize,
    pub set: PointSet,
    /// c-connected members of `J_c(X)`, consecutive ones overlapping.
    pub path: Vec<OpenId>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ConnectionOutcome {
    Found(ConnectionCertificate),
    /// No certificate from the base search. `oracle_confirmed` is set when
    /// exhaustive search also found no connecting set.
    Absent { oracle_confirmed: bool },
    /// The base search failed but exhaustive search found a connecting set.
    Discrepancy,
}

/// Members of `J_c(X)` that are themselves c-connected.
fn connected_base(view: &ChainView<'_>) -> Result<Vec<OpenId>> {
    let s = view.space();
    let mut out = Vec::new();
    for &u in view.jc() {
        if is_c_connected(view, s.open(u))?.connected {
            out.push(u);
        }
    }
    Ok(out)
}

/// Searches the overlap graph of c-connected base opens for a chain of
/// opens joining `x` to `y`. When none exists and the covered region is
/// small enough, exhaustive search decides whether one was missed.
pub fn find_connection(
    view: &ChainView<'_>,
    x: usize,
    y: usize,
    budget: &OracleBudget,
) -> Result<ConnectionOutcome> {
    let s = view.space();
    s.check_point(x)?;
    s.check_point(y)?;
    if x == y {
        return Err(Error::Precondition("the two points must differ".into()));
    }
    let base = connected_base(view)?;
    let sets: Vec<PointSet> = base.iter().map(|&u| s.open(u)).collect();
    let m = base.len();
    let mut prev: Vec<Option<usize>> = vec![None; m];
    let mut seen = vec![false; m];
    let mut queue = VecDeque::new();
    for i in 0..m {
        if sets[i].contains(x) {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    let mut end = None;
    while let Some(i) = queue.pop_front() {
        if sets[i].contains(y) {
            end = Some(i);
            break;
        }
        for j in 0..m {
            if !seen[j] && sets[i].intersects(&sets[j]) {
                seen[j] = true;
                prev[j] = Some(i);
                queue.push_back(j);
            }
        }
    }
    if let Some(mut i) = end {
        let mut path = vec![base[i]];
        while let Some(p) = prev[i] {
            path.push(base[p]);
            i = p;
        }
        path.reverse();
        let set = path.iter().fold(PointSet::EMPTY, |acc, &u| acc | s.open(u));
        if !is_c_connected(view, set)?.connected {
            return Err(Error::Invariant(format!(
                "overlapping c-connected opens gave {}, which is not c-connected",
                s.format_set(set)
            )));
        }
        return Ok(ConnectionOutcome::Found(ConnectionCertificate { x, y, set, path }));
    }
    match oracle_connected(s, view.chain(), view.mode(), x, y, budget) {
        Ok(true) => Ok(ConnectionOutcome::Discrepancy),
        Ok(false) => Ok(ConnectionOutcome::Absent {
            oracle_confirmed: true,
        }),
        Err(Error::Budget(_)) => Ok(ConnectionOutcome::Absent {
            oracle_confirmed: false,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Components {
    pub components: Vec<PointSet>,
    /// Points lying in no c-connected base open.
    pub remainder: PointSet,
}

/// Connected components of the overlap graph of c-connected base opens.
pub fn c_components(view: &ChainView<'_>) -> Result<Components> {
    let s = view.space();
    let base = connected_base(view)?;
    let mut parts: Vec<PointSet> = Vec::new();
    for &u in &base {
        let mut merged = s.open(u);
        parts.retain(|p| {
            if p.intersects(&merged) {
                merged = merged | *p;
                false
            } else {
                true
            }
        });
        parts.push(merged);
    }
    // Merging may join earlier parts transitively; repeat until stable.
    loop {
        let mut changed = false;
        let mut out: Vec<PointSet> = Vec::new();
        for p in parts {
            if let Some(q) = out.iter_mut().find(|q| q.intersects(&p)) {
                *q = *q | p;
                changed = true;
            } else {
                out.push(p);
            }
        }
        parts = out;
        if !changed {
            break;
        }
    }
    parts.sort_by_key(|p| p.first());
    let covered = parts.iter().fold(PointSet::EMPTY, |acc, &p| acc | p);
    Ok(Components {
        components: parts,
        remainder: s.universe() - covered,
    })
}
