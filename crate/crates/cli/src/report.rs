//! JSON rendering of query results. Sets are written as lists of point
//! names, types in the term syntax accepted by `--p` and `--chain`.

use serde_json::{json, Value};
use tts_core::basis::TypedFamily;
use tts_core::closure::{ClosureReport, DensityReport, Witness};
use tts_core::connect::{Components, ConnectionOutcome};
use tts_core::space::OpenId;
use tts_core::{PointSet, TypedSpace};

pub fn set(s: &TypedSpace, a: PointSet) -> Value {
    json!(s.set_names(a))
}

pub fn open(s: &TypedSpace, u: OpenId) -> Value {
    json!({ "set": s.set_names(s.open(u)), "type": s.format_type(u) })
}

pub fn opens(s: &TypedSpace, ids: &[OpenId]) -> Value {
    Value::Array(ids.iter().map(|&u| open(s, u)).collect())
}

pub fn family(s: &TypedSpace, f: &TypedFamily) -> Value {
    opens(s, &f.members)
}

pub fn digest(s: &TypedSpace) -> Value {
    json!({
        "points": s.point_count(),
        "opens": s.opens().len(),
        "strict": s.is_strictly_typed().strict,
    })
}

pub fn closure(s: &TypedSpace, r: &ClosureReport) -> Value {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|(x, w)| match w {
            Witness::Vacuous => json!({ "point": s.ctx().points()[*x], "vacuous": true }),
            Witness::Core { core } => {
                json!({ "point": s.ctx().points()[*x], "core": set(s, *core) })
            }
        })
        .collect();
    json!({
        "input": set(s, r.input),
        "closure": set(s, r.closure),
        "witnesses": witnesses,
        "criterion_mismatches": set(s, r.criterion_mismatches),
    })
}

/// `transversal` tells whether every smallest dense set found by search is
/// `E_c` plus one point per maximal class.
pub fn density(
    s: &TypedSpace,
    d: &DensityReport,
    oracle_witnesses: Option<usize>,
    transversal: Option<bool>,
) -> Value {
    let classes = |cs: &[PointSet]| -> Value { cs.iter().map(|&c| set(s, c)).collect() };
    json!({
        "density": d.density,
        "witness": set(s, d.witness),
        "exceptional": set(s, d.exceptional),
        "classes": classes(&d.classes),
        "maximal_classes": classes(&d.maximal_classes),
        "oracle_density": d.oracle_density,
        "oracle_witnesses": oracle_witnesses,
        "witnesses_are_class_transversals": transversal,
    })
}

pub fn connection(s: &TypedSpace, o: &ConnectionOutcome) -> Value {
    match o {
        ConnectionOutcome::Found(cert) => json!({
            "outcome": "found",
            "set": set(s, cert.set),
            "path": cert.path.iter().map(|&u| set(s, s.open(u))).collect::<Vec<_>>(),
        }),
        ConnectionOutcome::Absent { oracle_confirmed } => json!({
            "outcome": "absent",
            "oracle_confirmed": oracle_confirmed,
        }),
        ConnectionOutcome::Discrepancy => json!({ "outcome": "discrepancy" }),
    }
}

pub fn components(s: &TypedSpace, c: &Components) -> Value {
    json!({
        "components": c.components.iter().map(|&p| set(s, p)).collect::<Vec<_>>(),
        "remainder": set(s, c.remainder),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tts_core::ingest::fixtures::street5;

    #[test]
    fn sets_are_point_names() {
        let s = street5();
        let a = s.point_set(&["r2", "r4"]).unwrap();
        assert_eq!(set(&s, a), json!(["r2", "r4"]));
        let d = digest(&s);
        assert_eq!(d["points"], 5);
        assert_eq!(d["strict"], true);
    }
}
