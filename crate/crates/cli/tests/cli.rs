use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const STREET5_RIGHT: &str = "right&@r1&@r2&@r3&@r4&@r5 ; right";

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn tts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tts"))
        .args(args)
        .current_dir(root())
        .env_remove("TTS_BUDGET_POINTS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn datasets_rebuild_the_shipped_fixtures() {
    for (dataset, kind, fixture) in [
        ("fixtures/genealogy5.csv", "genealogy", "fixtures/genealogy5.json"),
        ("fixtures/street5.community.json", "community", "fixtures/street5.json"),
        ("fixtures/street2x3.community.json", "community", "fixtures/street2x3.json"),
    ] {
        let out = tts(&["build", "--dataset", dataset, "--kind", kind]);
        assert!(out.status.success());
        assert_eq!(out.stdout, std::fs::read(root().join(fixture)).unwrap(), "{dataset}");
    }
}

#[test]
fn table_build_needs_predicates() {
    let out = tts(&["build", "--dataset", "fixtures/courses.csv", "--kind", "table"]);
    assert_eq!(out.status.code(), Some(2));
    let out = tts(&[
        "build",
        "--dataset",
        "fixtures/courses.csv",
        "--kind",
        "table",
        "--predicates",
        "fixtures/courses.predicates.json",
    ]);
    let doc = json(&out);
    assert_eq!(doc["poset"]["leq"], serde_json::json!([["cheap", "affordable"]]));
}

#[test]
fn exit_codes() {
    assert_eq!(tts(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tts(&["dense", "fixtures/street5.json", "--chain", "right ; right & @r1"]).status.code(), Some(2));
    assert_eq!(tts(&["closure", "fixtures/street5.json", "--chain", STREET5_RIGHT, "--set", "r9"]).status.code(), Some(3));
    assert_eq!(tts(&["stats", "fixtures/genealogy5.json", "--measure", "affinity"]).status.code(), Some(3));
    assert_eq!(tts(&["validate", "fixtures/missing.json"]).status.code(), Some(2));
    let out = tts(&["validate", "fixtures/street2x3.json", "--strict"]);
    assert!(out.stderr.is_empty());
}

#[test]
fn broken_mapping_fails_validation_with_a_report() {
    let mut doc: serde_json::Value =
        serde_json::from_slice(&std::fs::read(root().join("fixtures/genealogy5.json")).unwrap()).unwrap();
    doc["opens"][3]["type"] = serde_json::json!({ "clauses": [[{ "gen": "desc" }]] });
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join("broken-genealogy5.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let out = tts(&["validate", path.to_str().unwrap(), "--stable"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["valid"], false);
    let out = tts(&["oracle", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn timing_only_without_stable() {
    let args = ["dense", "fixtures/street5.json", "--chain", STREET5_RIGHT];
    assert!(json(&tts(&args))["timing"]["elapsed_ms"].is_number());
    let mut stable = args.to_vec();
    stable.push("--stable");
    assert!(json(&tts(&stable)).get("timing").is_none());
}

#[test]
fn budget_from_environment() {
    let args = ["dense", "fixtures/street5.json", "--chain", STREET5_RIGHT, "--stable"];
    assert_eq!(json(&tts(&args))["result"]["oracle_density"], 2);
    let out = Command::new(env!("CARGO_BIN_EXE_tts"))
        .args(args)
        .current_dir(root())
        .env("TTS_BUDGET_POINTS", "3")
        .output()
        .unwrap();
    assert!(json(&out)["result"]["oracle_density"].is_null());
}

#[test]
fn stats_as_csv() {
    let out = tts(&["stats", "fixtures/street5.json", "--p", "right", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "subject,value,z");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("\"{r2,r3,r4,r5}\",4.0,"));
    let single = json(&tts(&["stats", "fixtures/street5.json", "--p", "right", "--f32"]));
    assert_eq!(single["result"]["mean"], 2.5);
}

#[test]
fn connect_modes() {
    let chain = "right&@a1&@a2&@a3&@b1&@b2&@b3 ; right";
    let space = "fixtures/street2x3.json";
    let pair = json(&tts(&["connect", space, "--chain", chain, "--x", "a2", "--y", "a3"]));
    assert_eq!(pair["result"]["outcome"], "found");
    let set = json(&tts(&["connect", space, "--chain", chain, "--set", "a2,a3,b2,b3"]));
    assert_eq!(set["result"]["connected"], false);
    let comps = json(&tts(&["connect", space, "--chain", chain]));
    assert_eq!(comps["result"]["remainder"], serde_json::json!(["a1", "b1"]));
}

#[test]
fn basis_and_neighborhoods() {
    let basis = json(&tts(&["basis", "fixtures/genealogy5.json", "--p", "anc & @W", "--set", "B,S,H,C"]));
    assert_eq!(basis["result"]["decomposition"][0]["set"], serde_json::json!(["B", "S", "H", "C"]));
    let nbhd = json(&tts(&["nbhd", "fixtures/street5.json", "--chain", STREET5_RIGHT, "--x", "r3"]));
    assert_eq!(nbhd["result"]["points"][0]["j_c"].as_array().unwrap().len(), 2);
    assert_eq!(nbhd["result"]["exceptional"], serde_json::json!(["r1"]));
}
