use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn bigonal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigonal"))
        .args(args)
        .env_remove("BIGONAL_SEED")
        .env_remove("BIGONAL_TOL")
        .env_remove("BIGONAL_OUT")
        .env_remove("BIGONAL_JOBS")
        .output()
        .expect("binary runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("report is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn passing_report() {
    let o = bigonal(&["lattice", "triple", "--fixture", "I17_2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["schema"], "bigonal-report/1");
    assert_eq!(r["status"], "pass");
    assert_eq!(r["claims"][1]["values"]["triple"], "((1, 7), 8, 1)");
}

#[test]
fn failed_check_exits_one() {
    let o = bigonal(&["prym", "--cover", &fixture("disconnected.cover")]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["status"], "fail");
    assert!(r["claims"][0]["witness"].as_str().unwrap().contains("disconnected"));

    let o = bigonal(&["quartic", "bitangents", &fixture("singular.q")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["claims"][0]["witness"], "the curve is singular");
}

#[test]
fn input_errors_exit_two() {
    let o = bigonal(&["tower", "slice", &fixture("degenerate.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("non-generic line: double root in b(u)"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"id": "x", "b0": "x^4 + y^4 + z^4", "q": "x^2", "lambda": 1, "colour": 3}"#).unwrap();
    let o = bigonal(&["tower", "slice", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown field `colour`"), "{}", stderr(&o));

    let o = bigonal(&["lattice", "triple", "--fixture", "I17_2", "--tol", "certify=oops"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bigonal(&["quartic", "bitangents", &fixture("missing.q")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_file_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = Command::new(env!("CARGO_BIN_EXE_bigonal"))
        .args(["prym", "--cover", &fixture("genus3-tower.cover")])
        .env("BIGONAL_OUT", &out)
        .env("BIGONAL_TOL", "conic=1e-6,cluster=1e-5")
        .env_remove("BIGONAL_SEED")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["tolerances"]["conic"], 1e-6);
    assert_eq!(r["tolerances"]["cluster"], 1e-5);
    assert_eq!(r["claims"][0]["values"]["type"], serde_json::json!(["1", "2"]));
}

#[test]
fn generated_records_feed_other_commands() {
    let o = bigonal(&["generate", "--count", "2", "--seed", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let recs: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(recs.len(), 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rec.json");
    std::fs::write(&path, serde_json::to_string(&recs[1]).unwrap()).unwrap();
    let o = bigonal(&["tower", "verify-step3", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(report(&o)["claims"][0]["instance"], recs[1]["id"]);
}

#[test]
fn lattice_commands() {
    for args in [
        vec!["lattice", "complement", "--fixture", "I17_2-in-K3"],
        vec!["lattice", "glue", "--fixture", "I17_2-in-K3"],
        vec!["lattice", "involution", "--fixture", "I17_2-in-K3-alt"],
    ] {
        let o = bigonal(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
    }
    let (g, b) = (fixture("u.gram"), fixture("diagonal-in-u.basis"));
    let o = bigonal(&["lattice", "extend", "--gram", &g, "--basis", &b, "--psi", &fixture("minus-one.mat")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["claims"][0]["values"]["isometry"], serde_json::json!([[0, 1], [1, 0]]));
    let (g, b) = (fixture("uu.gram"), fixture("diagonal-in-uu.basis"));
    let o = bigonal(&["lattice", "extend", "--gram", &g, "--basis", &b, "--phi", &fixture("swap.mat")]);
    assert_eq!(o.status.code(), Some(1));
    let o = bigonal(&["lattice", "nikulin-equal", "--fixture", "I17_2", "--fixture", "I17_2"]);
    assert_eq!(report(&o)["claims"][0]["values"]["equal"], true);
}

#[test]
fn conic_and_pair() {
    let o = bigonal(&["quartic", "conic-check", &fixture("conic-points.json")]);
    assert_eq!(o.status.code(), Some(0));
    let o = bigonal(&["quartic", "make-pair", &fixture("fermat.json"), "--lambda", "-1/3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(report(&o)["claims"][0]["values"]["lambda"], "-1/3");
}

#[test]
fn empty_suite_and_q_locus() {
    let o = bigonal(&["suite", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["claims"], serde_json::json!([]));

    let o = bigonal(&["quartic", "make-pair", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["claims"][0]["values"]["status"], "Q-locus");
}
