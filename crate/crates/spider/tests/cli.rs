use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn spider(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spider"))
        .args(args)
        .env("SPIDER_THREADS", "2")
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf-8"),
        String::from_utf8(out.stderr).expect("utf-8"),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn eval_counterclockwise_loop() {
    let (code, out, _) = spider(&["eval", path(&fixture("ccw_loop_a21.json"))]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "q");
}

#[test]
fn map_digon_has_two_terms() {
    let (code, out, _) = spider(&[
        "map",
        path(&fixture("digon_n3_lhs0.json")),
        path(&fixture("boundaries/digon_n3_K12.json")),
    ]);
    assert_eq!(code, 0);
    let terms: Vec<spider::format::CobwebTerm> = serde_json::from_str(&out).unwrap();
    assert_eq!(terms.len(), 2);
    let comb = spider::format::cobweb_comb_from_json(&terms).unwrap();
    assert_eq!(
        spider_core::statesum::evaluate_comb(&comb),
        spider_core::scalar::LaurentScalar::quantum_integer(2)
    );
}

#[test]
fn verify_digon_passes() {
    let (code, out, _) = spider(&["verify", "--n", "3", "--relation", "digon"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    let (code, out, _) = spider(&["verify", "--n", "2..3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_output_is_deterministic() {
    let a = spider(&["verify", "--n", "3", "--format", "json"]);
    let b = spider(&["verify", "--n", "3", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn reduce_saddle() {
    let (code, out, _) = spider(&["reduce", path(&fixture("saddle_a21.json")), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "q");
    assert_eq!(v["steps"], 4);
}

#[test]
fn fuzz_runs_clean() {
    let (code, out, _) = spider(&["fuzz", "--seed", "9", "--iters", "20", "--n", "3"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn invalid_input_exits_two() {
    let dir = std::env::temp_dir().join(format!("spider-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"n\": 3, \"kind\": \"cobweb\",\n \"bottom\": [], \"layers\": [{\"gen\": \"twist\", \"pos\": 0}]}").unwrap();
    let (code, _, err) = spider(&["eval", path(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = spider(&["verify", "--n", "9"]);
    assert_eq!(code, 2);
    let (code, _, _) = spider(&["frobnicate"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn canon_is_a_fixed_point() {
    let (code, once, _) = spider(&["canon", path(&fixture("curl_a13.json"))]);
    assert_eq!(code, 0);
    let dir = std::env::temp_dir().join(format!("spider-canon-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("c.json");
    std::fs::write(&f, &once).unwrap();
    let (_, twice, _) = spider(&["canon", path(&f)]);
    assert_eq!(once, twice);
    std::fs::remove_dir_all(&dir).unwrap();
}
