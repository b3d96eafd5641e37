use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hallforge"));
    cmd.args(args).env_remove("HALLFORGE_CAPS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

/// Body rows, without the header and summary lines.
fn rows(out: &Output) -> Vec<Value> {
    let all = lines(out);
    assert!(all.first().unwrap().get("header").is_some());
    assert!(all.last().unwrap().get("summary").is_some());
    all[1..all.len() - 1].to_vec()
}

fn summary(out: &Output) -> Value {
    lines(out).last().unwrap()["summary"].clone()
}

#[test]
fn classes_jordan_bound_two() {
    let out = run(&["classes", "--quiver", "jordan", "--q", "2", "--dim-bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 4);
    let auts: Vec<&str> = rows.iter().map(|r| r["aut"].as_str().unwrap()).collect();
    assert_eq!(auts, ["1", "1", "2", "6"]);
}

#[test]
fn classes_a1_bound_three() {
    let out = run(&["classes", "--quiver", "a1", "--dim-bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let dims: Vec<i64> = rows(&out).iter().map(|r| r["dim"][0].as_i64().unwrap()).collect();
    assert_eq!(dims, [0, 1, 2, 3]);
}

#[test]
fn classes_as_csv() {
    let out = run(&["classes", "--quiver", "a2", "--format", "csv", "--dim-bound", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut it = text.lines();
    assert_eq!(it.next(), Some("aut,dim,end,id,label"));
    assert_eq!(it.count(), 3);
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["classes", "--q", "4"][..],
        &["classes", "--dim-bound", "0"],
        &["verify", "--checks", "d3,bogus"],
        &["classes", "--quiver", "nosuchfile.json"],
        &["classes", "--cap-hom", "0"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = run_env(&["classes"], &[("HALLFORGE_CAPS", "hom=oops")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn product_in_normal_order_is_one_term() {
    let out = run(&["product", "[C_S]", "[C*_S]"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["A"], 1);
    assert_eq!(rows[0]["B"], 1);
    assert_eq!(rows[0]["coeff"]["a"], "1/1");
}

#[test]
fn product_against_normal_order_has_three_terms() {
    let out = run(&["product", "[C*_S]", "[C_S]", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert_eq!(rows.len(), 3);
    let coeffs: Vec<&str> = rows.iter().map(|r| r["coeff"]["a"].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["-2/1", "2/1", "1/1"]);
}

#[test]
fn torus_exponents_add() {
    let out = run(&["product", "K_(1)*K*_(-1)", "K_(2)*K*_(3)", "--quiver", "a1"]);
    let rows = rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["alpha"], serde_json::json!([3]));
    assert_eq!(rows[0]["beta"], serde_json::json!([2]));
    assert_eq!(rows[0]["coeff"]["a"], "1/1");
}

#[test]
fn jordan_partition_literals() {
    let out = run(&["product", "[(1)]", "[(1)]", "--quiver", "jordan"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(summary(&out)["algebra"], "he");
    assert_eq!(rows(&out).len(), 2);
}

#[test]
fn bad_literals_exit_two() {
    for (l, r) in [("[C_#99]", "[C_S]"), ("[C_S]", "[S]"), ("[C_S", "[C_S]"), ("K_(1,0)", "K_(1)")] {
        let out = run(&["product", l, r]);
        assert_eq!(out.status.code(), Some(2), "{l} {r}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn verify_d3_on_a2() {
    let out = run(&["verify", "--checks", "d3", "--quiver", "a2", "--q", "2", "--dim-bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    assert!(!rows.is_empty());
    for r in &rows {
        assert_eq!(r["check"], "d3");
        assert_eq!(r["equal"], true);
        assert!(r["lhs_terms"].is_u64() && r["rhs_terms"].is_u64());
    }
    assert_eq!(summary(&out)["status"], "pass");
}

#[test]
fn verify_assoc_is_deterministic() {
    let args = ["verify", "--checks", "assoc", "--quiver", "jordan", "--seed", "17"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(rows(&a).len(), 200);
    assert_eq!(lines(&a)[0]["header"]["seed"], 17);
    let other = run(&["verify", "--checks", "assoc", "--quiver", "jordan", "--seed", "18"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn tiny_cap_is_a_resource_error() {
    let out = run(&["verify", "--checks", "d3", "--quiver", "a2", "--cap-hom", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn cap_flags_override_environment() {
    let env = [("HALLFORGE_CAPS", "hom=1")];
    let out = run_env(&["verify", "--checks", "d3", "--quiver", "a2"], &env);
    assert_eq!(out.status.code(), Some(2));
    let out = run_env(&["verify", "--checks", "d3", "--quiver", "a2", "--cap-hom", "1000000"], &env);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["header"]["caps"]["hom_scan"], 1_000_000);
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.jsonl");
    let out = run(&["verify", "--checks", "euler,rp", "--quiver", "a2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["failed"], 0);
    assert_eq!(last["summary"]["checks"]["euler"]["instances"], 17);
}

#[test]
fn quiver_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kronecker.json");
    std::fs::write(&path, r#"{"vertices": 2, "arrows": [[0, 1], [0, 1]], "q": 2}"#).unwrap();
    let p = path.to_str().unwrap();
    let out = run(&["classes", "--quiver", p, "--dim-bound", "1"]);
    assert_eq!(rows(&out).len(), 3);
    let out = run(&["verify", "--quiver", p, "--dim-bound", "1", "--checks", "serre,heisenberg"]);
    assert_eq!(out.status.code(), Some(0));
    let degrees: Vec<i64> =
        rows(&out).iter().filter(|r| r["check"] == "serre").map(|r| r["degree"].as_i64().unwrap()).collect();
    assert_eq!(degrees, [3, 3]);

    std::fs::write(&path, r#"{"vertices": 1, "arrows": [[0, 0]], "q": 2}"#).unwrap();
    assert_eq!(run(&["classes", "--quiver", p]).status.code(), Some(2));
}
