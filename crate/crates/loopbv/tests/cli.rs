use std::process::{Command, Output};

fn loopbv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopbv"))
        .args(args)
        .env_remove("LOOPBV_WINDOW")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn row<'a>(table: &'a serde_json::Value, monomial: &str) -> &'a serde_json::Value {
    table["rows"].as_array().unwrap().iter().find(|r| r["monomial"] == monomial).expect("row present")
}

#[test]
fn table_rows() {
    let o = loopbv(&["table", "--n", "1", "--coeff", "Z", "--qmax", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let t = json(&o);
    // 2·c·v² vanishes: c·v² has order 2 when n = 1
    assert_eq!(row(&t, "w·v")["delta"], "3·v");
    assert_eq!(row(&t, "c·v")["annihilator"], 2);
    let degrees: Vec<i64> = t["rows"].as_array().unwrap().iter().map(|r| r["degree"].as_i64().unwrap()).collect();
    assert!(degrees.windows(2).all(|w| w[0] <= w[1]));
    assert!(t["operator"]["actions"]["omega"].is_array());

    let t2 = json(&loopbv(&["table", "--n", "2", "--format", "json"]));
    assert_eq!(row(&t2, "v")["delta"], "0");
    assert_eq!(row(&t2, "w·v^2")["delta"], "8·v^2");

    let q = json(&loopbv(&["table", "--n", "1", "--coeff", "Q", "--format", "json"]));
    assert_eq!(row(&q, "w")["delta"], "1");

    let m = json(&loopbv(&["table", "--instance", "cpn:3:Zm:4", "--qmax", "1", "--format", "json"]));
    assert_eq!(row(&m, "w")["delta"], "3 + 2·c^3·v");
}

#[test]
fn table_formats_agree() {
    let text = stdout(&loopbv(&["table", "--n", "2", "--qmax", "1"]));
    let csv = stdout(&loopbv(&["table", "--n", "2", "--qmax", "1", "--format", "csv"]));
    assert!(text.starts_with("# cpn:2:Z"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("monomial,degree,delta,annihilator"));
    assert_eq!(csv.lines().count(), text.lines().count() - 1);
    assert!(csv.contains("c·w,-3,c,0"));
}

#[test]
fn verify_passes_and_fails() {
    let o = loopbv(&["verify", "--n", "1", "--qmax", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = loopbv(&["verify", "--n", "2", "--qmax", "2", "--inject-fault", "delta-w", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    let sq = r["reports"].as_array().unwrap().iter().find(|x| x["check"] == "delta-squared").unwrap();
    assert_eq!(sq["failures"][0]["inputs"][0], "w");
    assert!(!sq["failures"][0]["residual"].as_object().unwrap().is_empty());

    let o = loopbv(&["verify", "--n", "2", "--qmax", "2", "--inject-fault", "delta-c", "--checks", "delta-squared"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("certificate delta-squared [c]"));
}

#[test]
fn single_triple() {
    let o = loopbv(&["verify", "--n", "1", "--checks", "bv-identity", "--triples", "c,w,v", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["reports"].as_array().unwrap().len(), 1);
    assert_eq!(r["reports"][0]["checked"], 1);
}

#[test]
fn job_count_does_not_change_reports() {
    let base = ["verify", "--n", "2", "--qmax", "2", "--inject-fault", "delta-w", "--format", "json"];
    let one = stdout(&loopbv(&[&base[..], &["--jobs", "1"]].concat()));
    let three = stdout(&loopbv(&[&base[..], &["--jobs", "3"]].concat()));
    assert_eq!(one, three);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(loopbv(&["table", "--instance", "torus:3"]).status.code(), Some(2));
    assert_eq!(loopbv(&["table", "--n", "1", "--coeff", "R"]).status.code(), Some(2));
    assert_eq!(loopbv(&["table", "--n", "x"]).status.code(), Some(2));
    assert_eq!(loopbv(&["table"]).status.code(), Some(2));
    assert_eq!(loopbv(&["verify", "--n", "1", "--checks", "nonsense"]).status.code(), Some(2));
    assert_eq!(loopbv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(loopbv(&["verify", "--n", "1", "--inject-fault", "delta-v"]).status.code(), Some(2));
}

#[test]
fn pipeline_output() {
    let o = loopbv(&["pipeline", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("mu = (3, 2, 1, 0)"));
    assert!(s.contains("lambda = (-2, -3, -4)"));
    assert!(s.contains("constants = (4, 6)"));
    let j = json(&loopbv(&["pipeline", "--n", "1", "--format", "json"]));
    assert_eq!(j["constants"], serde_json::json!([2, 1]));
    assert_eq!(j["lambda_zero"], -1);
}

#[test]
fn chern_queries() {
    let out = |args: &[&str]| stdout(&loopbv(args)).trim().to_string();
    assert_eq!(out(&["chern", "--tangent", "4", "--pair", "4"]), "5");
    assert_eq!(out(&["chern", "--tangent", "4", "--pair", "3"]), "10");
    assert_eq!(out(&["chern", "--summands", "0", "--pair", "0"]), "1");
    assert_eq!(out(&["chern", "--summands", "1,-1", "--base", "3", "--pair", "2"]), "-1");
    assert_eq!(loopbv(&["chern", "--tangent", "2", "--pair", "5"]).status.code(), Some(2));

    let g = json(&loopbv(&["chern", "--tangent", "3", "--gysin", "--format", "json"]));
    assert_eq!(g["gysin"]["5"]["torsion"], serde_json::json!([4]));

    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bundle.json");
    std::fs::write(&spec, r#"{"base":"CP^4","summands":[],"tangent":4}"#).unwrap();
    assert_eq!(out(&["chern", "--spec", spec.to_str().unwrap(), "--pair", "4"]), "5");
    std::fs::write(&spec, r#"{"base":"P4","summands":[]}"#).unwrap();
    assert_eq!(loopbv(&["chern", "--spec", spec.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&spec, "{").unwrap();
    assert_eq!(loopbv(&["chern", "--spec", spec.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn hochschild_decisions() {
    let j = json(&loopbv(&["hochschild", "--n", "2", "--format", "json"]));
    assert_eq!(j["iso"]["eps"], serde_json::json!([1, -1, 1]));
    assert!(j["obstruction"].is_null());
    let j = json(&loopbv(&["hochschild", "--n", "1", "--format", "json"]));
    assert!(j["iso"].is_null());
    assert_eq!(j["obstruction"], "x·t");
}

#[test]
fn confluence_runs() {
    let o = loopbv(&["confluence"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = loopbv(&["confluence", "--adversarial"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn bracket_of_elements() {
    let j = json(&loopbv(&["bracket", "--n", "2", "c", "w", "--format", "json"]));
    assert_eq!(j[0]["text"], "-c");
    let all = json(&loopbv(&["bracket", "--n", "1", "--format", "json"]));
    assert_eq!(all.as_array().unwrap().len(), 9);
}

#[test]
fn out_file_and_window_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let o = loopbv(&["table", "--n", "1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(t["window"], "cap=6");

    let o = Command::new(env!("CARGO_BIN_EXE_loopbv"))
        .args(["table", "--n", "1", "--format", "json"])
        .env("LOOPBV_WINDOW", "cap=2")
        .output()
        .unwrap();
    assert_eq!(json(&o)["window"], "cap=2");
    let o = Command::new(env!("CARGO_BIN_EXE_loopbv"))
        .args(["table", "--n", "1", "--qmax", "3", "--format", "json"])
        .env("LOOPBV_WINDOW", "cap=2")
        .output()
        .unwrap();
    assert_eq!(json(&o)["window"], "cap=3");
}

#[test]
fn operator_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("op.json");
    let t = json(&loopbv(&["table", "--n", "1", "--qmax", "9", "--format", "json"]));
    std::fs::write(&path, serde_json::to_string(&t["operator"]).unwrap()).unwrap();
    let o = loopbv(&[
        "verify",
        "--operator",
        path.to_str().unwrap(),
        "--qmax",
        "3",
        "--checks",
        "delta-squared,bv-identity",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
