use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn discmeans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discmeans")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn example2_at_one_half() {
    let out = discmeans(&["example2", "--q", "0", "--z", "0.5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "2");
    assert!(!out.stderr.is_empty(), "configuration is echoed to stderr");
}

#[test]
fn gen_example1_writes_three_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zeros.json");
    let out = discmeans(&["gen-example1", "--alpha", "1", "--beta", "0", "--kmax", "3", "--out", path(&file)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(doc["zeros"].as_array().unwrap().len(), 3);
}

#[test]
fn generated_zeros_round_trip_through_means_and_boxmass() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zeros.json");
    assert!(discmeans(&["gen-example1", "--alpha", "1", "--beta", "0.5", "--kmax", "6", "--out", path(&file)])
        .status
        .success());
    let text = fs::read_to_string(&file).unwrap();
    let zeros: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = &zeros["zeros"][0];
    assert!(first["re"].is_f64() && first["multiplicity"].is_u64());

    let means = discmeans(&["means", "--input", path(&file), "--p", "2", "--r-dyadic", "2:4"]);
    assert!(means.status.success(), "{}", String::from_utf8_lossy(&means.stderr));
    let table = stdout(&means);
    let lines: Vec<_> = table.lines().collect();
    assert_eq!(lines[0], "r,m_p");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.75,"));

    let boxes = discmeans(&["boxmass", "--input", path(&file), "--p", "2", "--delta-dyadic", "1:4", "--exact", "--s", "1"]);
    assert!(boxes.status.success(), "{}", String::from_utf8_lossy(&boxes.stderr));
    let table = stdout(&boxes);
    assert!(table.starts_with("delta,L\n0.5,"));
    assert!(!table.contains('\r'));

    let again = discmeans(&["means", "--input", path(&file), "--p", "2", "--r-dyadic", "2:4"]);
    assert_eq!(again.stdout, means.stdout, "output is deterministic");
}

#[test]
fn eval_blaschke_factor() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zeros.json");
    fs::write(&file, r#"{"zeros":[{"re":0.5,"im":0.0,"multiplicity":1}]}"#).unwrap();
    let out = discmeans(&["eval", "--input", path(&file), "--z", "0+0i"]);
    assert!(out.status.success());
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 0.5f64.ln()).abs() < 1e-15);
}

#[test]
fn fit_reads_named_columns() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.csv");
    let rows: String = (1..=8).map(|k| format!("{},{}\n", 2f64.powi(-k), 3.0 * 2f64.powi(k))).collect();
    fs::write(&file, format!("delta,L\n{rows}")).unwrap();
    let out = discmeans(&["fit", "--input", path(&file), "--x-col", "delta", "--y-col", "L"]);
    assert!(out.status.success());
    let fit: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((fit["exponent"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!((fit["amplitude"].as_f64().unwrap() - 3.0).abs() < 1e-10);
    let missing = discmeans(&["fit", "--input", path(&file), "--x-col", "r", "--y-col", "L"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn classical_tables() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zeros.json");
    fs::write(&file, r#"{"zeros":[{"re":0.5,"im":0.0,"multiplicity":1},{"re":0.0,"im":0.9,"multiplicity":2}]}"#)
        .unwrap();
    let out = discmeans(&["classical", "--input", path(&file), "--r-dyadic", "1:3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = stdout(&out);
    assert_eq!(table.lines().next(), Some("r,I,J"));
    assert_eq!(table.lines().count(), 4);
    let out = discmeans(&["classical", "--input", path(&file), "--r", "0", "--n-theta", "256"]);
    assert!(out.status.success());
    let table = stdout(&out);
    assert_eq!(table.lines().next(), Some("theta,psi0,Phi"));
    assert_eq!(table.lines().count(), 257);
}

#[test]
fn verify_box_on_example2_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("spec.json");
    fs::write(&file, r#"{"kind":"example2","q":0}"#).unwrap();
    let out = discmeans(&["verify", "--theorem", "box", "--input", path(&file), "--p", "2", "--tolerance", "0.05"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["consistent"], true);
    assert_eq!(report["direction"], "iff");
}

#[test]
fn verify_reports_inconsistency_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("spec.json");
    fs::write(&file, r#"{"kind":"example2","q":0}"#).unwrap();
    let out = discmeans(&["verify", "--theorem", "box", "--input", path(&file), "--p", "2", "--tolerance", "1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["consistent"], false);
}

#[test]
fn growth_precondition_is_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zeros.json");
    fs::write(&file, r#"{"zeros":[{"re":0.5,"im":0.0,"multiplicity":1}]}"#).unwrap();
    let out = discmeans(&[
        "verify", "--theorem", "growth", "--input", path(&file), "--p", "2", "--tolerance", "0.1", "--s", "0",
        "--alpha", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha+1/p<s+1"));
}

#[test]
fn malformed_inputs_exit_two() {
    assert_eq!(discmeans(&["example2", "--q", "0", "--z", "1.5"]).status.code(), Some(2));
    assert_eq!(discmeans(&["example2", "--q", "0", "--z", "x"]).status.code(), Some(2));
    assert_eq!(discmeans(&["example2", "--q", "0", "--z", "0", "--bogus"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    fs::write(&file, r#"{"zeros":[{"re":0.5}]}"#).unwrap();
    assert_eq!(discmeans(&["eval", "--input", path(&file), "--z", "0"]).status.code(), Some(2));
    assert_eq!(discmeans(&["eval", "--input", "/nonexistent.json", "--z", "0"]).status.code(), Some(2));
}

#[test]
fn non_convergence_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("spec.json");
    fs::write(&file, r#"{"kind":"example2","q":6}"#).unwrap();
    let out = discmeans(&["means", "--input", path(&file), "--p", "8", "--r-dyadic", "40:40", "--tol", "1e-11"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
