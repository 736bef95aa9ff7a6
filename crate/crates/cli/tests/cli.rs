use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn corpus(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file).to_string_lossy().into_owned()
}

fn famdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_famdim")).args(args).output().expect("binary runs")
}

fn famdim_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_famdim"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("famdim-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn compute_dihedral_sum() {
    let o = famdim(&["compute", &corpus("rp3_rp3.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("k=2: 0, k≥3: 0"), "{}", stdout(&o));
}

#[test]
fn classify_unipotent() {
    let o = famdim(&["classify-matrix", "1,1;0,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "parabolic; torus-bundle geometry Nil; gd_𝓕₂ = 3");
}

#[test]
fn large_k_is_clamped_with_notice() {
    let at3 = stdout(&famdim(&["compute", &corpus("e3_rp3.json"), "--k", "3"]));
    let at7 = stdout(&famdim(&["compute", &corpus("e3_rp3.json"), "--k", "7"]));
    assert!(at3.contains("k=3: 2"));
    assert!(at7.contains("k=7: 2"));
    assert!(at7.contains("evaluated as k=3"));
    assert!(!at3.contains("evaluated as"));
    assert!(stdout(&famdim(&["compute", &corpus("e3_rp3.json"), "--k", "2"])).contains("k=2: 5"));
    assert_eq!(famdim(&["compute", &corpus("e3_rp3.json"), "--k", "1"]).status.code(), Some(2));
}

#[test]
fn explain_cites_rules() {
    let text = stdout(&famdim(&["compute", &corpus("rp3_rp3_rp3.json"), "--explain"]));
    assert!(text.contains("prime-all-in-family"));
    assert!(text.contains("finite-group"));
}

#[test]
fn json_output_replays() {
    for file in ["rp3_rp3.json", "e3_rp3.json", "klein_double_graph.json", "table1_seifert_hyperbolic_base.json"] {
        let json = stdout(&famdim(&["compute", &corpus(file), "--format", "json"]));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v["trace"].as_array().is_some_and(|t| !t.is_empty()));
        let o = famdim_stdin(&["replay", "-"], &json);
        assert!(o.status.success(), "{file}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("replay matches"));
    }
}

#[test]
fn tampered_report_fails_replay() {
    let json = stdout(&famdim(&["compute", &corpus("rp3_rp3.json"), "--format", "json"]));
    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    v["k2"] = serde_json::json!(3);
    let o = famdim_stdin(&["replay", "-"], &v.to_string());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_exits_2_with_report() {
    let bad = temp_file(
        "bad.json",
        r#"{"name":"x","pieces":[{"kind":"seifert_closed","seifert":{"base":{"genus":0,"orientable":true,"cone_orders":[2,3]},"cone_pairs":[[2,1]],"b":0}}]}"#,
    );
    for cmd in ["compute", "validate"] {
        let o = famdim(&[cmd, &bad]);
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(stdout(&o).contains("$.pieces[0]"), "{cmd}: {}", stdout(&o));
    }
    let unparsable = temp_file("unparsable.json", r#"{"name":"x","pieces":[{"kind":"torus_bundle","monodromy":[[2,0],[0,1]]}]}"#);
    let o = famdim(&["compute", &unparsable]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("determinant"));
    assert_eq!(famdim(&["compute", "/nonexistent/description.json"]).status.code(), Some(2));
}

#[test]
fn validate_reports_rewrites_without_failing() {
    let o = famdim(&["validate", &corpus("klein_double_graph.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Klein double"));
    let o = famdim(&["validate", &corpus("h3_rp3.json")]);
    assert_eq!(stdout(&o).trim(), "valid");
}

#[test]
fn orbifold_classification() {
    assert_eq!(
        stdout(&famdim(&["classify-orbifold", "--surface", "sphere", "--cone", "2,3,7"])).trim(),
        "S²(2,3,7): χ = -1/42, hyperbolic"
    );
    assert!(stdout(&famdim(&["classify-orbifold", "--surface", "sphere", "--cone", "2,2,2,2"])).contains("flat"));
    assert!(
        stdout(&famdim(&["classify-orbifold", "--surface", "genus:0", "--cone", "3", "--boundary", "1"])).contains("elementary")
    );
    assert!(stdout(&famdim(&["classify-orbifold", "--surface", "klein"])).contains("χ = 0, flat"));
    assert_eq!(famdim(&["classify-orbifold", "--surface", "genus:0:nonor"]).status.code(), Some(2));
}

#[test]
fn ball_and_resource_cap() {
    let o = famdim(&["ball", "--factors", "2,2", "--radius", "6"]);
    assert!(stdout(&o).contains("13 vertices, 12 edges, tree true, line true"));
    let json: serde_json::Value =
        serde_json::from_slice(&famdim(&["ball", "--factors", "2,3", "--radius", "2", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["vertices"].as_array().unwrap().len(), 7);
    let o = famdim(&["ball", "--factors", "3,3,3", "--radius", "20", "--cap", "1000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cone_off_bound() {
    let o = famdim(&["cone-off", "--factors", "2,2,2", "--radius", "4", "--axes", "auto", "--bound"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("push-out bound: 2"));
    let o = famdim(&[
        "cone-off",
        "--factors",
        "2,2,2",
        "--radius",
        "4",
        "--axes",
        "ab",
        "--bound",
        "--factor-gd",
        "3",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pushout_bound"], 3);
    assert_eq!(v["cones"].as_array().unwrap().len(), 1);
    assert_eq!(famdim(&["cone-off", "--factors", "2,2", "--radius", "3", "--axes", "a"]).status.code(), Some(2));
}

#[test]
fn normalizer_probe() {
    let o = famdim(&["probe-normalizer", "--monodromy", "2,1;1,1", "--element", "0,0,1", "--bound", "8"]);
    assert!(stdout(&o).contains("rank 1"));
    let o = famdim(&["probe-normalizer", "--monodromy", "2,1;1,1", "--element", "1,0,0", "--bound", "8"]);
    assert!(stdout(&o).contains("rank 2"));
    assert_eq!(famdim(&["probe-normalizer", "--monodromy", "2,1;1,1", "--element", "1,0,1"]).status.code(), Some(2));
    assert_eq!(famdim(&["probe-normalizer", "--monodromy", "1,1;0,1", "--element", "0,0,1"]).status.code(), Some(2));
}

#[test]
fn every_corpus_file_computes() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.file_name().unwrap() == "golden.json" {
            continue;
        }
        let o = famdim(&["compute", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}", path.display());
    }
}
