use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn bav(args: &[&str], stdin: &str) -> Out {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bav"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn bav");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    Out {
        code: o.status.code().unwrap_or(-1),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn ok(args: &[&str], stdin: &str) -> String {
    let o = bav(args, stdin);
    assert_eq!(o.code, 0, "bav {:?}: {}", args, o.stderr);
    o.stdout
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn generated_arrays_verify() {
    for field in ["gf7", "q", "fq", "gf101"] {
        let arr = ok(&["gen", "--n", "4", "--field", field, "--seed", "1"], "");
        let report = json(&ok(&["verify"], &arr));
        assert_eq!(report["ok"], true);
        assert_eq!(report["violations"], Value::Array(vec![]));
        assert_eq!(json(&ok(&["verify", "--threads", "3"], &arr)), report);
    }
}

#[test]
fn broken_arrays_fail_verification() {
    let mut doc = json(&ok(&["gen", "--n", "3", "--field", "gf7", "--seed", "4"], ""));
    let copy = doc["vectors"]["0,0,3"].clone();
    doc["vectors"]["0,1,2"] = copy;
    let o = bav(&["verify"], &doc.to_string());
    assert_eq!(o.code, 1);
    let report = json(&o.stdout);
    assert_eq!(report["ok"], false);
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bav(&["gen", "--n", "3", "--field", "gf8"], "").code, 2);
    assert_eq!(bav(&["gen", "--bogus"], "").code, 2);
    assert_eq!(bav(&[], "").code, 2);
    assert_eq!(bav(&["verify"], "not json").code, 2);
    assert_eq!(bav(&["verify"], "{\"bav\":1}").code, 2);
    assert_eq!(bav(&["examples", "--family", "poly", "--n", "4", "--field", "gf3"], "").code, 2);
    let o = bav(&["module", "--flavor", "uq", "--n", "2", "--field", "gf7"], "");
    assert_eq!(o.code, 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn same_seed_same_bytes() {
    let args = ["gen", "--n", "3", "--field", "fq", "--seed", "9"];
    assert_eq!(ok(&args, ""), ok(&args, ""));
    assert_ne!(ok(&args, ""), ok(&["gen", "--n", "3", "--field", "fq", "--seed", "10"], ""));
}

#[test]
fn goldens_reproduce() {
    let cases: [(&str, &[&str]); 7] = [
        ("gen_n3_gf7_seed1.json", &["gen", "--n", "3", "--field", "gf7", "--seed", "1"]),
        ("gen_n3_gf7_seed2.json", &["gen", "--n", "3", "--field", "gf7", "--seed", "2"]),
        ("gen_n3_fq_seed1.json", &["gen", "--n", "3", "--field", "fq", "--seed", "1"]),
        ("gen_n3_fq_seed2.json", &["gen", "--n", "3", "--field", "fq", "--seed", "2"]),
        ("examples_poly_n3_q.json", &["examples", "--family", "poly", "--n", "3", "--field", "q"]),
        ("examples_q_n3_fq.json", &["examples", "--family", "q", "--n", "3", "--field", "fq"]),
        ("module_sl2_n2_seed1.json", &["module", "--flavor", "sl2", "--n", "2", "--seed", "1"]),
    ];
    for (name, args) in cases {
        let expected = std::fs::read_to_string(golden(name)).unwrap();
        assert_eq!(ok(args, ""), expected, "{name}");
    }
}

#[test]
fn golden_contents_are_sound() {
    for name in ["gen_n3_gf7_seed1.json", "gen_n3_fq_seed2.json", "examples_q_n3_fq.json"] {
        let doc = std::fs::read_to_string(golden(name)).unwrap();
        assert_eq!(json(&ok(&["verify"], &doc))["ok"], true, "{name}");
    }
    let poly = std::fs::read_to_string(golden("examples_poly_n3_q.json")).unwrap();
    let values = json(&ok(&["values"], &poly));
    assert!(values["values"].as_object().unwrap().values().all(|v| v == "1/1"));
    let qf = std::fs::read_to_string(golden("examples_q_n3_fq.json")).unwrap();
    let values = json(&ok(&["values"], &qf));
    let q = serde_json::json!({"num": ["0/1", "1/1"], "den": ["1/1"]});
    assert!(values["values"].as_object().unwrap().values().all(|v| *v == q));
}

#[test]
fn values_round_trip() {
    let poly = ok(&["examples", "--family", "poly", "--n", "3"], "");
    let ones = ok(&["values"], &poly);
    let labels = ok(&["from-values"], &ones);
    assert_eq!(json(&ok(&["values"], &labels))["values"], json(&ones)["values"]);
    let arr = ok(&["from-values"], &ones);
    assert_eq!(json(&ok(&["values"], &arr))["values"], json(&ones)["values"]);

    let random = ok(&["gen", "--n", "4", "--field", "gf101", "--seed", "3"], "");
    let psi = ok(&["values"], &random);
    let rebuilt = ok(&["from-values"], &psi);
    assert_eq!(json(&ok(&["verify"], &rebuilt))["ok"], true);
    assert_eq!(json(&ok(&["values"], &rebuilt))["values"], json(&psi)["values"]);
}

#[test]
fn labelling_documents() {
    let psi = ok(&["values"], &ok(&["gen", "--n", "3", "--field", "q", "--seed", "5"], ""));
    let el = json(&ok(&["from-values", "--labelling"], &psi));
    assert!(el["labels"].is_object());
    assert_eq!(json(&ok(&["values"], &el.to_string()))["values"], json(&psi)["values"]);
}

#[test]
fn flags_round_trip() {
    let arr = ok(&["gen", "--n", "3", "--field", "gf101", "--seed", "6"], "");
    let triple = ok(&["flags"], &arr);
    let back = ok(&["flags", "--reverse"], &triple);
    assert_eq!(json(&ok(&["verify"], &back))["ok"], true);
    let again = json(&ok(&["flags"], &back));
    for k in ["f1", "f2", "f3"] {
        assert_eq!(again[k], json(&triple)[k]);
    }
    let report = json(&ok(&["roundtrip"], &arr));
    assert_eq!(report["ok"], true);
    assert_eq!(report["isomorphic_to_rebuilt"], true);
}

#[test]
fn module_checks() {
    for args in [
        &["module", "--flavor", "uq", "--n", "3", "--check"][..],
        &["module", "--flavor", "sl2", "--n", "3", "--check"],
        &["module", "--flavor", "uq", "--n", "3", "--field", "gf101", "--q", "3", "--check"],
    ] {
        let doc = json(&ok(args, ""));
        assert_eq!(doc["check"]["ok"], true, "{args:?}");
        assert_eq!(doc["basis"], "standard");
    }
    // Arrays are read with --in; one of the wrong value is a precondition failure.
    let dir = std::env::temp_dir().join(format!("bav-module-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (wrong, ones) = (dir.join("wrong.json"), dir.join("ones.json"));
    std::fs::write(&wrong, ok(&["gen", "--n", "3", "--field", "q", "--seed", "1"], "")).unwrap();
    std::fs::write(&ones, ok(&["from-values"], &ok(&["values"], &ok(&["examples", "--family", "poly", "--n", "3"], "")))).unwrap();
    assert_eq!(bav(&["module", "--flavor", "sl2", "--in", wrong.to_str().unwrap()], "").code, 2);
    let doc = json(&ok(&["module", "--flavor", "sl2", "--check", "--in", ones.to_str().unwrap()], ""));
    assert_eq!(doc["check"]["ok"], true);
    assert!(doc.get("seed").is_none());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn files_in_and_out() {
    let dir = std::env::temp_dir().join(format!("bav-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let arr = dir.join("a.json");
    let rep = dir.join("r.json");
    let (a, r) = (arr.to_str().unwrap(), rep.to_str().unwrap());
    assert_eq!(ok(&["gen", "--n", "3", "--field", "gf7", "--seed", "1", "--out", a], ""), "");
    assert_eq!(std::fs::read_to_string(&arr).unwrap(), std::fs::read_to_string(golden("gen_n3_gf7_seed1.json")).unwrap());
    ok(&["verify", "--in", a, "--out", r], "");
    assert_eq!(json(&std::fs::read_to_string(&rep).unwrap())["ok"], true);
    assert_eq!(bav(&["verify", "--in", dir.join("missing.json").to_str().unwrap()], "").code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn in_process_run_matches_the_binary() {
    let args = ["bav", "gen", "--n", "3", "--field", "gf7", "--seed", "2"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = bav::run(args, &mut std::io::empty(), &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), ok(&args[1..], ""));
}
