use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use rand::SeedableRng;
use tempfile::TempDir;

use qmvw_core::group::random_intertwiner;
use qmvw_core::io::{module_from_json, module_to_json, read_json, write_json};
use qmvw_core::module::HermitianModule;
use qmvw_core::Rational;

fn qmvw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmvw"))
        .args(args)
        .env_remove("QMVW_BACKEND")
        .output()
        .expect("run qmvw")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn standard(dir: &TempDir, name: &str, model: &[&str]) -> PathBuf {
    let file = path(dir, name);
    let mut args = vec!["standard"];
    args.extend(model);
    args.extend(["--out", s(&file)]);
    let out = qmvw(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    file
}

fn invariants(file: &Path) -> Value {
    read_json(file).unwrap()["invariants"].clone()
}

#[test]
fn standard_then_classify_returns_the_same_params() {
    let dir = TempDir::new().unwrap();
    let sp11 = standard(&dir, "sp11.json", &["--kind", "R_id", "--epsilon", "1", "--p", "1", "--q", "1"]);
    let cls = path(&dir, "cls.json");
    let out = qmvw(&["classify", s(&sp11), "--out", s(&cls)]);
    assert_eq!(code(&out), 0);
    assert_eq!(invariants(&cls), json!([{ "kind": "R_id", "p": 1, "q": 1 }]));

    let gl1 = standard(&dir, "gl1.json", &["--kind", "RxR_swap", "--epsilon", "-1", "--n", "1"]);
    let out = qmvw(&["classify", s(&gl1), "--out", s(&cls)]);
    assert_eq!(code(&out), 0);
    assert_eq!(invariants(&cls), json!([{ "kind": "RxR_swap", "n": 1 }]));
}

#[test]
fn empty_standard_module() {
    let out = qmvw(&["standard", "--kind", "R_id", "--epsilon", "1", "--p", "0", "--q", "0"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["Ri"]["rows"], json!(0));
}

#[test]
fn bad_parameters_exit_with_two() {
    for args in [
        vec!["standard", "--kind", "R_id", "--epsilon", "1", "--n", "1"],
        vec!["standard", "--kind", "H_id", "--epsilon", "1", "--n", "1"],
        vec!["standard", "--kind", "C_id", "--epsilon", "2", "--n", "1"],
    ] {
        assert_eq!(code(&qmvw(&args)), 2, "{args:?}");
    }
}

#[test]
fn basis_changed_file_keeps_its_invariants() {
    let dir = TempDir::new().unwrap();
    let file = standard(&dir, "o4.json", &["--kind", "R_id", "--epsilon", "-1", "--n", "2"]);
    let e: HermitianModule<Rational> = module_from_json(&read_json(&file).unwrap()).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let g = random_intertwiner(&qmvw_core::group::commutant_basis(&e), e.dim(), &mut rng).unwrap();
    let moved = e.transport(&g).unwrap();
    let moved_file = path(&dir, "moved.json");
    write_json(&moved_file, &module_to_json(&moved)).unwrap();
    let cls = path(&dir, "cls.json");
    let out = qmvw(&["--backend", "float", "classify", s(&moved_file), "--out", s(&cls)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(invariants(&cls), json!([{ "kind": "R_id", "n": 2 }]));
}

#[test]
fn corrupted_gram_reports_the_failing_axiom() {
    let dir = TempDir::new().unwrap();
    let file = standard(&dir, "sp11.json", &["--kind", "R_id", "--epsilon", "1", "--p", "1", "--q", "1"]);
    let mut v = read_json(&file).unwrap();
    v["gram"][0]["entries"][1] = json!("5");
    write_json(&file, &v).unwrap();
    let out = qmvw(&["classify", s(&file)]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("FAILED"), "{err}");
}

#[test]
fn conjugator_on_identity_and_unipotent_elements() {
    let dir = TempDir::new().unwrap();
    let module = standard(&dir, "sp11.json", &["--kind", "R_id", "--epsilon", "1", "--p", "1", "--q", "1"]);
    let x = path(&dir, "x.json");
    let id = json!({ "rows": 8, "cols": 8, "entries": (0..64).map(|k| if k % 9 == 0 { "1" } else { "0" }).collect::<Vec<_>>() });
    write_json(&x, &id).unwrap();
    let c = path(&dir, "c.json");
    assert_eq!(code(&qmvw(&["conjugator", s(&module), s(&x), "--out", s(&c)])), 0);
    assert_eq!(read_json(&c).unwrap()["delta"], json!(-1));

    let out = qmvw(&["random", s(&module), "--seed", "5", "--sample", "unipotent", "--out", s(&x)]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&qmvw(&["conjugator", s(&module), s(&x), "--out", s(&c)])), 0);
    let v = read_json(&c).unwrap();
    assert_eq!(v["residuals"]["x"], json!("0"));
    assert!(!v["stage_log"].as_array().unwrap().is_empty());
}

#[test]
fn non_member_element_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let module = standard(&dir, "sp11.json", &["--kind", "R_id", "--epsilon", "1", "--p", "1", "--q", "1"]);
    let x = path(&dir, "x.json");
    let twice = json!({ "rows": 8, "cols": 8, "entries": (0..64).map(|k| if k % 9 == 0 { "2" } else { "0" }).collect::<Vec<_>>() });
    write_json(&x, &twice).unwrap();
    let out = qmvw(&["conjugator", s(&module), s(&x)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Gram matrix"));
}

#[test]
fn float_backend_through_the_environment() {
    let dir = TempDir::new().unwrap();
    let module = standard(&dir, "u11.json", &["--kind", "C_conj", "--epsilon", "1", "--p", "1", "--q", "1"]);
    let x = path(&dir, "x.json");
    assert_eq!(code(&qmvw(&["random", s(&module), "--seed", "9", "--out", s(&x)])), 0);
    let out = Command::new(env!("CARGO_BIN_EXE_qmvw"))
        .args(["conjugator", s(&module), s(&x)])
        .env("QMVW_BACKEND", "float")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["residuals"]["x"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn verify_reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.json"), path(&dir, "b.json"));
    for f in [&a, &b] {
        let out = qmvw(&[
            "verify", "--kind", "R_id", "--epsilon", "1", "--p", "1", "--q", "1", "--trials", "25", "--seed", "7", "--out", s(f),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v = read_json(&a).unwrap();
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["header"]["seed"], json!(7));
    assert_eq!(v["trials"].as_array().unwrap().len(), 25);
    assert!(v["trials"].as_array().unwrap().iter().all(|t| t["residual"] == json!("0")));
}

#[test]
fn verify_witness_for_complex_symplectic_model_is_the_identity() {
    let dir = TempDir::new().unwrap();
    let r = path(&dir, "r.json");
    let out = qmvw(&["verify", "--kind", "C_id", "--epsilon", "1", "--n", "1", "--trials", "5", "--seed", "1", "--out", s(&r)]);
    assert_eq!(code(&out), 0);
    let v = read_json(&r).unwrap();
    let entries = v["witness"]["g"]["entries"].as_array().unwrap();
    assert!(entries.iter().enumerate().all(|(k, x)| *x == json!(if k % 9 == 0 { "1" } else { "0" })));
    assert_eq!(v["witness"]["delta"], json!(-1));
}

#[test]
fn verify_without_trials_reports_only_the_witness() {
    let out = qmvw(&["verify", "--kind", "R_id", "--epsilon", "-1", "--n", "1", "--trials", "0", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["trials"].as_array().unwrap().is_empty());
    assert_eq!(v["witness"]["delta"], json!(-1));
}
