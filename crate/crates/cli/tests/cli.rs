use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const KDV_PENCIL: &str = include_str!("../../core/golden/kdv_pencil.txt");
const FKDV_P2_REFERENCE: &str = include_str!("../../core/golden/reference_fkdv_p2.txt");

fn walg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_walg"))
        .args(args)
        .output()
        .expect("run walg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_examples(name: &str, dir: &Path) {
    let o = walg(&["examples", name, "--out", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn reduce_fkdv_all_methods() {
    let o = walg(&[
        "reduce", "--builtin", "sl3", "--partition", "2,1", "--grading", "dynkin", "--a", "e31",
        "--method", "all",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("## p2") && out.contains("## p1") && out.contains("## pencil"));
    assert!(out.contains("{q4(x), q4(y)} = (1/6*eps)*delta^(1)(x-y)"), "{out}");
}

#[test]
fn reduce_kdv_writes_pencil_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = walg(&[
        "reduce", "--builtin", "sl2", "--partition", "2", "--a", "f", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let pencil = fs::read_to_string(dir.path().join("pencil.txt")).unwrap();
    assert_eq!(pencil, KDV_PENCIL);
    assert!(dir.path().join("p1.txt").exists() && dir.path().join("p2.txt").exists());
}

#[test]
fn reduce_is_deterministic() {
    let args = [
        "reduce", "--builtin", "sl3", "--partition", "2,1", "--a", "e31", "--format", "json",
    ];
    let a = walg(&args);
    let b = walg(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["pencil"]["fields"], 4);
}

#[test]
fn malformed_setup_json_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{ \"dim\": 3, ").unwrap();
    let o = walg(&["reduce", "--setup", path.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("parse error"), "{}", stderr(&o));
}

#[test]
fn non_isotropic_subspace_is_named() {
    let o = walg(&[
        "reduce", "--builtin", "sl3", "--partition", "2,1", "--a", "e31", "--isotropic",
        "e21,e32",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("isotropic"), "{}", stderr(&o));
}

#[test]
fn condition_on_a_is_named() {
    let o = walg(&["reduce", "--builtin", "sl3", "--partition", "2,1", "--a", "e21"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("condition on a"), "{}", stderr(&o));
}

#[test]
fn verify_fkdv_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    write_examples("fkdv", dir.path());
    let setup = dir.path().join("g1_lplus_a_plus.setup.json");
    let golden = dir.path().join("reference_fkdv_p2.txt");
    let o = walg(&[
        "verify",
        "--setup",
        setup.to_str().unwrap(),
        "--golden",
        golden.to_str().unwrap(),
        "--golden-part",
        "p2",
        "--golden-eps-one",
        "--jacobi-degree",
        "2",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for n in ["methods", "skew", "lambda_linear", "jacobi", "casimir", "leading_term", "golden"] {
        assert!(names.contains(&n), "missing check {n}");
    }
}

#[test]
fn corrupted_golden_reports_first_difference() {
    let dir = tempfile::tempdir().unwrap();
    write_examples("fkdv", dir.path());
    let setup = dir.path().join("g1_lplus_a_plus.setup.json");
    let golden = dir.path().join("corrupt.txt");
    fs::write(&golden, FKDV_P2_REFERENCE.replace("(1/6)", "(1/5)")).unwrap();
    let o = walg(&[
        "verify",
        "--setup",
        setup.to_str().unwrap(),
        "--golden",
        golden.to_str().unwrap(),
        "--golden-part",
        "p2",
        "--golden-eps-one",
        "--jacobi-degree",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL golden: {q4, q4}"), "{out}");
}

#[test]
fn verify_against_shipped_computed_pencil() {
    let dir = tempfile::tempdir().unwrap();
    write_examples("kdv", dir.path());
    let o = walg(&[
        "verify",
        "--setup",
        dir.path().join("kdv.setup.json").to_str().unwrap(),
        "--golden",
        dir.path().join("kdv.pencil.txt").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS golden"));
}

#[test]
fn grading_independence_on_sl3_minimal() {
    let o = walg(&[
        "verify", "--builtin", "sl3", "--partition", "2,1", "--a", "e31", "--gradings",
        "G1,G2,G3", "--jacobi-degree", "1",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS gradings"));
}

#[test]
fn examples_emit_setups_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    write_examples("kdv", dir.path());
    assert!(dir.path().join("kdv.setup.json").exists());
    assert!(dir.path().join("reference_kdv.txt").exists());
    write_examples("fkdv", dir.path());
    for v in ["g1_lplus_a_plus", "g2_a_e32", "g3_a_e21"] {
        assert!(dir.path().join(format!("{v}.setup.json")).exists(), "{v}");
    }
}

#[test]
fn unknown_example_lists_names() {
    let o = walg(&["examples", "boussinesq"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("available: kdv, fkdv"), "{}", stderr(&o));
}
