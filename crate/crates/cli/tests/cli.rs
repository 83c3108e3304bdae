use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn ssnm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssnm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ssnm-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn ricci_has_a_single_row() {
    let o = ssnm(&["compute", "--preset", "morris-thorne", "--tensor", "ricci"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "Ric[2,2] = 2*b^2/(b^2+X2^2)^2\n");
}

#[test]
fn kk_is_zero() {
    let o = ssnm(&["compute", "--preset", "morris-thorne", "--tensor", "kk"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all components zero"));
}

#[test]
fn several_tensors_in_one_call() {
    let o = ssnm(&[
        "compute", "--preset", "sphere3", "--tensor", "scalar", "--tensor", "ricci",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("kappa = -6/r^2\n"), "{text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn flat_manifest_has_zero_riemann() {
    let path = scratch("flat.manifest");
    fs::write(
        &path,
        "dim = 2\ncoords = u, v\ng[1][1] = 1\ng[2][2] = 1\nconnection = levi-civita\n",
    )
    .unwrap();
    let o = ssnm(&[
        "compute",
        "--manifest",
        path.to_str().unwrap(),
        "--tensor",
        "riemann",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all components zero"));
}

#[test]
fn broken_manifest_is_a_usage_error() {
    let path = scratch("broken.manifest");
    fs::write(&path, "dim = 2\ncoords = u, v\ng[1][1] = 1 +\n").unwrap();
    let o = ssnm(&[
        "compute",
        "--manifest",
        path.to_str().unwrap(),
        "--tensor",
        "riemann",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn report_tree_carries_the_weyl_factor() {
    let o = ssnm(&["report", "--preset", "morris-thorne", "--format", "tree"]);
    let tree: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let item = tree["items"]
        .as_array()
        .unwrap()
        .iter()
        .find(|i| i["id"] == "I.3")
        .unwrap();
    assert_eq!(item["factor"], "b^2/(3*(b^2+X2^2)^2)");
    assert_eq!(tree["items"].as_array().unwrap().len(), 12);
}

#[test]
fn report_exit_status_tracks_the_claims() {
    let o = ssnm(&["report", "--preset", "morris-thorne"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL (III)"));
    let flat = ssnm(&["report", "--preset", "flat3"]);
    assert!(flat.status.success());
    assert!(stdout(&flat).contains("rank = 0, structure = Einstein"));
}

#[test]
fn validate_passes_every_group() {
    let o = ssnm(&["validate", "--preset", "morris-thorne"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("9/9 equation groups PASS"));
    let tree = ssnm(&["validate", "--preset", "morris-thorne", "--format", "tree"]);
    let v: serde_json::Value = serde_json::from_slice(&tree.stdout).unwrap();
    assert_eq!(v["summary"]["passed"], 9);
}

#[test]
fn validate_rejects_other_sources() {
    assert_eq!(
        ssnm(&["validate", "--preset", "flat3"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = [
        "report",
        "--preset",
        "morris-thorne",
        "--format",
        "tree",
        "--seed",
        "7",
    ];
    assert_eq!(ssnm(&args).stdout, ssnm(&args).stdout);
    let out = scratch("report.json");
    let o = ssnm(&[&args[..], &["--out", out.to_str().unwrap()]].concat());
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read(&out).unwrap(), ssnm(&args).stdout);
}

#[test]
fn unknown_tensor_lists_the_vocabulary() {
    let o = ssnm(&["compute", "--preset", "flat3", "--tensor", "torsion"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unknown tensor `torsion`"));
    assert!(err.contains("riemann"));
}

#[test]
fn exactly_one_source_is_required() {
    assert!(!ssnm(&["compute", "--tensor", "ricci"]).status.success());
    let both = ssnm(&[
        "compute",
        "--preset",
        "flat3",
        "--manifest",
        "x",
        "--tensor",
        "ricci",
    ]);
    assert!(!both.status.success());
}
