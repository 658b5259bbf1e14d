use std::path::Path;
use std::process::{Command, Output};

use bcc_core::code::Distance;
use bcc_core::report::{CodeReport, FamilyReport, SearchReport};
use bcc_core::search::canonicalize;
use bcc_core::stabsim::Sweep;

fn bcc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcc"))
        .args(args)
        .env_remove("BCC_OUT_DIR")
        .output()
        .expect("spawn bcc")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = bcc(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

#[test]
fn build_reports_flags() {
    let r: CodeReport =
        serde_json::from_str(&ok(&["build", "-n", "18", "-S", "5,11,15,17", "--format", "json"])).unwrap();
    assert_eq!(r.k, 2);
    assert!(r.self_orthogonal);
    assert_eq!(r.d, Some(Distance::Exact(5)));

    let text = ok(&["build", "-n", "10", "-S", "3,5,7"]);
    assert!(text.contains("BellPair"));

    let out = bcc(&["build", "-n", "9", "-S", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn negative_offsets_are_normalized() {
    let r: CodeReport = serde_json::from_str(&ok(&["build", "-n", "10", "-S", "-3,3,5", "--format", "json"])).unwrap();
    assert_eq!(r.offsets, vec![3, 5, 7]);
}

#[test]
fn spec_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.toml");
    std::fs::write(&path, "n = 18\nS = [5, 11, -3, 17]\n").unwrap();
    assert_eq!(ok(&["distance", "--spec", path.to_str().unwrap()]).trim(), "5");
    std::fs::write(&path, "n = 18\nS = [4]\n").unwrap();
    assert_eq!(
        bcc(&["distance", "--spec", path.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn distances() {
    assert_eq!(ok(&["distance", "-n", "26", "-S", "5,9,13,17,21"]).trim(), "5");
    assert_eq!(ok(&["distance", "-n", "34", "-S", "1,5,7,9,15,23"]).trim(), "7");
    assert_eq!(ok(&["distance", "-n", "4", "-S", "1,3"]).trim(), "1");
    assert_eq!(
        ok(&["distance", "-n", "34", "-S", "1,5,7,9,15,23", "--w-max", "5"]).trim(),
        "> 5"
    );
}

#[test]
fn families() {
    let r: FamilyReport =
        serde_json::from_str(&ok(&["family", "rotated-toric", "-d", "3", "--format", "json"])).unwrap();
    assert_eq!((r.n, r.offsets.clone()), (10, vec![3, 5, 7]));
    assert!(r.passed());
    let r: FamilyReport =
        serde_json::from_str(&ok(&["family", "cyclic-cluster", "-d", "3", "--format", "json"])).unwrap();
    assert_eq!((r.n, r.k, r.distance), (5, 1, Distance::Exact(3)));
    assert!(r.passed());
    let r: FamilyReport =
        serde_json::from_str(&ok(&["family", "rotated-toric", "-d", "7", "--format", "json"])).unwrap();
    assert_eq!((r.n, r.k, r.distance), (50, 2, Distance::Exact(7)));
    assert!(r.passed());
    assert_eq!(bcc(&["family", "rotated-toric", "-d", "4"]).status.code(), Some(1));
}

#[test]
fn search_hits() {
    let r: SearchReport =
        serde_json::from_str(&ok(&["search", "-n", "18", "-k", "4", "-d", "5", "--format", "json"])).unwrap();
    assert!(r.hits.iter().any(|h| h.offsets == canonicalize(18, &[5, 11, 15, 17])));
    let r: SearchReport =
        serde_json::from_str(&ok(&["search", "-n", "16", "-k", "4", "-d", "5", "--format", "json"])).unwrap();
    assert!(r.hits.is_empty());
    let r: SearchReport =
        serde_json::from_str(&ok(&["search", "-n", "34", "-k", "6", "-d", "7", "--format", "json"])).unwrap();
    assert!(r
        .hits
        .iter()
        .any(|h| h.offsets == canonicalize(34, &[1, 5, 7, 9, 15, 23])));
}

#[test]
fn output_does_not_depend_on_jobs() {
    let one = ok(&[
        "--jobs", "1", "search", "-n", "18", "-k", "3", "-d", "4", "--format", "json",
    ]);
    let two = ok(&[
        "--jobs", "3", "search", "-n", "18", "-k", "3", "-d", "4", "--format", "json",
    ]);
    assert_eq!(one, two);
}

fn simulate(dir: &Path, jobs: &str) -> String {
    ok(&[
        "--jobs",
        jobs,
        "simulate",
        "-n",
        "10",
        "-S",
        "1,9",
        "--scheme",
        "none",
        "--basis",
        "z",
        "--p",
        "5e-3,1e-2,2e-2",
        "--shots",
        "20000",
        "--seed",
        "7",
        "--out",
        dir.to_str().unwrap(),
        "--format",
        "json",
    ])
}

#[test]
fn simulate_writes_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let a = simulate(dir.path(), "1");
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 7);
    let file = v["sweeps"][0]["file"].as_str().unwrap();
    let text = std::fs::read_to_string(file).unwrap();
    let sweep = Sweep::from_csv(&text, 7, 10).unwrap();
    assert_eq!(sweep.records.len(), 3);
    assert_eq!(
        serde_json::to_value(&sweep.records).unwrap(),
        v["sweeps"][0]["sweep"]["records"]
    );
    let e = sweep.exponent.unwrap();
    assert!((1.0..3.0).contains(&e), "{e}");

    let dir2 = tempfile::tempdir().unwrap();
    let b = simulate(dir2.path(), "2");
    assert_eq!(
        a.replace(dir.path().to_str().unwrap(), ""),
        b.replace(dir2.path().to_str().unwrap(), "")
    );
}

#[test]
fn simulate_out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bcc"))
        .args([
            "simulate", "-n", "10", "-S", "1,9", "--scheme", "none", "--basis", "x", "--p", "1e-2", "--shots", "1000",
        ])
        .env("BCC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn simulate_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let code = |extra: &[&str]| {
        let mut args = vec!["simulate", "-n", "18", "-S", "5,11,15,17", "--out", d];
        args.extend_from_slice(extra);
        bcc(&args).status.code()
    };
    assert_eq!(code(&["--p", "0,1e-2"]), Some(1));
    assert_eq!(code(&["--p", "1e-2", "--scheme", "sharing"]), Some(1));
    assert_eq!(code(&["--p", "1e-2,2e-2", "--shots", "1,2,3"]), Some(1));
    // odd |S| cannot prepare the second block
    assert_eq!(
        bcc(&["simulate", "-n", "10", "-S", "3,5,7", "--p", "1e-2", "--out", d])
            .status
            .code(),
        Some(1)
    );
}
