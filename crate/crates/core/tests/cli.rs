use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hecke-n0"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("run hecke-n0")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tree_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn n0_text_and_json() {
    let o = run(&["n0", "--level", "1", "--weight", "24", "--no-cache"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2");
    let o = run(&["n0", "--level", "11", "--weight", "12", "--no-cache", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["N"], "11");
    assert_eq!(v["n0"], "2");
    assert!(v["streets_report"].is_array());
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["n0", "--level", "0", "--weight", "12", "--no-cache"]).status.code(), Some(2));
    assert_eq!(run(&["n0", "--level", "5"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--levels", "x..3", "--weights", "12", "--no-cache"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn table_is_deterministic_and_independent_of_jobs() {
    let args = ["table", "--levels", "11..14", "--weights", "2..8", "--no-cache"];
    let a = run(&[&args[..], &["--jobs", "1"]].concat());
    let b = run(&[&args[..], &["--jobs", "3"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,k,n0,dim,seconds"));
    assert_eq!(lines.count(), 4 * 4);
    assert!(text.contains("\n11,2,0,1,\n"));
}

#[test]
fn cache_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["table", "--levels", "13,16", "--weights", "10..12", "--cache-dir", d];
    let first = run(&args);
    assert!(first.status.success());
    let tree = tree_bytes(dir.path());
    assert!(!tree.is_empty());
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(tree, tree_bytes(dir.path()));
    let fresh = run(&["table", "--levels", "13,16", "--weights", "10..12", "--no-cache"]);
    assert_eq!(first.stdout, fresh.stdout);
}

#[test]
fn verify_passes_on_bundled_rows_and_fails_on_tampered_data() {
    let o = run(&["verify", "--levels", "11..14", "--weights", "12..14", "--no-cache"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("failed 0"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tampered.csv");
    std::fs::write(&path, "N,k,n0,table_id\n13,12,2,3\n14,12,5,3\n").unwrap();
    let o = run(&["verify", "--dataset", path.to_str().unwrap(), "--no-cache"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("MISMATCH N=14 k=12"), "{out}");
    assert!(out.contains("checked 2, passed 1, failed 1"), "{out}");
}

#[test]
fn empty_verify_filter_warns() {
    let o = run(&["verify", "--levels", "1000", "--no-cache"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn reports_and_dims() {
    let o = run(&["reports", "--level", "30", "--weight", "6", "--no-cache"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["atkin_lehner"]["ok"], true);
    assert_eq!(v["maeda"]["expected_orbits"], 8);
    let o = run(&["dims", "--level", "11", "--weight", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["generators"], 12);
    assert_eq!(v["cuspidal_plus"], 1);
}
