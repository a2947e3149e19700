use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hotvis::io::read_layout_json;

fn hotvis(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hotvis"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = hotvis(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

/// Runs the whole pipeline into `dir` and returns the produced files.
fn pipeline(dir: &Path) -> Vec<(String, Vec<u8>)> {
    ok(dir, &["synth", "--sequences", "300", "--seed", "4", "--output-edges", "edges.csv", "--output-clusters", "clusters.csv"]);
    ok(dir, &["paths", "--input", "edges.csv", "--delta", "1", "--max-order", "2", "--output", "paths.json"]);
    ok(dir, &["layout", "--paths", "paths.json", "--max-order", "2", "--iterations", "200", "--seed", "9", "--output", "layout.json"]);
    ok(dir, &["layout", "--paths", "paths.json", "--max-order", "2", "--iterations", "200", "--seed", "9", "--output", "layout.csv"]);
    ok(dir, &["metrics", "--layout", "layout.json", "--paths", "paths.json", "--gamma", "10", "--gamma", "50", "--output", "metrics.json"]);
    ok(dir, &[
        "render", "--layout", "layout.csv", "--paths", "paths.json", "--colors", "clusters.csv",
        "--highlight-top", "10", "--circle-gamma", "10", "--output", "layout.svg",
    ]);
    ok(dir, &[
        "eval", "--paths", "paths.json", "--repetitions", "4", "--iterations", "100",
        "--output", "eval.json", "--csv", "eval.csv",
    ]);
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn every_command_is_byte_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = pipeline(a.path());
    let second = pipeline(b.path());
    assert_eq!(first.len(), 9);
    assert_eq!(first, second);
}

#[test]
fn zero_alpha_equals_first_order() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("e.txt"), "a b 1\nb c 2\nc d 3\nd a 4\na c 5\nc b 6\n").unwrap();
    ok(d, &["paths", "--input", "e.txt", "--delta", "2", "--max-order", "3", "--output", "p.json"]);
    ok(d, &["layout", "--paths", "p.json", "--max-order", "1", "--seed", "5", "--output", "k1.json"]);
    ok(d, &["layout", "--paths", "p.json", "--max-order", "3", "--alpha", "2=0", "--alpha", "3=0", "--seed", "5", "--output", "k3.json"]);
    let k1 = read_layout_json(&fs::read_to_string(d.join("k1.json")).unwrap()).unwrap();
    let k3 = read_layout_json(&fs::read_to_string(d.join("k3.json")).unwrap()).unwrap();
    assert_eq!(k1.positions(), k3.positions());
}

#[test]
fn trajectories_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("t.txt"), "a,b,c\t3\nb,c,d\n").unwrap();
    let out = ok(d, &["paths", "--input", "t.txt", "--input-kind", "trajectories", "--max-order", "2"]);
    let pc = hotvis::io::read_path_collection(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(pc.count_named(&["a", "b", "c"]), 3);
    assert_eq!(pc.count_named(&["b", "c"]), 4);
    assert_eq!(pc.delta(), None);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(hotvis(d, &["--help"]).status.code(), Some(0));
    assert_eq!(hotvis(d, &["--version"]).status.code(), Some(0));
    assert_eq!(hotvis(d, &["layout", "--bogus"]).status.code(), Some(1));
    assert_eq!(hotvis(d, &["frobnicate"]).status.code(), Some(1));

    fs::write(d.join("bad.txt"), "a,b,1\na,b,x\n").unwrap();
    let out = hotvis(d, &["paths", "--input", "bad.txt", "--delta", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(hotvis(d, &["paths", "--input", "missing.txt", "--delta", "1"]).status.code(), Some(2));
    // argument rejected by the library is a usage error
    fs::write(d.join("ok.txt"), "a,b,1\n").unwrap();
    assert_eq!(hotvis(d, &["paths", "--input", "ok.txt", "--delta", "0"]).status.code(), Some(1));

    let mut dense = String::new();
    for t in 0..6 {
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    dense.push_str(&format!("v{i},v{j},{t}\n"));
                }
            }
        }
    }
    fs::write(d.join("dense.txt"), dense).unwrap();
    let out = hotvis(d, &["paths", "--input", "dense.txt", "--delta", "3", "--max-order", "4", "--cap", "50"]);
    assert_eq!(out.status.code(), Some(3));
}
