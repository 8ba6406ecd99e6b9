use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn mclex(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mclex"))
        .args(args)
        .current_dir(dir)
        .env_remove("MCLEX_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn fixtures() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    write(&dir, "maltsev.txt", "011\n110\n");
    write(&dir, "d3.txt", "001\n010\n100\n");
    write(&dir, "arith.txt", "011\n110\n010\n");
    write(&dir, "both.txt", "011\n110\n\n001\n010\n100\n");
    dir
}

#[test]
fn decide_exit_codes() {
    let dir = fixtures();
    let o = mclex(dir.path(), &["decide", "--premise", "arith.txt", "--goal", "d3.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "holds\n");
    let o = mclex(dir.path(), &["decide", "--premise", "maltsev.txt", "--goal", "d3.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "fails\n");
    let o = mclex(dir.path(), &["decide", "--premise", "missing.txt", "--goal", "d3.txt"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mclex(dir.path(), &["decide", "--premise", "arith.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conjunction_premise() {
    let dir = fixtures();
    for extra in [&[][..], &["--conjoin"][..]] {
        let mut args = vec!["decide", "--premise", "both.txt", "--goal", "arith.txt"];
        args.extend_from_slice(extra);
        assert_eq!(mclex(dir.path(), &args).status.code(), Some(0), "{extra:?}");
    }
}

#[test]
fn json_verdict() {
    let dir = fixtures();
    let o = mclex(dir.path(), &["--format", "json", "decide", "--premise", "maltsev.txt", "--goal", "d3.txt"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], false);
    assert!(v["failure"].is_object());
}

#[test]
fn prove_then_verify() {
    let dir = fixtures();
    let o = mclex(dir.path(), &["prove", "--premise", "arith.txt", "--goal", "d3.txt", "--out", "t.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = mclex(dir.path(), &["verify", "t.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid\n");

    // flip one entry of the first derived column
    let text = std::fs::read_to_string(dir.path().join("t.json")).unwrap();
    let mut t: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = &mut t["steps"][0]["derived"][0];
    *entry = serde_json::json!(1 - entry.as_u64().unwrap());
    write(&dir, "bad.json", &t.to_string());
    let o = mclex(dir.path(), &["verify", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid"));
}

#[test]
fn prove_refuses_failing_implications() {
    let dir = fixtures();
    let o = mclex(dir.path(), &["prove", "--premise", "maltsev.txt", "--goal", "d3.txt", "--out", "t.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("t.json").exists());
}

#[test]
fn matrix_commands() {
    let dir = fixtures();
    let o = mclex(dir.path(), &["canon", "maltsev.txt"]);
    assert_eq!(stdout(&o), "011\n101\n");
    let o = mclex(dir.path(), &["triviality", "arith.txt"]);
    assert_eq!(stdout(&o), "non-trivial\n");
    write(&dir, "id.txt", "01\n10\n");
    let o = mclex(dir.path(), &["triviality", "id.txt"]);
    assert!(stdout(&o).starts_with("trivial"));
    write(&dir, "a.txt", "01\n");
    write(&dir, "b.txt", "10\n");
    let o = mclex(dir.path(), &["product", "a.txt", "b.txt"]);
    assert_eq!(stdout(&o), "0011\n1010\n");
}

#[test]
fn count_row() {
    let dir = fixtures();
    let o = mclex(dir.path(), &["count", "4", "2", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2 2 6 21 37 79\n");
}

#[test]
fn poset_output_is_stable() {
    let dir = fixtures();
    let base = mclex(dir.path(), &["poset", "3", "5", "3", "--out", "a.json", "--dot", "a.dot"]);
    assert_eq!(base.status.code(), Some(0));
    let cached = mclex(
        dir.path(),
        &["--jobs", "2", "--cache", "cache.json", "poset", "3", "5", "3", "--out", "b.json", "--dot", "b.dot"],
    );
    // a second run reads the cache written by the first
    let warm = mclex(
        dir.path(),
        &["--jobs", "1", "--cache", "cache.json", "poset", "3", "5", "3", "--out", "c.json", "--dot", "c.dot"],
    );
    assert!(dir.path().join("cache.json").exists());
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    for (o, json, dot) in [(&cached, "b.json", "b.dot"), (&warm, "c.json", "c.dot")] {
        assert_eq!(o.stdout, base.stdout);
        assert_eq!(read(json), read("a.json"));
        assert_eq!(read(dot), read("a.dot"));
    }
    let dot = String::from_utf8(read("a.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn intersect_posets() {
    let dir = fixtures();
    for (name, m) in [("p372.json", "7"), ("p352.json", "5")] {
        mclex(dir.path(), &["poset", "3", m, "2", "--out", name]);
    }
    mclex(dir.path(), &["poset", "4", "5", "2", "--out", "p452.json"]);
    let meet = mclex(dir.path(), &["--format", "json", "intersect", "p372.json", "p452.json"]);
    assert_eq!(meet.status.code(), Some(0));
    let small = std::fs::read(dir.path().join("p352.json")).unwrap();
    assert_eq!(meet.stdout, small);
}
