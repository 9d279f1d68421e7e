use std::path::{Path, PathBuf};
use std::process::Command;

use steerage::cli::{run, Output};

fn dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

fn fixture(name: &str) -> String {
    dir("fixtures").join(name).display().to_string()
}

fn steerage(args: &[&str]) -> Output {
    run(std::iter::once("steerage").chain(args.iter().copied()))
}

/// `(golden file, arguments)` for every preset and subcommand.
fn cases() -> Vec<(String, Vec<String>)> {
    let mut out = Vec::new();
    for preset in ["werner_half", "ref_state_29", "phi_0.2"] {
        let input = fixture(&format!("{preset}.json"));
        let mut add = |name: &str, args: &[&str]| {
            let mut v: Vec<String> = args.iter().map(|s| s.to_string()).collect();
            v.push(input.clone());
            out.push((format!("{preset}.{name}"), v));
        };
        add("analyze.txt", &["analyze"]);
        add("analyze.json", &["--format", "json", "analyze"]);
        add("quantity_a2b.txt", &["quantity", "--direction", "a2b"]);
        add("quantity_b2a.txt", &["quantity", "--direction", "b2a"]);
        add("mesh.csv", &["mesh", "--samples", "24"]);
    }
    out
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in cases() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = steerage(&args);
        assert_eq!(out.code, 0, "{name}: {}", out.stderr);
        let path = dir("golden").join(&name);
        if update {
            std::fs::write(&path, &out.stdout).unwrap();
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(out.stdout == want, "{name} differs from its golden file");
    }
}

#[test]
fn binary_matches_in_process_runs() {
    let bin = env!("CARGO_BIN_EXE_steerage");
    let input = fixture("werner_half.json");
    for args in [vec!["analyze", input.as_str()], vec!["mesh", "--samples", "7", input.as_str()]] {
        let a = Command::new(bin).args(&args).output().unwrap();
        let b = Command::new(bin).args(&args).output().unwrap();
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        let mut full = vec!["steerage"];
        full.extend(&args);
        assert_eq!(String::from_utf8(a.stdout).unwrap(), run(full).stdout);
    }
}

#[test]
fn stdin_is_accepted() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_steerage"))
        .args(["quantity", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(br#"{"werner": {"p": 0.6}}"#).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("1.2 3 "));
}

#[test]
fn exit_codes() {
    let cases = [
        (vec!["analyze", "bell_invalid.json"], 3),
        (vec!["analyze", "broken.json"], 2),
        (vec!["asymmetry", "phi_0.3.json"], 2),
        (vec!["asymmetry", "werner_half.json"], 2),
        (vec!["analyze", "does_not_exist.json"], 2),
        (vec!["--grid", "-9", "quantity", "werner_0.6.json"], 2),
        (vec!["frobnicate"], 2),
        (vec!["quantity", "bell_edge.json"], 0),
    ];
    for (args, code) in cases {
        let args: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() })
            .collect();
        let out = steerage(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.code, code, "{args:?}: {}", out.stderr);
        if code != 0 {
            assert!(out.stdout.is_empty() && out.stderr.starts_with("error"), "{args:?}: {}", out.stderr);
        }
    }
    let out = steerage(&["analyze", &fixture("bell_invalid.json")]);
    assert!(out.stderr.contains("min eigenvalue"));
}

#[test]
fn quantity_lines() {
    let out = steerage(&["quantity", &fixture("werner_0.6.json")]);
    let fields: Vec<&str> = out.stdout.split_whitespace().collect();
    assert_eq!(&fields[..2], ["1.2", "3"]);
    assert!(fields[2].parse::<f64>().unwrap() < 1e-12);
    let out = steerage(&["quantity", &fixture("bell_edge.json")]);
    assert!(out.stdout.starts_with("0.785398163397 2 "));
}

#[test]
fn asymmetry_json_carries_the_verdict_pair() {
    let out = steerage(&["--grid", "-3", "--format", "json", "asymmetry", &fixture("ref_state_29.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["alice_to_bob"]["verdict"], "steerable");
    assert_eq!(v["bob_to_alice"]["verdict"], "unsteerable");
    assert_eq!(v["uniqueness"]["passed"], true);
}
