use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ginv_core::io::{self, Format};
use ginv_core::{ComplexMatrix, C64};
use tempfile::TempDir;

const EXAMPLE: &str = "1,0,0,1,0\n0,0,1,1,0\n0,0,0,1,0\n0,0,0,0,-1\n0,0,0,0,0\n";

fn ginv(args: &[&str]) -> Output {
    ginv_env(args, &[])
}

fn ginv_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ginv"));
    cmd.args(args);
    for var in ["GINV_RANK_TOL", "GINV_EQ_ABS", "GINV_EQ_REL"] {
        cmd.env_remove(var);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

#[test]
fn compute_example_mwc() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.csv", EXAMPLE);
    let out = dir.path().join("x.csv");
    for route in ["def", "canonical", "hs"] {
        let o = ginv(&["compute", s(&input), "--kind", "mwc", "--m", "1", "--route", route, "--out", s(&out)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let x = io::read_file(&out, None).unwrap();
        let mut expected = ComplexMatrix::zeros(5, 5);
        expected[(0, 0)] = C64::new(1.0, 0.0);
        expected[(0, 3)] = C64::new(1.0, 0.0);
        assert!(max_diff(&x, &expected) <= 1e-10);
    }
}

#[test]
fn compute_mp_of_identity_json() {
    let dir = TempDir::new().unwrap();
    let id = ComplexMatrix::identity(3);
    let input = dir.path().join("i.json");
    io::write_file(&input, &id, None).unwrap();
    let out = dir.path().join("o.json");
    let o = ginv(&["compute", s(&input), "--kind", "mp", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(max_diff(&io::read_file(&out, None).unwrap(), &id) <= 1e-14);
}

#[test]
fn compute_to_stdout_and_format_override() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.txt", "2,0\n0,4\n");
    let o = ginv(&["compute", s(&input), "--kind", "drazin"]);
    assert_eq!(code(&o), 2, "extension cannot be inferred");
    let o = ginv(&["compute", s(&input), "--kind", "drazin", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let x = io::parse(&stdout(&o), Format::Csv).unwrap();
    assert!((x[(1, 1)].re - 0.25).abs() < 1e-15);
}

#[test]
fn group_inverse_precondition() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "n.csv", "0,1\n0,0\n");
    let o = ginv(&["compute", s(&input), "--kind", "group"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("index"), "{}", stderr(&o));
    let o = ginv(&["compute", s(&input), "--kind", "core"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn parse_error_names_position() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.csv", "1,2\n3,4x\n");
    let o = ginv(&["compute", s(&input), "--kind", "mp"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2, column 3"), "{}", stderr(&o));
    let o = ginv(&["index", s(&dir.path().join("missing.csv"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.csv", EXAMPLE);
    assert_eq!(code(&ginv(&["compute", s(&input), "--kind", "mwc"])), 2);
    assert_eq!(code(&ginv(&["compute", s(&input), "--kind", "bt"])), 2);
    assert_eq!(code(&ginv(&["compute", s(&input), "--kind", "mwc", "--m", "0"])), 2);
    assert_eq!(code(&ginv(&["compute", s(&input), "--kind", "drazin", "--route", "hs"])), 2);
    assert_eq!(code(&ginv(&["frobnicate"])), 2);
}

#[test]
fn non_square_input() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r.csv", "1,2,3\n4,5,6\n");
    assert_eq!(code(&ginv(&["index", s(&input)])), 3);
    assert_eq!(code(&ginv(&["verify", s(&input)])), 3);
}

#[test]
fn index_values() {
    let dir = TempDir::new().unwrap();
    for (text, k) in [(EXAMPLE, "4"), ("1,0\n0,1\n", "0"), ("0,1\n0,0\n", "2")] {
        let input = write(&dir, "m.csv", text);
        let o = ginv(&["index", s(&input)]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o).trim(), k);
    }
}

#[test]
fn decompose_core_ep_and_hs() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.csv", EXAMPLE);
    let out = dir.path().join("cep");
    let o = ginv(&["decompose", s(&input), "--which", "core-ep", "--outdir", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["t"], 1);
    assert_eq!(manifest["index"], 4);
    for name in ["U", "T", "S", "N"] {
        assert!(out.join(format!("{name}.csv")).exists(), "{name}");
    }
    let t = io::read_file(&out.join("T.csv"), None).unwrap();
    assert!((t[(0, 0)].re - 1.0).abs() < 1e-12);

    let json = dir.path().join("a.json");
    io::write_file(&json, &io::read_file(&input, None).unwrap(), None).unwrap();
    let out = dir.path().join("hs");
    let o = ginv(&["decompose", s(&json), "--which", "hs", "--outdir", s(&out), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["r"], 4);
    for name in ["U", "Sigma", "K", "L"] {
        assert!(out.join(format!("{name}.json")).exists(), "{name}");
    }
}

#[test]
fn decompose_nonsingular_omits_empty_blocks() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.csv", "2,1\n0,3\n");
    let out = dir.path().join("d");
    let o = ginv(&["decompose", s(&input), "--outdir", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(out.join("T.csv").exists());
    assert!(!out.join("S.csv").exists());
    assert!(!out.join("N.csv").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["index"], 0);
}

#[test]
fn decompose_hs_of_zero_fails() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "z.csv", "0,0\n0,0\n");
    let o = ginv(&["decompose", s(&input), "--which", "hs", "--outdir", s(&dir.path().join("z"))]);
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_example_and_identity() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.csv", EXAMPLE);
    let o = ginv(&["verify", s(&input), "--m", "1,2,3,4,5", "--suite", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let lines: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    assert!(lines.len() > 100);
    for line in &lines {
        let fields: Vec<_> = line.split('\t').collect();
        assert_eq!(fields.len(), 3, "{line}");
        assert_eq!(fields[1], "PASS");
        fields[2].parse::<f64>().unwrap();
    }
    let id = write(&dir, "i.csv", "1,0,0\n0,1,0\n0,0,1\n");
    assert_eq!(code(&ginv(&["verify", s(&id)])), 0);
}

#[test]
fn verify_detects_injected_fault() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.csv", EXAMPLE);
    let o = ginv(&["verify", s(&input), "--m", "2", "--suite", "props", "--inject-fault", "perturb"]);
    assert_eq!(code(&o), 1);
    let failed: Vec<_> = stdout(&o).lines().filter(|l| l.contains("\tFAIL\t")).map(str::to_owned).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().any(|l| l.split('\t').nth(2).unwrap().parse::<f64>().unwrap() > 0.0));
}

#[test]
fn random_instances() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.csv");
    let o = ginv(&["random", "--n", "6", "--t", "2", "--index", "3", "--seed", "42", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("index 3"));
    assert!(stdout(&o).contains("rank 2"));
    let first = std::fs::read(&out).unwrap();
    let o = ginv(&["index", s(&out)]);
    assert_eq!(stdout(&o).trim(), "3");

    let o = ginv(&["random", "--n", "6", "--t", "2", "--index", "3", "--seed", "42", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&out).unwrap(), first);

    let o = ginv(&["random", "--n", "3", "--t", "3", "--index", "0", "--seed", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&ginv(&["index", s(&out)])).trim(), "0");

    let o = ginv(&["random", "--n", "4", "--t", "2", "--index", "5"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn tolerance_flags_and_environment() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.csv", EXAMPLE);
    let o = ginv_env(&["index", s(&input)], &[("GINV_EQ_ABS", "-1")]);
    assert_eq!(code(&o), 2);
    let o = ginv_env(&["index", s(&input), "--eq-abs", "1e-9"], &[("GINV_EQ_ABS", "-1")]);
    assert_eq!(code(&o), 0);
    let o = ginv_env(&["index", s(&input)], &[("GINV_RANK_TOL", "abc")]);
    assert_eq!(code(&o), 2);
    // A cutoff of 0.6 relative to ‖A‖ drops the smaller singular values.
    let o = ginv_env(&["index", s(&input)], &[("GINV_RANK_TOL", "0.6")]);
    assert_eq!(code(&o), 0);
    assert_ne!(stdout(&o).trim(), "4");
    let o = ginv_env(&["index", s(&input), "--rank-tol", "1e-10"], &[("GINV_RANK_TOL", "0.6")]);
    assert_eq!(stdout(&o).trim(), "4");
}
