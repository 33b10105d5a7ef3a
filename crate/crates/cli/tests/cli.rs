use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn numrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numrad"))
        .args(args)
        .env_remove("NUMRAD_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn repro_passes() {
    let o = numrad(&["repro"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn repro_injected_constant_fails_and_names_quantity() {
    let o = numrad(&["repro", "--inject", "r(|A||A*|)=8"]);
    assert_eq!(o.status.code(), Some(1));
    let failing: Vec<_> = stdout(&o)
        .lines()
        .filter(|l| l.starts_with("FAIL "))
        .map(str::to_string)
        .collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|l| l.contains("r(|A||A*|)")), "{failing:?}");
}

#[test]
fn repro_json() {
    let o = numrad(&["repro", "--json"]);
    let v = json(&o);
    assert_eq!(v["pass"], true);
    for r in v["reports"].as_array().unwrap() {
        for key in ["id", "sign", "lhs", "rhs", "slack", "holds", "applicable", "details", "inputs_digest"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn check_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"n": 2, "re": [[1, 4], [1, 1]]}"#);
    let o = numrad(&["check", s(&a), "--inequality", "I-MAIN", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let r = &v.as_array().unwrap()[0];
    assert_eq!(r["holds"], true);
    // rhs = (||A|| + 3) / 2 with ||A||^2 = (19 + sqrt 325) / 2.
    let norm = ((19.0 + 325f64.sqrt()) / 2.0).sqrt();
    let slack = r["slack"].as_f64().unwrap();
    assert!((slack - (0.5 * (norm + 3.0) - 3.5)).abs() < 1e-8, "{slack}");
}

#[test]
fn check_identity_all() {
    let dir = tempfile::tempdir().unwrap();
    let i = write(
        dir.path(),
        "i.json",
        r#"{"n": 3, "re": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "im": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}"#,
    );
    let o = numrad(&["check", s(&i), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    let unary = numrad_core::catalog_list().iter().filter(|e| e.arity == 1).count();
    assert!(rows.len() >= unary);
    assert!(rows.iter().all(|r| r["holds"] == true));
    let tight = rows
        .iter()
        .filter(|r| r["slack"].as_f64().is_some_and(|x| x.abs() < 1e-9))
        .count();
    assert!(tight >= 3, "only {tight} equalities");
}

#[test]
fn check_non_intertwined_pair_reports_residual() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"n": 2, "re": [[1, 2], [0, 1]]}"#);
    let b = write(dir.path(), "b.json", r#"{"n": 2, "re": [[0, 1], [3, 0]]}"#);
    let o = numrad(&["check", s(&a), s(&b), "-i", "I-GEN-FG"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("intertwining residual"), "{out}");

    let o = numrad(&["check", s(&a), s(&b), "-i", "I-GEN-FG", "--json"]);
    for r in json(&o).as_array().unwrap() {
        assert_eq!(r["applicable"], false);
        assert!(r["details"]["intertwining_residual"].as_f64().unwrap() > 0.1);
    }
}

#[test]
fn check_sign_filter() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"n": 2, "re": [[0, 1], [0, 0]]}"#);
    let b = write(dir.path(), "b.json", r#"{"n": 2, "re": [[0, 0], [1, 0]]}"#);
    let o = numrad(&["check", s(&a), s(&b), "-i", "I-COMM-MU", "--sign", "-", "--json"]);
    let rows = json(&o);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["sign"], "-");
    assert!((rows[0]["lhs"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((rows[0]["rhs"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn check_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"n\": 2,\n \"re\": [[1, 2], [3]]}");
    let o = numrad(&["check", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.json"), "{err}");

    let a = write(dir.path(), "a.json", r#"{"n": 2, "re": [[1, 0], [0, 1]]}"#);
    assert_eq!(numrad(&["check", s(&a), "-i", "I-MU"]).status.code(), Some(2));
    assert_eq!(numrad(&["check", s(&a), "-i", "I-NOPE"]).status.code(), Some(2));
    assert_eq!(numrad(&["check", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(numrad(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tolerance_flags() {
    let dir = tempfile::tempdir().unwrap();
    let i = write(dir.path(), "i.json", r#"{"n": 2, "re": [[1, 0], [0, 1]]}"#);
    let o = numrad(&["check", s(&i), "-i", "I-EQV"]);
    assert_eq!(o.status.code(), Some(0));
    let o = numrad(&["--tol-cmp", "0", "check", s(&i), "-i", "I-MAIN", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = numrad(&["--tol-cmp", "-1", "check", s(&i)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_main_tighter_than_kit() {
    let o = numrad(&[
        "sweep", "--family", "ginibre", "--n", "4", "--trials", "300", "--seed", "42",
        "--entries", "I-MAIN,I-KIT03", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let main = v.as_array().unwrap().iter().find(|s| s["key"] == "I-MAIN").unwrap();
    assert_eq!(main["violations"], 0);
    assert_eq!(main["tighter_than"]["I-KIT03"], 1.0);
}

#[test]
fn sweep_equality_families() {
    let o = numrad(&[
        "sweep", "--family", "nilpotent_rank1", "--n", "5", "--trials", "200", "--entries", "I-MAIN",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v[0]["max_slack"].as_f64().unwrap() <= 1e-6);

    let o = numrad(&[
        "sweep", "--family", "hermitian_gauss", "--n", "3", "--trials", "500", "--entries", "I-EQV",
        "--json",
    ]);
    let v = json(&o);
    assert_eq!(v[0]["violations"], 0);
    assert!(v[0]["max_slack"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn sweep_outputs_match_across_formats_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for (threads, ext) in [("1", "csv"), ("8", "csv"), ("1", "json"), ("8", "json")] {
        let path = dir.path().join(format!("out-{threads}.{ext}"));
        let o = numrad(&[
            "sweep", "--family", "intertwined_pair", "--n", "3", "--trials", "50", "--threads",
            threads, "--out", s(&path),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        bytes.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    assert_eq!(bytes[2], bytes[3]);

    let text = String::from_utf8(bytes[0].clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,sign,trial,lhs,rhs,slack,holds,applicable"));
    let rows: Value = serde_json::from_slice(&bytes[2]).unwrap();
    let rows = rows["rows"].as_array().unwrap();
    let csv_rows: Vec<_> = lines.collect();
    assert_eq!(csv_rows.len(), rows.len());
    for (line, row) in csv_rows.iter().zip(rows) {
        let cols: Vec<_> = line.split(',').collect();
        for (i, key) in [(3, "lhs"), (4, "rhs"), (5, "slack")] {
            assert_eq!(cols[i].parse::<f64>().ok(), row[key].as_f64(), "{line}");
        }
    }
}

#[test]
fn sweep_thread_env_var() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.json");
    let o = Command::new(env!("CARGO_BIN_EXE_numrad"))
        .args(["sweep", "--family", "ginibre", "--n", "2", "--trials", "20", "--out", s(&path)])
        .env("NUMRAD_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let base = dir.path().join("base.json");
    numrad(&["sweep", "--family", "ginibre", "--n", "2", "--trials", "20", "--out", s(&base)]);
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&base).unwrap());
}

#[test]
fn sweep_arity_mismatch() {
    let o = numrad(&["sweep", "--family", "ginibre", "--n", "3", "--trials", "5", "--entries", "I-MU"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_catalog() {
    let o = numrad(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("I-MAIN"));
    let block = out.lines().find(|l| l.starts_with("I-HD-BLOCK")).unwrap();
    assert!(block.contains("arity 4"));

    let v = json(&numrad(&["list", "--json"]));
    assert_eq!(v.as_array().unwrap().len(), numrad_core::catalog_list().len());
}
