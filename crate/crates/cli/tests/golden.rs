//! Golden tests: every number the binary prints must match a direct
//! library call.

use std::path::PathBuf;
use std::process::{Command, Output};

use teneva_core::certify::{certify_rational, certify_torus, RationalFixture};
use teneva_core::engine::run_pipeline;
use teneva_core::lower_halves::{lh_sequence, ratio_report, teneva_bound};
use teneva_core::primes::primes_between;

fn teneva(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teneva")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = teneva(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("teneva-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn joined(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

#[test]
fn lh_lines_match_the_library() {
    for n in [9u64, 11, 13, 31, 37, 41, 331] {
        let s = lh_sequence(n).unwrap();
        let expected = format!("LH({n}) = ({}), l={}, t={}\n", joined(&s.terms), s.length, s.tail);
        assert_eq!(stdout(&["lh", &n.to_string()]), expected);
    }
    assert_eq!(stdout(&["lh", "31"]), "LH(31) = (15, 7, 3), l=3, t=3\n");
}

#[test]
fn bound_and_table_match_the_library() {
    let line = stdout(&["bound", "104729"]);
    let r = ratio_report(104729).unwrap();
    assert!(line.starts_with(&format!("p=104729 LH=({}) l={} t={} bound={} ", joined(&r.sequence.terms), r.length, r.tail, r.teneva_bound)));
    assert!(line.contains(&format!("ratio={} ", r.exact_ratio)));
    assert!(stdout(&["bound", "11"]).contains(&format!(" bound={} ", teneva_bound(11).unwrap())));

    let table = stdout(&["table", "331"]);
    let primes = primes_between(11, 331);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), primes.len());
    for (row, p) in rows.iter().zip(&primes) {
        let r = ratio_report(*p).unwrap();
        assert!(row.starts_with(&format!("p={p} LH=(")), "{row}");
        assert!(row.contains(&format!(" bound={} ", r.teneva_bound)), "{row}");
        assert!(row.contains(&format!(" ratio={} ", r.exact_ratio)), "{row}");
    }
}

#[test]
fn json_mirrors_text() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["--json", "lh", "41"])).unwrap();
    let s = lh_sequence(41).unwrap();
    assert_eq!(v["terms"], serde_json::json!(s.terms));
    assert_eq!(v["length"], s.length);
    let v: serde_json::Value = serde_json::from_str(&stdout(&["table", "50", "--json"])).unwrap();
    assert_eq!(v.as_array().unwrap().len(), primes_between(11, 50).len());
}

#[test]
fn certify_lines_match_the_library() {
    for p in [11u64, 13] {
        assert_eq!(stdout(&["certify", &format!("t2-{p}")]), format!("{}\n", certify_torus(p).unwrap().summary()));
    }
    for (name, f) in [("r52", RationalFixture::R52), ("r43", RationalFixture::R43)] {
        assert_eq!(stdout(&["certify", name]), format!("{}\n", certify_rational(f).unwrap().summary()));
    }
    assert_eq!(stdout(&["certify", "t2-11"]), "mincol_11 T(2,11) = 5 [exact]\n");
    assert_eq!(stdout(&["certify", "r52"]), "mincol_11 R(5,2) = 5 [exact]\n");
}

#[test]
fn pipeline_files_match_the_library() {
    let trace = run_pipeline(11).unwrap();
    assert_eq!(stdout(&["pipeline", "11", "--emit", "trace"]), trace.to_text());
    let path = scratch("t13.pd");
    stdout(&["pipeline", "13", "--emit", "pd", "--out", path.to_str().unwrap()]);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, run_pipeline(13).unwrap().final_diagram.to_text());
    let parsed = teneva_core::coloring::ColoredDiagram::parse(&written).unwrap();
    assert_eq!(parsed.palette().size(), 6);
}

#[test]
fn certificates_round_trip_through_verify() {
    let path = scratch("t11.cert");
    stdout(&["certify", "t2-11", "--out", path.to_str().unwrap()]);
    assert_eq!(stdout(&["verify", path.to_str().unwrap()]), "OK mincol_11 T(2,11) = 5 [exact]\n");

    let corrupted = std::fs::read_to_string(&path).unwrap().replace("= 5 exact", "= 4 exact");
    let bad = scratch("corrupted.cert");
    std::fs::write(&bad, corrupted).unwrap();
    let out = teneva(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reason:"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [&["pipeline", "9"][..], &["lh", "8"], &["bound", "7"], &["certify", "nonsense"], &["frobnicate"]] {
        assert_eq!(teneva(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn baseline_respects_the_enumeration_cap() {
    assert!(stdout(&["baseline", "11"]).ends_with("110 nontrivial colorings, minimum palette 11\n"));
    let out = teneva(&["baseline", "11", "--max-enumeration", "100"]);
    assert_eq!(out.status.code(), Some(1));
}
