use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn vlgscan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vlgscan")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn built(dir: &TempDir, text: &[u8]) -> PathBuf {
    let src = dir.path().join("text.txt");
    std::fs::write(&src, text).unwrap();
    let idx = dir.path().join("text.idx");
    let o = vlgscan(&["build", s(&src), "-o", s(&idx)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    idx
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn search_prints_endpoints() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, b"abracadabra");
    let o = vlgscan(&["search", s(&idx), "ab[2,5]ra"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n9\n");
}

#[test]
fn every_strategy_flag_gives_the_same_answer() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, &b"abracadabra".repeat(40));
    let expected = stdout(&vlgscan(&["search", s(&idx), "a[1,4]a[2,8]ra"]));
    assert!(!expected.is_empty());
    for strategy in ["baseline", "radix", "filter", "textcheck", "auto"] {
        let o = vlgscan(&["search", s(&idx), "a[1,4]a[2,8]ra", "--strategy", strategy, "--block-size", "4", "--verify"]);
        assert_eq!(o.status.code(), Some(0), "{strategy}: {}", stderr(&o));
        assert_eq!(stdout(&o), expected, "{strategy}");
        assert!(stderr(&o).contains("verify: ok"));
    }
}

#[test]
fn no_match_exits_one() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, b"abracadabra");
    let o = vlgscan(&["search", s(&idx), "ab[0,3]zz"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "");
}

#[test]
fn count_and_tuples() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, b"abracadabra");
    let o = vlgscan(&["search", s(&idx), "a[1,4]a[1,4]a", "--count"]);
    assert_eq!(stdout(&o), "3\n");
    let o = vlgscan(&["search", s(&idx), "a[1,4]a[1,4]a", "--tuples"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\t3\t5\n0\t3\t7\n3\t5\t7\n3\t7\t10\n5\t7\t10\n");
    let o = vlgscan(&["search", s(&idx), "a[1,4]a[1,4]a", "--tuples", "--tuple-cap", "2"]);
    assert_eq!(stdout(&o), "0\t3\t5\n0\t3\t7\n");
    assert!(stderr(&o).contains("truncated"));
}

#[test]
fn end_gap_mode() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, b"abracadabra");
    // end-to-start gap of 0..3 between "ab" and "ra" is start-to-start 2..5
    let o = vlgscan(&["search", s(&idx), "ab[0,3]ra", "--gap-mode", "end"]);
    assert_eq!(stdout(&o), "2\n9\n");
}

#[test]
fn parse_errors_report_offsets() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, b"abracadabra");
    let o = vlgscan(&["search", s(&idx), "ab[5,2]ra"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("offset 2"), "{}", stderr(&o));
    let o = vlgscan(&["search", s(&idx), "ab[2,5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_gap_is_flagged_under_verify() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, b"aaaa");
    let o = vlgscan(&["search", s(&idx), "a[0,0]a", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("δ = 0"));
}

#[test]
fn gap_longer_than_text_is_an_error() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, b"abracadabra");
    let o = vlgscan(&["search", s(&idx), "a[1,50]a"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flags_and_bad_inputs() {
    let dir = TempDir::new().unwrap();
    let idx = built(&dir, b"abracadabra");
    assert_eq!(vlgscan(&["search", s(&idx), "ab", "--frobnicate"]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(vlgscan(&["build", s(&missing), "-o", s(&idx)]).status.code(), Some(2));
    assert_eq!(vlgscan(&["search", s(&missing), "ab"]).status.code(), Some(2));
    let bad = dir.path().join("bad.idx");
    std::fs::write(&bad, b"not an index at all").unwrap();
    let o = vlgscan(&["search", s(&bad), "ab"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot load index"));
}

#[test]
fn both_widths_load() {
    let dir = TempDir::new().unwrap();
    let src = dir.path().join("t.txt");
    std::fs::write(&src, b"mississippi").unwrap();
    for w in ["5", "8"] {
        let idx = dir.path().join(format!("t{w}.idx"));
        assert_eq!(vlgscan(&["build", s(&src), "-o", s(&idx), "--width", w]).status.code(), Some(0));
        assert_eq!(stdout(&vlgscan(&["search", s(&idx), "ss[3,3]ss"])), "5\n");
    }
    let idx = dir.path().join("t6.idx");
    assert_eq!(vlgscan(&["build", s(&src), "-o", s(&idx), "--width", "6"]).status.code(), Some(2));
}

#[test]
fn corpus_bench_and_calibrate() {
    let dir = TempDir::new().unwrap();
    let text = dir.path().join("c.txt");
    let o = vlgscan(&["corpus", "-o", s(&text), "--len", "200000", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let idx = dir.path().join("c.idx");
    assert_eq!(vlgscan(&["build", s(&text), "-o", s(&idx)]).status.code(), Some(0));

    let config = dir.path().join("bench.conf");
    std::fs::write(&config, "# small sweep\nk=2,3\nm=3\nbands=S\npatterns=3\nreps=1\n").unwrap();
    let csv = dir.path().join("out.csv");
    let o = vlgscan(&[
        "bench",
        s(&idx),
        "--config",
        s(&config),
        "--strategies",
        "radix,auto",
        "--verify",
        "--out",
        s(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = std::fs::read_to_string(&csv).unwrap();
    let mut lines = report.lines();
    assert!(lines.next().unwrap().starts_with("dataset,strategy,k,m,gap_lo,gap_hi"));
    assert_eq!(lines.clone().count(), 2 * 2 * 3);
    assert!(lines.all(|l| l.ends_with(",true")));
    assert!(stderr(&o).contains("<100,110>"));

    let o = vlgscan(&["bench", s(&idx), "--set", "colour=blue"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown config key"));
    std::fs::write(&config, "k=two\n").unwrap();
    assert_eq!(vlgscan(&["bench", s(&idx), "--config", s(&config)]).status.code(), Some(2));

    let o = vlgscan(&["calibrate", s(&idx), "--patterns", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("sort_cost="));
}
