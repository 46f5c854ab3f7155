//! End-to-end CLI behaviour: exit codes (0 success, 1 usage, 2 data,
//! 3 I/O), diagnostics on stderr, data on stdout and in files.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

static COUNTER: AtomicUsize = AtomicUsize::new(0);

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "jdd-cli-{}-{}-{}",
        std::process::id(),
        tag,
        COUNTER.fetch_add(1, Ordering::SeqCst)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_jdd-kb"))
        .args(args)
        .output()
        .expect("spawn jdd-kb");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn synth_into(dir: &Path, seed: u64, size: usize) {
    let out = run(&[
        "synth",
        "--seed",
        &seed.to_string(),
        "--size",
        &size.to_string(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
}

fn ingest_and_build(dir: &Path) -> (PathBuf, PathBuf) {
    let records = dir.join("records.jsonl");
    let out = run(&[
        "ingest",
        "--corpus",
        dir.join("corpus.jsonl").to_str().unwrap(),
        "--parses",
        dir.join("parses").to_str().unwrap(),
        "--out",
        records.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let kb = dir.join("kb.json");
    let out = run(&[
        "build",
        "--records",
        records.to_str().unwrap(),
        "--out",
        kb.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("partitions="), "{}", out.stdout);
    (records, kb)
}

#[test]
fn synth_ingest_build_query_round_trip() {
    let dir = temp_dir("roundtrip");
    synth_into(&dir, 31, 40);
    let (records, kb) = ingest_and_build(&dir);

    // A full-coordinate get_cases prints ids to stdout.
    let q = dir.join("q");
    let out = run(&[
        "query",
        "--kb",
        kb.to_str().unwrap(),
        "--pipeline",
        "get_cases",
        "--partition",
        "故意伤害罪",
        "--out",
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mut lines = out.stdout.lines();
    let echo = lines.next().expect("echo line");
    assert!(echo.contains("get_cases"));
    let ids: Vec<&str> = lines.collect();
    assert!(!ids.is_empty());
    assert!(ids.iter().all(|id| id.starts_with("case-")));
    let file_ids = std::fs::read_to_string(q.join("cases.txt")).unwrap();
    assert_eq!(file_ids.lines().count(), ids.len());

    // question1 via a spec file referencing the records.
    let spec = dir.join("query.conf");
    std::fs::write(
        &spec,
        format!(
            "version = 1\n[query]\npipeline = question1\npartition = 故意伤害罪\nsplitter = forgiveness\nrecords = {}\n",
            records.display()
        ),
    )
    .unwrap();
    let q1 = dir.join("q1");
    let out = run(&[
        "query",
        "--kb",
        kb.to_str().unwrap(),
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        q1.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(q1.join("q1_densities.json").exists());
    assert!(q1.join("q1_with_forgiveness_pooled.csv").exists());

    // Forward-path resolution.
    let out = run(&[
        "query",
        "--kb",
        kb.to_str().unwrap(),
        "--pipeline",
        "resolve",
        "--partition",
        "故意伤害罪",
        "--path",
        "JDD.prosecutorArgument.sentence.actions.殴打",
        "--out",
        dir.join("resolve").to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("axis_coordinate"), "{}", out.stdout);
}

#[test]
fn malformed_corpus_line_is_a_warning_not_a_failure() {
    let dir = temp_dir("malformed");
    synth_into(&dir, 5, 3);
    let corpus = dir.join("corpus.jsonl");
    let mut text = std::fs::read_to_string(&corpus).unwrap();
    text.push_str("this is not json\n");
    std::fs::write(&corpus, text).unwrap();
    let records = dir.join("records.jsonl");
    let out = run(&[
        "ingest",
        "--corpus",
        corpus.to_str().unwrap(),
        "--parses",
        dir.join("parses").to_str().unwrap(),
        "--out",
        records.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("malformed record"), "{}", out.stderr);
    let body = std::fs::read_to_string(&records).unwrap();
    assert_eq!(body.lines().count(), 4, "header plus three records");
}

#[test]
fn missing_parse_directory_is_an_io_error() {
    let dir = temp_dir("noparses");
    synth_into(&dir, 5, 2);
    let out = run(&[
        "ingest",
        "--corpus",
        dir.join("corpus.jsonl").to_str().unwrap(),
        "--parses",
        dir.join("does-not-exist").to_str().unwrap(),
        "--out",
        dir.join("records.jsonl").to_str().unwrap(),
    ]);
    assert_eq!(out.code, 3, "{}", out.stderr);
}

#[test]
fn empty_records_file_builds_an_empty_kb_with_a_warning() {
    let dir = temp_dir("empty");
    let records = dir.join("records.jsonl");
    std::fs::write(&records, "{\"schema\":\"jdd-corpus/1\"}\n").unwrap();
    let kb = dir.join("kb.json");
    let out = run(&[
        "build",
        "--records",
        records.to_str().unwrap(),
        "--out",
        kb.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stderr.contains("no records"), "{}", out.stderr);
    assert!(out.stdout.starts_with("partitions=0"), "{}", out.stdout);
}

#[test]
fn unknown_partition_is_a_data_error() {
    let dir = temp_dir("badpartition");
    synth_into(&dir, 7, 5);
    let (_records, kb) = ingest_and_build(&dir);
    let out = run(&[
        "query",
        "--kb",
        kb.to_str().unwrap(),
        "--pipeline",
        "question2b",
        "--partition",
        "查无此罪",
        "--out",
        dir.join("q").to_str().unwrap(),
    ]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    assert!(out.stderr.contains("查无此罪"), "{}", out.stderr);
}

#[test]
fn bad_query_spec_is_a_usage_error_naming_the_field() {
    let dir = temp_dir("badspec");
    synth_into(&dir, 7, 5);
    let (_records, kb) = ingest_and_build(&dir);
    let out = run(&[
        "query",
        "--kb",
        kb.to_str().unwrap(),
        "--pipeline",
        "nonsense",
        "--partition",
        "故意伤害罪",
        "--out",
        dir.join("q").to_str().unwrap(),
    ]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    assert!(out.stderr.contains("nonsense"), "{}", out.stderr);
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = run(&["query", "--no-such-flag"]);
    assert_eq!(out.code, 1);
}

#[test]
fn truncated_snapshot_is_a_data_error() {
    let dir = temp_dir("truncated");
    synth_into(&dir, 7, 5);
    let (_records, kb) = ingest_and_build(&dir);
    let bytes = std::fs::read(&kb).unwrap();
    std::fs::write(&kb, &bytes[..bytes.len() / 3]).unwrap();
    let out = run(&[
        "query",
        "--kb",
        kb.to_str().unwrap(),
        "--pipeline",
        "question2b",
        "--partition",
        "故意伤害罪",
        "--out",
        dir.join("q").to_str().unwrap(),
    ]);
    assert_eq!(out.code, 2, "{}", out.stderr);
}

#[test]
fn marginals_export_counts_per_coordinate() {
    let dir = temp_dir("marginals");
    synth_into(&dir, 13, 30);
    let (_records, kb) = ingest_and_build(&dir);
    let q = dir.join("m");
    let out = run(&[
        "query",
        "--kb",
        kb.to_str().unwrap(),
        "--pipeline",
        "marginals",
        "--partition",
        "故意伤害罪",
        "--axis",
        "punishment",
        "--out",
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let csv = std::fs::read_to_string(q.join("marginal.csv")).unwrap();
    assert!(csv.starts_with("punishment,value\n"));
    assert!(csv.lines().count() > 1);
}
