//! End-to-end runs of the `gbwt` binary.

use gbwt_cli::manifest::{digest, parse};

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn gbwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbwt"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().unwrap()
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn build(dir: &Path, graph: &Path, extra: &[&str]) -> PathBuf {
    let index = dir.join("index.gbwt");
    let mut args = vec!["build", s(graph), "--output", s(&index)];
    args.extend_from_slice(extra);
    let out = gbwt(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    index
}

#[test]
fn build_writes_manifest_with_digests() {
    let dir = tempfile::tempdir().unwrap();
    let index = build(dir.path(), &data("corpus_a.txt"), &[]);
    let manifest = std::fs::read_to_string(dir.path().join("index.gbwt.manifest")).unwrap();
    let entries = parse(&manifest);
    let get = |k: &str| {
        entries
            .iter()
            .find(|(key, _)| key == k)
            .map(|(_, v)| v.clone())
            .unwrap()
    };
    assert_eq!(get("command"), "build");
    assert_eq!(get("sequences"), "3");
    assert_eq!(
        get("input.graph.sha256"),
        digest(&std::fs::read(data("corpus_a.txt")).unwrap())
    );
    assert_eq!(
        get("output.index.sha256"),
        digest(&std::fs::read(&index).unwrap())
    );
    assert!(entries.iter().any(|(k, _)| k == "wall_time_s"));
    assert!(entries.iter().any(|(k, _)| k == "peak_memory_kib"));
}

#[test]
fn build_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    for threads in ["1", "2"] {
        let index = build(
            dir.path(),
            &data("corpus_a.txt"),
            &["--threads", threads, "--batch-size", "4"],
        );
        assert_eq!(
            std::fs::read(index).unwrap(),
            std::fs::read(data("corpus_a.gbwt")).unwrap()
        );
    }
}

#[test]
fn bidirectional_build() {
    let dir = tempfile::tempdir().unwrap();
    let index = build(dir.path(), &data("corpus_a.txt"), &["--bidirectional"]);
    let out = gbwt(&["stat", s(&index)]);
    assert!(stdout(&out).contains("sequences\t6\n"));
    assert!(stdout(&out).contains("bidirectional\ttrue\n"));
    assert_eq!(
        stdout(&gbwt(&["query", "extract", s(&index), "3"])),
        "7- 5- 2- 1-\n"
    );
    assert_eq!(
        stdout(&gbwt(&["query", "find", s(&index), "5-", "2-"])),
        "1\n"
    );
}

#[test]
fn queries_on_corpus_a() {
    let index = data("corpus_a.gbwt");
    let index = s(&index);
    assert_eq!(stdout(&gbwt(&["query", "locate", index, "2", "4"])), "0\n");
    assert_eq!(stdout(&gbwt(&["query", "locate", index, "7"])), "0\t1\t2\n");
    assert_eq!(stdout(&gbwt(&["query", "locate", index, "4 5"])), "2\n");
    assert_eq!(
        stdout(&gbwt(&["query", "extract", index, "1"])),
        "1 2 5 7\n"
    );
    assert_eq!(stdout(&gbwt(&["query", "find", index, "1", "2"])), "2\n");
    assert_eq!(stdout(&gbwt(&["query", "find", index, "99"])), "0\n");
    assert_eq!(stdout(&gbwt(&["query", "locate", index, "99"])), "\n");
    assert_eq!(code(&gbwt(&["query", "find", index, "x"])), 1);
    assert_eq!(code(&gbwt(&["query", "extract", index, "3"])), 1);
}

#[test]
fn query_manifest_goes_to_stderr_or_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = gbwt(&["query", "find", s(&data("corpus_a.gbwt")), "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("command\tquery\n"));
    let manifest = dir.path().join("m.txt");
    let out = gbwt(&[
        "--manifest",
        s(&manifest),
        "query",
        "find",
        s(&data("corpus_a.gbwt")),
        "1",
    ]);
    assert!(out.stderr.is_empty());
    assert!(std::fs::read_to_string(manifest)
        .unwrap()
        .contains("query\tfind 1\n"));
}

#[test]
fn parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("gap.txt");
    std::fs::write(
        &graph,
        "N 1\nN 2\nN 3\nE 1 2\nE 2 3\nP ok 1+ 2+ 3+\nP gap 1+ 3+\n",
    )
    .unwrap();
    let out = gbwt(&["build", s(&graph), "-o", s(&dir.path().join("x.gbwt"))]);
    assert_eq!(code(&out), 2);
    let message = String::from_utf8_lossy(&out.stderr);
    assert!(
        message.contains("line 7: path gap step 0: no edge from 1 to 3"),
        "{}",
        message
    );

    let garbage = dir.path().join("garbage.gbwt");
    std::fs::write(&garbage, b"not an index").unwrap();
    assert_eq!(code(&gbwt(&["stat", s(&garbage)])), 2);
    assert_eq!(
        code(&gbwt(&["stat", s(&dir.path().join("missing.gbwt"))])),
        1
    );
    assert_eq!(code(&gbwt(&["build"])), 1);
}

#[test]
fn empty_collection() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("empty.txt");
    std::fs::write(&graph, "# no paths\nN 1\n").unwrap();
    let index = build(dir.path(), &graph, &[]);
    assert!(stdout(&gbwt(&["stat", s(&index)])).contains("sequences\t0\n"));
    assert_eq!(stdout(&gbwt(&["query", "find", s(&index), "1"])), "0\n");
    let out = gbwt(&["verify", s(&index), s(&graph)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn merge_shifts_ids() {
    let dir = tempfile::tempdir().unwrap();
    let left = dir.path().join("left.txt");
    let right = dir.path().join("right.txt");
    let joint = dir.path().join("joint.txt");
    let left_text = "N 1\nN 2\nN 3\nE 1 2\nE 2 3\nE 1 3\nP a 1+ 2+ 3+\nP b 1+ 3+\n";
    let right_text = "N 11\nN 12\nE 11 12\nP c 11+ 12+\nP d 12+\n";
    std::fs::write(&left, left_text).unwrap();
    std::fs::write(&right, right_text).unwrap();
    std::fs::write(&joint, format!("{}{}", left_text, right_text)).unwrap();
    let mut files = Vec::new();
    for (name, graph) in [("l", &left), ("r", &right), ("j", &joint)] {
        let sub = dir.path().join(name);
        std::fs::create_dir(&sub).unwrap();
        files.push(build(&sub, graph, &["--sample-rate", "2"]));
    }
    let merged = dir.path().join("merged.gbwt");
    let out = gbwt(&["merge", "-o", s(&merged), s(&files[0]), s(&files[1])]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read(&merged).unwrap(),
        std::fs::read(&files[2]).unwrap()
    );
    assert_eq!(
        stdout(&gbwt(&["query", "locate", s(&merged), "12"])),
        "2\t3\n"
    );
    let manifest = std::fs::read_to_string(dir.path().join("merged.gbwt.manifest")).unwrap();
    assert!(manifest.contains("shift.index0\t0\n") && manifest.contains("shift.index1\t2\n"));

    let out = gbwt(&["merge", "-o", s(&merged), s(&files[0]), s(&files[2])]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("overlap"));
}

#[test]
fn merge_of_one_file_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let merged = dir.path().join("m.gbwt");
    assert_eq!(
        code(&gbwt(&[
            "merge",
            "-o",
            s(&merged),
            s(&data("corpus_a.gbwt"))
        ])),
        0
    );
    assert_eq!(
        std::fs::read(merged).unwrap(),
        std::fs::read(data("corpus_a.gbwt")).unwrap()
    );
}

#[test]
fn verify_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let out = gbwt(&[
        "verify",
        s(&data("corpus_a.gbwt")),
        s(&data("corpus_a.txt")),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out)
            .lines()
            .filter(|l| l.contains("\tPASS"))
            .count(),
        6
    );

    let original = std::fs::read(data("corpus_a.gbwt")).unwrap();
    let corrupted = dir.path().join("bad.gbwt");
    for position in [4, 60, 120, original.len() - 1] {
        let mut bytes = original.clone();
        bytes[position] ^= 0x5a;
        std::fs::write(&corrupted, &bytes).unwrap();
        let out = gbwt(&["verify", s(&corrupted), s(&data("corpus_a.txt"))]);
        assert_eq!(code(&out), 5, "byte {}", position);
        assert!(stdout(&out).contains("\tFAIL"));
    }
}

#[test]
fn unfold_pruned_corpus_a() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("unfolded");
    let out = gbwt(&[
        "unfold",
        "--graph",
        s(&data("corpus_a.txt")),
        "--pruned",
        s(&data("pruned_corpus_a.txt")),
        "--index",
        s(&data("corpus_a.gbwt")),
        "-o",
        s(&prefix),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("maximal_paths\t3\n"));
    assert!(text.contains("border=2,3,7\n"));
    let paths: Vec<&str> = text.lines().filter(|l| l.starts_with("path\t")).collect();
    assert_eq!(
        paths,
        vec![
            "path\t0\t2 4 | 6 7",
            "path\t0\t2 | 5 7",
            "path\t0\t3 4 | 5 7"
        ]
    );

    let mapping = std::fs::read_to_string(dir.path().join("unfolded.mapping")).unwrap();
    assert_eq!(mapping, "8\t4\n9\t6\n10\t5\n11\t4\n");
    let graph = gbwt_cli::graph_file::GraphFile::parse(
        &std::fs::read_to_string(dir.path().join("unfolded.graph")).unwrap(),
    )
    .unwrap();
    assert!(graph.graph.is_orientation_closed());
    let manifest = std::fs::read_to_string(dir.path().join("unfolded.manifest")).unwrap();
    assert!(manifest.contains("components\t1\n") && manifest.contains("duplicates\t4\n"));

    let restored = gbwt(&[
        "restore",
        s(&dir.path().join("unfolded.mapping")),
        "2",
        "8",
        "9",
        "7",
    ]);
    assert_eq!(stdout(&restored), "2 4 6 7\n");
}

#[test]
fn unfold_without_pruning() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("same");
    let out = gbwt(&[
        "unfold",
        "--graph",
        s(&data("corpus_a.txt")),
        "--pruned",
        s(&data("corpus_a.txt")),
        "--index",
        s(&data("corpus_a.gbwt")),
        "-o",
        s(&prefix),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read_to_string(dir.path().join("same.mapping")).unwrap(),
        ""
    );
    let original = gbwt_cli::graph_file::GraphFile::parse(
        &std::fs::read_to_string(data("corpus_a.txt")).unwrap(),
    )
    .unwrap();
    let unfolded = gbwt_cli::graph_file::GraphFile::parse(
        &std::fs::read_to_string(dir.path().join("same.graph")).unwrap(),
    )
    .unwrap();
    assert_eq!(unfolded.graph, original.graph);
}

#[test]
fn unfold_rejects_inconsistent_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let pruned = dir.path().join("pruned.txt");
    std::fs::write(&pruned, "N 1\nN 2\nN 8\n").unwrap();
    let out = gbwt(&[
        "unfold",
        "--graph",
        s(&data("corpus_a.txt")),
        "--pruned",
        s(&pruned),
        "--index",
        s(&data("corpus_a.gbwt")),
        "-o",
        s(&dir.path().join("u")),
    ]);
    assert_eq!(code(&out), 4);
}

#[test]
fn bench_is_deterministic_in_inputs() {
    let out = gbwt(&["bench", s(&data("bench_small.toml"))]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("characters\t20050\n"));
    assert!(text.contains("locate\tlength=2\t") && text.contains("locate\tlength=50\t"));
    assert!(text.contains("extract\tns_per_char="));
    let again = stdout(&gbwt(&["bench", s(&data("bench_small.toml"))]));
    let fixed = |t: &str| {
        t.lines()
            .find(|l| l.starts_with("body_bits_per_char"))
            .map(str::to_string)
    };
    assert_eq!(fixed(&text), fixed(&again));

    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("bad.toml");
    std::fs::write(&scenario, "haplotypes = 1\n").unwrap();
    assert_eq!(code(&gbwt(&["bench", s(&scenario)])), 2);
}
