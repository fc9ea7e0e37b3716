use std::fs;
use std::path::Path;
use std::process::Command;

use infodist::matrix::DistanceMatrix;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn infodist(args: &[&str], cwd: &Path) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_infodist"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &Path, name: &str, body: &str) {
    if let Some(parent) = Path::new(name).parent() {
        fs::create_dir_all(dir.join(parent)).unwrap();
    }
    fs::write(dir.join(name), body).unwrap();
}

const FOUR: &str = "labels\ta\tb\tc\td\n\
a\t0\t1\t2\t2\n\
b\t1\t0\t2\t2\n\
c\t2\t2\t0\t1\n\
d\t2\t2\t1\t0\n";

#[test]
fn ncd_identical_files_under_rle_are_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x", "aaaa");
    write(dir.path(), "y", "aaaa");
    let r = infodist(&["ncd", "--test-compressor", "rle", "x", "y"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = DistanceMatrix::parse_tsv(&r.stdout).unwrap();
    assert_eq!(m.labels(), ["x", "y"]);
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(m.get(i, j), 0.0);
        }
    }
}

#[test]
fn ncd_needs_two_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x", "hello");
    let r = infodist(&["ncd", "x"], dir.path());
    assert_eq!(r.code, 2);
    assert!(r.stdout.is_empty());
    assert_eq!(infodist(&["ncd", "x", "missing"], dir.path()).code, 2);
}

#[test]
fn ncd_duplicate_names_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a/doc", "one");
    write(dir.path(), "b/doc", "two");
    let r = infodist(&["ncd", "a/doc", "b/doc", "--output", "out.tsv"], dir.path());
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("doc"));
    assert!(!dir.path().join("out.tsv").exists());
}

#[test]
fn ncd_directory_and_list_inputs() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [("c/p", "alpha beta"), ("c/q", "alpha gamma"), ("c/r", "delta")] {
        write(dir.path(), name, body);
    }
    write(dir.path(), "list", "c/p\nc/q\n\nc/r\n");
    let a = infodist(&["ncd", "c"], dir.path());
    let b = infodist(&["ncd", "--list", "list"], dir.path());
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with("labels\tp\tq\tr\n"));
}

#[test]
fn ncd_output_feeds_cluster() {
    let dir = tempfile::tempdir().unwrap();
    let words = ["apple", "banana", "cherry", "damson", "elder"];
    for (k, w) in words.iter().enumerate() {
        write(dir.path(), &format!("in/{w}"), &format!("{w} ").repeat(40 + 7 * k));
    }
    let r = infodist(&["ncd", "in", "-o", "m.tsv"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let text = fs::read_to_string(dir.path().join("m.tsv")).unwrap();
    let m = DistanceMatrix::parse_tsv(&text).unwrap();
    assert_eq!(m.to_tsv(), text);
    let c = infodist(&["cluster", "m.tsv", "--budget", "200"], dir.path());
    assert_eq!(c.code, 0, "{}", c.stderr);
    assert!(c.stdout.trim_end().ends_with(';'));
    assert!(c.stderr.starts_with("score\t"));
}

#[test]
fn external_compressor_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x", "one");
    write(dir.path(), "y", "two");
    let r = infodist(&["ncd", "--external-cmd", "false", "x", "y"], dir.path());
    assert_eq!(r.code, 4, "{}", r.stderr);
    let r = infodist(&["ncd", "--compressor", "external", "x", "y"], dir.path());
    assert_eq!(r.code, 2);
}

#[cfg(unix)]
#[test]
fn external_cat_gives_raw_lengths() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x", "abcd");
    write(dir.path(), "y", "abcdefgh");
    // With `cat`, Z is the length: (12 - 4) / 8.
    let r = infodist(&["ncd", "--external-cmd", "cat", "x", "y"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = DistanceMatrix::parse_tsv(&r.stdout).unwrap();
    assert_eq!(m.get(0, 1), 1.0);
    assert_eq!(m.get(0, 0), 1.0);
}

fn toy_corpus(dir: &Path) {
    write(dir, "docs/d1", "a b");
    write(dir, "docs/d2", "a");
    write(dir, "docs/d3", "b c");
}

#[test]
fn index_then_nwd() {
    let dir = tempfile::tempdir().unwrap();
    toy_corpus(dir.path());
    let r = infodist(&["index", "docs", "-o", "idx.tsv"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(
        fs::read_to_string(dir.path().join("idx.tsv")).unwrap(),
        "N\t3\nM\t3\nU\ta\t2\nU\tb\t2\nU\tc\t1\nP\ta\tb\t1\nP\tb\tc\t1\n"
    );
    let r = infodist(&["nwd", "--index", "idx.tsv", "a", "b", "c"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = DistanceMatrix::parse_tsv(&r.stdout).unwrap();
    // f(a) = f(b) = 2, f(a,b) = 1, N = 3: (1 - 0) / (log 3 - 1).
    let expected = 1.0 / (3f64.log2() - 1.0);
    assert!((m.get(0, 1) - expected).abs() < 1e-6);
    assert_eq!(m.get(0, 2), f64::INFINITY);
    let docs = infodist(&["nwd", "--docs", "docs", "a", "b", "c"], dir.path());
    assert_eq!(docs.stdout, r.stdout);
}

#[test]
fn nwd_undefined_pair_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    toy_corpus(dir.path());
    let r = infodist(&["nwd", "--docs", "docs", "a", "zebra"], dir.path());
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("NWD(zebra, zebra) is undefined"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn nwd_n_factor_keeps_tags() {
    let dir = tempfile::tempdir().unwrap();
    toy_corpus(dir.path());
    let base = infodist(&["nwd", "--docs", "docs", "a", "b", "c"], dir.path());
    let scaled = infodist(&["nwd", "--docs", "docs", "--n-factor", "2", "a", "b", "c"], dir.path());
    let base = DistanceMatrix::parse_tsv(&base.stdout).unwrap();
    let scaled = DistanceMatrix::parse_tsv(&scaled.stdout).unwrap();
    let mut changed = false;
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(base.get(i, j).is_finite(), scaled.get(i, j).is_finite());
            changed |= base.get(i, j) != scaled.get(i, j);
        }
    }
    assert!(changed);
}

#[test]
fn nwd_rejects_bad_index_and_bad_sources() {
    let dir = tempfile::tempdir().unwrap();
    toy_corpus(dir.path());
    write(dir.path(), "bad.tsv", "N\t2\nM\t3\nU\ta\t2\nU\tb\t1\n");
    let r = infodist(&["nwd", "--index", "bad.tsv", "a", "b"], dir.path());
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    assert_eq!(infodist(&["nwd", "a", "b"], dir.path()).code, 2);
    assert_eq!(infodist(&["nwd", "--docs", "docs", "a"], dir.path()).code, 2);
    assert_eq!(
        infodist(&["nwd", "--docs", "docs", "--index", "bad.tsv", "a", "b"], dir.path()).code,
        2
    );
}

#[test]
fn nwd_live_endpoint_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = listener.local_addr().unwrap().port();
    drop(listener);
    let url = format!("http://127.0.0.1:{port}/s?q={{query}}");
    let r = infodist(
        &["nwd", "--live-url", &url, "--normalizer", "1e10", "--timeout", "2", "a", "b"],
        dir.path(),
    );
    assert_eq!(r.code, 4, "{}", r.stderr);
}

#[test]
fn cluster_four_leaves() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.tsv", FOUR);
    let r = infodist(&["cluster", "m.tsv"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "(a,b,(c,d));\n");
    assert_eq!(r.stderr, "score\t1.000000\n");
    let again = infodist(&["cluster", "m.tsv"], dir.path());
    assert_eq!(again.stdout, r.stdout);

    let r = infodist(&["cluster", "m.tsv", "--score-out", "s.txt", "--format", "dot"], dir.path());
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("graph dendrogram {"));
    assert!(r.stderr.is_empty());
    assert_eq!(fs::read_to_string(dir.path().join("s.txt")).unwrap(), "1.000000\n");
    assert_eq!(infodist(&["cluster", "m.tsv", "--format", "tsv"], dir.path()).code, 2);
}

#[test]
fn cluster_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_infodist"))
        .args(["cluster", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(FOUR.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "(a,b,(c,d));\n");
}

#[test]
fn cluster_rejects_small_and_asymmetric() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "three.tsv", "labels\ta\tb\tc\na\t0\t1\t1\nb\t1\t0\t1\nc\t1\t1\t0\n");
    let r = infodist(&["cluster", "three.tsv"], dir.path());
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("at least 4"), "{}", r.stderr);
    write(dir.path(), "asym.tsv", &FOUR.replacen("a\t0\t1", "a\t0\t1.5", 1));
    assert_eq!(infodist(&["cluster", "asym.tsv"], dir.path()).code, 3);
    write(dir.path(), "inf.tsv", &FOUR.replace("2", "inf"));
    assert_eq!(infodist(&["cluster", "inf.tsv"], dir.path()).code, 3);
}

#[test]
fn config_file_defaults_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let labels: Vec<String> = (0..9).map(|i| format!("o{i}")).collect();
    let m = DistanceMatrix::from_fn(labels, |i, j| {
        if i == j {
            0.0
        } else {
            ((i * 7 + j * 13 + i * j) % 17) as f64 / 17.0 + 0.1
        }
    })
    .unwrap();
    write(dir.path(), "m.tsv", &m.to_tsv());
    write(dir.path(), "cfg.toml", "seed = 5\nbudget = 50\nrestarts = 1\n");
    let from_config = infodist(&["cluster", "m.tsv", "--config", "cfg.toml"], dir.path());
    let from_flags = infodist(
        &["cluster", "m.tsv", "--seed", "5", "--budget", "50", "--restarts", "1"],
        dir.path(),
    );
    assert_eq!(from_config.code, 0, "{}", from_config.stderr);
    assert_eq!(from_config.stdout, from_flags.stdout);
    assert_eq!(from_config.stderr, from_flags.stderr);

    write(dir.path(), "fmt.toml", "format = \"dot\"\n");
    let dot = infodist(&["cluster", "m.tsv", "--config", "fmt.toml"], dir.path());
    assert!(dot.stdout.starts_with("graph"));
    let newick = infodist(&["cluster", "m.tsv", "--config", "fmt.toml", "--format", "newick"], dir.path());
    assert!(newick.stdout.starts_with('('));

    write(dir.path(), "bad.toml", "sed = 5\n");
    assert_eq!(infodist(&["cluster", "m.tsv", "--config", "bad.toml"], dir.path()).code, 2);
}

#[test]
fn multiset_pair_bound_equals_e_max() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "x", &"the quick brown fox ".repeat(30));
    write(dir.path(), "y", &"jumps over the lazy dog ".repeat(25));
    let r = infodist(&["multiset", "x", "y", "--format", "tsv"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let row: Vec<&str> = r.stdout.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[0], "2");
    assert_eq!(row[2], row[3]);
    assert_eq!(row[5], "true");
}

#[test]
fn multiset_rle_triple_report() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [("p", "aaaa"), ("q", "bbbb"), ("r", "cccc")] {
        write(dir.path(), name, body);
    }
    let r = infodist(&["multiset", "--test-compressor", "rle", "--slack", "0", "p", "q", "r"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("e_min_est       4\n"), "{}", r.stdout);
    assert!(r.stdout.contains("e_max_est       4\n"));
    assert!(r.stdout.contains("sandwich_ok     true\n"));
    assert_eq!(infodist(&["multiset", "p"], dir.path()).code, 2);
    assert_eq!(infodist(&["multiset", "--slack", "-1", "p", "q"], dir.path()).code, 2);
}

#[test]
fn check_compressor_builtin_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    for k in 0..5 {
        let body: String = (0..600).map(|i| char::from(b'a' + ((i * (k + 3) + i / 7) % 26) as u8)).collect();
        write(dir.path(), &format!("s/{k}"), &body);
    }
    let r = infodist(&["check-compressor", "s", "--format", "tsv"], dir.path());
    assert_eq!(r.code, 0, "{}", r.stderr);
    let row: Vec<&str> = r.stdout.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row[0], "10");
    assert_eq!(row[2], "0");
    let text = infodist(&["check-compressor", "s"], dir.path());
    assert!(text.stdout.contains("monotonicity_violations  0"));
}

#[test]
fn help_and_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(infodist(&["--help"], dir.path()).code, 0);
    assert_eq!(infodist(&["cluster", "--bogus"], dir.path()).code, 2);
    assert_eq!(infodist(&[], dir.path()).code, 2);
}
