use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cotangent"))
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_job(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

const NODE: &str =
    "variables = [\"x\", \"y\"]\nideal = [\"x*y\"]\npoint = [\"0\", \"0\"]\nmax_index = 4\ntasks = [\"all\"]\n";

#[test]
fn compute_matches_shipped_golden() {
    let job = corpus_dir().join("03_node.toml");
    let o = run(&["compute", job.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let golden = fs::read_to_string(corpus_dir().join("03_node.expected.json")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn text_output_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "node.toml", NODE);
    let o = run(&["compute", "--text", "--task", "classify", "--max-index", "3", job.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("kind: lci"), "{out}");
    assert!(!out.contains("bracket:"));
    assert!(out.contains("max_index: 3"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "node.toml", NODE);
    let a = run(&["compute", "--seed", "11", job.to_str().unwrap()]);
    let b = run(&["compute", "--seed", "11", job.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"seed\": 11"));
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(dir.path(), "node.toml", NODE);
    assert!(!stdout(&run(&["compute", job.to_str().unwrap()])).contains("\"timing\""));
    assert!(stdout(&run(&["compute", "--timing", job.to_str().unwrap()])).contains("\"timing\""));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let off = write_job(dir.path(), "off.toml", &NODE.replace("[\"0\", \"0\"]", "[\"1\", \"1\"]"));
    let o = run(&["compute", off.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("point not on zero locus"));

    let pow = write_job(dir.path(), "pow.toml", &NODE.replace("x*y", "x**2"));
    let o = run(&["compute", pow.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("syntax error"));

    let job = write_job(dir.path(), "node.toml", NODE);
    let o = run(&["compute", "--task", "frobnicate", job.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown task 'frobnicate'"));

    let o = run(&["compute", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn resource_cap_exits_three_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let body = "variables = [\"x\", \"y\"]\nideal = [\"x^2\", \"x*y\", \"y^2\"]\npoint = [\"0\", \"0\"]\nmax_index = 4\ntasks = [\"all\"]\n[caps]\ngenerators = 4\n";
    let job = write_job(dir.path(), "capped.toml", body);
    let o = run(&["compute", job.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("\"status\": \"resource_limit\""), "{out}");
    assert!(out.contains("resource limit exceeded"));
}

#[test]
fn explain_prints_generators_and_matrices() {
    let job = corpus_dir().join("06_fat_point.toml");
    let o = run(&["explain", job.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("e1 : 1 : (x^2)"), "{out}");
    assert!(out.contains("d1 : V1 -> V0"));
    assert!(out.contains("T3 <- degree 2"));
}

#[test]
fn shipped_corpus_passes() {
    let o = run(&["corpus", corpus_dir().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("0 mismatched"));
    assert!(!out.contains("MISMATCH"));
}

#[test]
fn empty_corpus_reports_zero_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0 jobs");
}

#[test]
fn corrupted_golden_fails_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["03_node", "06_fat_point"] {
        for ext in ["toml", "expected.json"] {
            fs::copy(corpus_dir().join(format!("{name}.{ext}")), dir.path().join(format!("{name}.{ext}"))).unwrap();
        }
    }
    let golden = dir.path().join("06_fat_point.expected.json");
    let text = fs::read_to_string(&golden).unwrap().replacen("\"general\"", "\"lci\"", 1);
    fs::write(&golden, text).unwrap();
    let o = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("pass      03_node"));
    assert!(out.contains("MISMATCH  06_fat_point"));
    assert!(out.contains("-    \"kind\": \"lci\""), "{out}");
    assert!(out.contains("+    \"kind\": \"general\""));
}

#[test]
fn missing_golden_writes_candidate() {
    let dir = tempfile::tempdir().unwrap();
    write_job(dir.path(), "node.toml", NODE);
    let o = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 missing golden"));
    let candidate = fs::read_to_string(dir.path().join("node.candidate.json")).unwrap();
    assert!(candidate.contains("\"kind\": \"lci\""));
}

#[test]
fn unreadable_job_in_corpus_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    write_job(dir.path(), "bad.toml", "variables = [");
    let o = run(&["corpus", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("ERROR     bad"));
}
