use std::fs;
use std::process::{Command, Output};

fn entq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entq")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(record: &'a str, key: &str) -> &'a str {
    record
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {record}"))
}

#[test]
fn compute_bell() {
    let out = entq(&["compute", "--state", "bell", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("scope=max_over_all_2_block_partitions\n"));
    let r_g: f64 = field(&text, "r_g").parse().unwrap();
    assert!((r_g - 1.0).abs() < 1e-9);
    assert_eq!(field(&text, "kind"), "exact_bipartite_pure");
}

#[test]
fn compute_ghz3_is_bounds_only() {
    let out = entq(&["compute", "--state", "ghz3", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lambda: f64 = field(&text, "lambda_sq").parse().unwrap();
    assert!((lambda - 0.5).abs() < 1e-9);
    assert_eq!(field(&text, "kind"), "bounds_only");
    assert_eq!(field(&text, "r_g"), "none");
}

#[test]
fn compute_rejects_unnormalized_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"dims":[2,2],"amps_re":[1,1,0,0],"amps_im":[0,0,0,0]}"#).unwrap();
    let out = entq(&["compute", "--state", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("normaliz"));
}

#[test]
fn compute_reads_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psi.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    fs::write(&path, format!(r#"{{"dims":[2,2],"amps_re":[{h},0,0,{h}],"amps_im":[0,0,0,0]}}"#)).unwrap();
    let out = entq(&["compute", "--state", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let e_r: f64 = field(&stdout(&out), "e_r").parse().unwrap();
    assert!((e_r - 1.0).abs() < 1e-9);
}

#[test]
fn figure2_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let out = entq(&["figure2", "--steps", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,e_r,lr_g,lr_lower");
    assert_eq!(lines[1], "0,0,0,0");
    assert_eq!(lines.len(), 4);
    assert!(!csv.contains('\r'));
    // Deterministic bytes.
    let again = stdout(&entq(&["figure2", "--steps", "3"]));
    assert_eq!(csv, again);
}

#[test]
fn figure2_unwritable_path_fails() {
    let out = entq(&["figure2", "--out", "/nonexistent-dir/fig.csv"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(entq(&["figure2", "--steps", "1"]).status.code() == Some(1));
}

#[test]
fn table1_summary() {
    let out = entq(&["table1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 5);
    assert!(String::from_utf8_lossy(&out.stderr).contains("within_tolerance=true"));
}

#[test]
fn table1_single_restart_is_caught() {
    // The dominant basis state of S(3,2) is a stationary point at 1/3, below
    // the true overlap 4/9; the closed-form cross-check flags it.
    let out = entq(&["table1", "--restarts", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("closed form"));
}

#[test]
fn propcheck_runs() {
    let out = entq(&["propcheck", "--trials", "20", "--dims", "2x2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("result=pass\n"));

    let out = entq(&["propcheck", "--trials", "1", "--state", "product-2x2", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines().filter(|l| l.contains("worst_margin")) {
        assert!(line.contains("worst_margin=0 "), "{line}");
    }
}

#[test]
fn dicke_table() {
    let out = entq(&["dicke", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(entq(&["nonsense"]).status.code(), Some(1));
    assert_eq!(entq(&["compute"]).status.code(), Some(1));
    assert_eq!(entq(&["compute", "--state", "bell", "--k", "5"]).status.code(), Some(1));
    assert_eq!(entq(&["propcheck", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(entq(&["propcheck", "--dims", "2x1"]).status.code(), Some(1));
}
