use std::fs;
use std::process::Command;

fn catlab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_catlab"))
}

const SMALL: &str = r#"{"name":"tiny","description":"two-word sector","experiment":
    {"kind":"sector-matrix","q":2,"p":2,"n":2,"sector":{"first":0,"last":0},"grid":256}}"#;

#[test]
fn list_experiments_names_every_builtin() {
    let out = catlab().arg("list-experiments").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for b in catlab::harness::builtin_experiments() {
        assert!(text.contains(b.name), "{}", b.name);
    }
    assert!(!text.contains("INVALID"));
}

#[test]
fn validate_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, SMALL).unwrap();
    let ok = catlab().arg("validate").arg(&good).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));

    let bad = catlab()
        .args(["validate"])
        .arg(&good)
        .args(["--set", "experiment.p=9"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn run_writes_csv_summary_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.json");
    fs::write(&cfg, SMALL).unwrap();
    let out = dir.path().join("out");
    let status = catlab()
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--workers", "2"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    for f in ["tiny_matrix.csv", "tiny_diagonal.csv", "tiny_summary.json", "tiny.gp"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let csv = fs::read_to_string(out.join("tiny_diagonal.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next().unwrap(), "word,D,mu");
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
}

#[test]
fn rejected_config_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, SMALL.replace("\"grid\":256", "\"grid\":100")).unwrap();
    let out = dir.path().join("out");
    let res = catlab().arg("run").arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(res.status.code(), Some(64));
    assert!(!out.exists() || fs::read_dir(&out).unwrap().next().is_none());
}

#[test]
fn over_budget_points_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let res = catlab()
        // sector words: 4 at n = 3, 16 at n = 4, 64 at n = 5
        .args(["run", "fig05-06-mass", "--set", "budget.max_words=16", "--budget-mb", "512", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(2), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(String::from_utf8_lossy(&res.stderr).contains("skipped"));
}
