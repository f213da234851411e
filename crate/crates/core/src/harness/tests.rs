use super::*;
use crate::io::fmt_sig;

fn cfg(json: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(json).unwrap()
}

#[test]
fn classical_single_row() {
    let c = cfg(r#"{"name":"c","experiment":{"kind":"classical","p":2,"n":1}}"#);
    let rs = run(&c, &RunOptions::default()).unwrap();
    let t = rs.series("entropy").unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t.rows()[0][2], fmt_sig(4f64.ln()));
    assert_eq!(t.rows()[0][3], "");
    assert_eq!(rs.exit_code(), 0);
    assert!(t.render().starts_with("# config: {\"name\":\"c\""));
}

#[test]
fn int_set_forms() {
    for (json, expect) in [
        ("3", vec![3]),
        ("[2,5]", vec![2, 5]),
        (r#"{"from":2,"to":4}"#, vec![2, 3, 4]),
    ] {
        let s: IntSet = serde_json::from_str(json).unwrap();
        assert_eq!(s.values(), expect);
    }
    let k: KappaRule = serde_json::from_str(r#"{"factor":0.125}"#).unwrap();
    assert_eq!(k.kappa(4), vec![2.0]);
}

#[test]
fn invalid_configs_rejected() {
    for bad in [
        r#"{"name":"x","experiment":{"kind":"classical","p":2,"n":0}}"#,
        r#"{"name":"x","experiment":{"kind":"classical","p":2,"n":1,"grid":1000}}"#,
        r#"{"name":"x","experiment":{"kind":"classical","p":2,"n":1,"extra":1}}"#,
        r#"{"name":"x y","experiment":{"kind":"classical","p":2,"n":1}}"#,
        r#"{"name":"x","experiment":{"kind":"single-cat-entropy","q":[],"p":2,"n":1}}"#,
        r#"{"name":"x","experiment":{"kind":"single-cat-entropy","q":2,"p":3,"n":1}}"#,
        r#"{"name":"x","experiment":{"kind":"sector-matrix","q":2,"p":2,"n":3,"sector":{"first":4,"last":0}}}"#,
        r#"{"name":"x","experiment":{"kind":"kappa-sweep","q":4,"r":5,"i":2,"p":2,"n":5,"sector":{"first":0,"last":0},"kappa":[0]}}"#,
        r#"{"name":"x","experiment":{"kind":"von-neumann","q":4,"r":1,"i":2,"kappa":[1],"n_max":3,"snapshots":[4]}}"#,
        r#"{"name":"x","experiment":{"kind":"warp"}}"#,
    ] {
        assert!(
            matches!(ExperimentConfig::from_json(bad), Err(CatError::ConfigInvalid(_))),
            "{bad}"
        );
    }
}

#[test]
fn overrides_apply_dotted_paths() {
    let mut doc: serde_json::Value = serde_json::from_str(
        r#"{"name":"c","experiment":{"kind":"classical","p":2,"n":1}}"#,
    )
    .unwrap();
    apply_override(&mut doc, "experiment.n", "[1,2]").unwrap();
    apply_override(&mut doc, "budget.memory_mb", "64").unwrap();
    apply_override(&mut doc, "name", "renamed").unwrap();
    let c: ExperimentConfig = serde_json::from_value(doc).unwrap();
    assert_eq!(c.name, "renamed");
    assert_eq!(c.budget.memory_mb, 64);
    match c.experiment {
        Experiment::Classical { n, .. } => assert_eq!(n.values(), vec![1, 2]),
        _ => unreachable!(),
    }
}

#[test]
fn budget_points_are_skipped_not_fatal() {
    let c = cfg(
        r#"{"name":"m","budget":{"max_words":4},
            "experiment":{"kind":"mass-sweep","q":2,"p":2,"n":[3,4],"sector":{"first":0,"last":0}}}"#,
    );
    let rs = run(&c, &RunOptions { workers: Some(2) }).unwrap();
    // n = 3 needs 4 words, n = 4 needs 16
    assert_eq!(rs.series("scaling").unwrap().len(), 1);
    assert_eq!(rs.skipped.len(), 1);
    assert_eq!(rs.skipped[0].point, "q=2 n=4");
    assert_eq!(rs.exit_code(), 2);
}

#[test]
fn worker_count_does_not_change_output() {
    let c = cfg(
        r#"{"name":"d","experiment":{"kind":"mass-sweep","q":[2,3,4],"p":2,"n":[3,4],
            "sector":{"first":0,"last":0},"grid":256}}"#,
    );
    let a = run(&c, &RunOptions { workers: Some(1) }).unwrap();
    let b = run(&c, &RunOptions { workers: Some(3) }).unwrap();
    for (x, y) in a.series.iter().zip(&b.series) {
        assert_eq!(x.table.render(), y.table.render(), "{}", x.name);
    }
    assert!(a.metric("fit.offdiag_exponent.n3").is_some());
}

#[test]
fn builtins_parse_and_validate() {
    assert!(!builtin_experiments().is_empty());
    for b in builtin_experiments() {
        let c = builtin_experiment(b.name).unwrap();
        assert_eq!(c.name, b.name);
    }
    assert!(builtin_experiment("nope").is_err());
}

#[test]
fn writes_files_and_plot_script() {
    let dir = tempfile::tempdir().unwrap();
    let c = cfg(
        r#"{"name":"s","description":"t","experiment":{"kind":"sector-matrix","q":2,"p":2,"n":3,
            "sector":{"first":0,"last":0},"grid":256}}"#,
    );
    let rs = run(&c, &RunOptions::default()).unwrap();
    let paths = write_result(&rs, dir.path()).unwrap();
    assert_eq!(paths.len(), 4);
    let matrix = std::fs::read_to_string(dir.path().join("s_matrix.csv")).unwrap();
    let mut lines = matrix.lines();
    assert!(lines.next().unwrap().starts_with("# config: "));
    assert_eq!(lines.next().unwrap(), "theta,sigma,re,im,abs");
    assert_eq!(lines.count(), 16);
    assert!(!matrix.contains('\r'));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["kind"], "sector-matrix");
    assert_eq!(summary["series"][0]["rows"], 16);
    let gp = emit_plot_data(&rs, dir.path()).unwrap();
    assert!(std::fs::read_to_string(gp).unwrap().contains("s_matrix.csv"));
}

#[test]
fn loglog_slope_recovers_power_law() {
    let pts: Vec<(f64, f64)> = (2..7)
        .map(|q| {
            let x = (1u64 << q) as f64;
            (x, 3.0 * x.powf(-0.75))
        })
        .collect();
    assert!((kinds::loglog_slope(&pts).unwrap() + 0.75).abs() < 1e-12);
    assert!(kinds::loglog_slope(&pts[..1]).is_none());
}
