use sharpbound::cli::{bundled_experiment, bundled_experiments, run_experiment, ExperimentConfig, OUT_DIR_ENV};
use sharpbound::Error;
use std::process::Command;

fn small_solve_config(dir: &str) -> String {
    format!(
        r#"{{
  "schema_version": 1,
  "name": "neg-q-small",
  "domain": {{ "schema_version": 1, "dimension": 2, "kind": "box", "vertices": [[0.0, 0.0], [1.0, 1.0]] }},
  "source": {{ "kind": "solve", "rhs": "upow:-1", "solver": {{ "backend": "geometric", "h": 0.03125 }} }},
  "probe": {{ "facet": 2, "levels": 3 }},
  "expected": {{ "oracle": "two-over-n-minus-q", "tolerance": 0.2 }},
  "outputs": {{ "dir": "{dir}", "solution": "u.csv" }},
  "seed": 3
}}"#
    )
}

#[test]
fn bundled_configs_parse() {
    let names = bundled_experiments();
    assert!(names.contains(&"lozenge-selftest") && names.contains(&"neg-q-2d"));
    for n in names {
        let c = bundled_experiment(n).unwrap();
        assert_eq!(c.name, n);
    }
    assert!(matches!(bundled_experiment("nope"), Err(Error::Validation(_))));
}

#[test]
fn lozenge_selftest_passes_and_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = bundled_experiment("lozenge-selftest").unwrap();
    cfg.outputs.dir = Some(tmp.path().join("a"));
    let a = run_experiment(&cfg, tmp.path()).unwrap();
    assert!(a.report.pass, "{:?}", a.report);
    let first = std::fs::read(&a.report_path).unwrap();
    std::fs::remove_file(&a.report_path).unwrap();
    let b = run_experiment(&cfg, tmp.path()).unwrap();
    assert_eq!(first, std::fs::read(&b.report_path).unwrap());
    let csv = std::fs::read_to_string(a.samples_path.unwrap()).unwrap();
    assert!(csv.starts_with("experiment,model,j,d,value,predicted,kept\n"));
    assert_eq!(csv.lines().count(), 1 + 7);
}

#[test]
fn small_solve_writes_report_samples_and_solution() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_json(&small_solve_config("out")).unwrap();
    let o = run_experiment(&cfg, tmp.path()).unwrap();
    let dir = tmp.path().join("out");
    assert_eq!(o.report_path, dir.join("neg-q-small.report.json"));
    assert!(dir.join("u.csv").exists());
    let s = o.report.solve.as_ref().unwrap();
    assert_eq!(s.nodes, 33 * 33);
    assert!(o.report.oracle.is_some());
    assert_eq!(o.report.config_hash.len(), 64);
}

#[test]
fn unknown_oracle_is_rejected() {
    let bad = small_solve_config("out").replace("two-over-n-minus-q", "three-halves");
    match ExperimentConfig::from_json(&bad) {
        Err(e) => assert!(e.to_string().contains("unknown rate oracle"), "{e}"),
        Ok(_) => panic!("accepted an unknown oracle"),
    }
}

#[test]
fn stage_failures_land_in_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    // Facet 9 does not exist on a square.
    let cfg = ExperimentConfig::from_json(&small_solve_config("out").replace("\"facet\": 2", "\"facet\": 9")).unwrap();
    let o = run_experiment(&cfg, tmp.path()).unwrap();
    assert!(!o.report.pass);
    assert_eq!(o.report.failure_stage.as_deref(), Some("probe"));
    assert!(o.report_path.exists());
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sharpbound"))
}

#[test]
fn binary_lists_experiments() {
    let out = bin().arg("list-experiments").output().unwrap();
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l == "lozenge-selftest"));
}

#[test]
fn binary_runs_with_out_dir_override() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin().args(["run", "--name", "lozenge-selftest"]).env(OUT_DIR_ENV, tmp.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = tmp.path().join("lozenge-selftest.report.json");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
}

#[test]
fn binary_surface_tension_and_verify() {
    let out = bin().args(["surface-tension", "--at", "0.3333333333333333,0.3333333333333333"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let det = v[0]["hessian_det"].as_f64().unwrap();
    assert!((det - 1.0).abs() < 1e-9);

    let out = bin()
        .args([
            "verify",
            "closed-forms",
            "--family",
            "neg-power-super",
            "--n",
            "2",
            "--params",
            "p=2",
            "--samples",
            "500",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = bin().args(["verify", "abreu", "--n", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn binary_reports_errors_with_code_two() {
    let out = bin().args(["surface-tension", "--at", "0.9,0.9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["run", "--name", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_solve_then_fit() {
    let tmp = tempfile::tempdir().unwrap();
    let dom = tmp.path().join("tri.json");
    std::fs::write(
        &dom,
        r#"{"schema_version": 1, "dimension": 2, "kind": "polygon", "vertices": [[0,0],[1,0],[0,1]]}"#,
    )
    .unwrap();
    let sol = tmp.path().join("u.csv");
    let out = bin()
        .args(["solve", "--domain"])
        .arg(&dom)
        .args(["--rhs", "const:1", "--h", "0.03125", "--out"])
        .arg(&sol)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out =
        bin().args(["fit-exponent", "--solution"]).arg(&sol).args(["--facet", "0", "--levels", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["facet"], 0);
    assert!(v["coefficients"][1].as_f64().unwrap() > 0.0);
}
