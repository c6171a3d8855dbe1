use std::path::Path;
use std::process::{Command, Output};

fn goldfish(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goldfish"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn simulate(dir: &Path, json: &str, stem: &str) -> (Output, std::path::PathBuf) {
    let cfg = write_config(dir, &format!("{stem}.json"), json);
    let out = dir.join(format!("{stem}.csv"));
    let status = goldfish(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    (status, out)
}

const TWO_BODY: &str =
    r#"{"system":"goldfish","N":2,"q0":[0,1],"qdot0":[1,1],"t_end":1,"output_points":11}"#;

#[test]
fn two_body_final_row_matches_quadratic_roots() {
    let dir = tempfile::tempdir().unwrap();
    let (status, out) = simulate(dir.path(), TWO_BODY, "two");
    assert_eq!(status.status.code(), Some(0));
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["t", "q1", "q2", "qdot1", "qdot2"]);
    assert_eq!(rows.len(), 11);
    let last = rows.last().unwrap();
    // x^2 - 3x + 1 = 0 at t = 1
    let s5 = 5f64.sqrt();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - (3.0 - s5) / 2.0).abs() < 1e-9);
    assert!((last[2] - (3.0 + s5) / 2.0).abs() < 1e-9);

    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("two.csv.diag.json")).unwrap())
            .unwrap();
    assert_eq!(diag["truncated"], false);
    assert!(diag["diagnostics"]["b_drift"].as_f64().unwrap() < 1e-9);
}

#[test]
fn free_particle_is_linear() {
    let dir = tempfile::tempdir().unwrap();
    let (status, out) = simulate(
        dir.path(),
        r#"{"system":"goldfish","N":1,"q0":[0.5],"qdot0":[2],"t_end":1,"output_points":5}"#,
        "free",
    );
    assert_eq!(status.status.code(), Some(0));
    let (_, rows) = read_csv(&out);
    for row in rows {
        assert!((row[1] - (0.5 + 2.0 * row[0])).abs() < 1e-14);
        assert_eq!(row[2], 2.0);
    }
}

#[test]
fn matrix_eigenvalues_match_goldfish_run() {
    let dir = tempfile::tempdir().unwrap();
    let data = r#""N":3,"q0":[-1,0.2,1.5],"qdot0":[0.7,1.2,0.9],"t_end":0.5,"output_points":21"#;
    let (a, gold) = simulate(dir.path(), &format!(r#"{{"system":"goldfish",{data}}}"#), "g");
    let (b, mat) = simulate(dir.path(), &format!(r#"{{"system":"matrix",{data}}}"#), "m");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let (_, g) = read_csv(&gold);
    let (header, m) = read_csv(&mat);
    assert_eq!(header, ["t", "q1", "q2", "q3"]);
    for (rg, rm) in g.iter().zip(&m) {
        for i in 0..4 {
            assert!((rg[i] - rm[i]).abs() < 1e-9);
        }
    }
}

#[test]
fn every_system_simulates() {
    let dir = tempfile::tempdir().unwrap();
    for (stem, json, columns) in [
        (
            "ecm",
            r#"{"system":"ecm","N":2,"q0":[0,1],"p0":[1,1],"f0":[[0,0.5],[-0.5,0]],"t_end":0.3,"output_points":4}"#,
            6,
        ),
        (
            "geo",
            r#"{"system":"geodesic","N":2,"q0":[0,1],"qdot0":[1,1],"t_end":0.3,"output_points":4}"#,
            5,
        ),
        (
            "sinh",
            r#"{"system":"hyperbolic-sinh","N":2,"a":0.5,"a_vec":[0,1],"c_vec":[1,1],"t_end":0.3,"output_points":4}"#,
            5,
        ),
        (
            "coth",
            r#"{"system":"hyperbolic-coth","N":2,"a_vec":[0,1],"c_vec":[1,1],"t_end":0.5,"output_points":2}"#,
            5,
        ),
    ] {
        let (status, out) = simulate(dir.path(), json, stem);
        assert_eq!(status.status.code(), Some(0), "{stem}");
        let (header, rows) = read_csv(&out);
        assert_eq!(header.len(), columns, "{stem}");
        assert!(rows.iter().all(|r| r.len() == columns));
        if stem == "coth" {
            // 2x2 spectrum of diag(1, e^2)(I + b L0), b = (e^2 - 1) / 2
            let e2 = 1f64.exp().powi(2);
            let b = (e2 - 1.0) / 2.0;
            let tr = (1.0 + b) * (1.0 + e2);
            let mu = (tr - (tr * tr - 4.0 * e2 * e2).sqrt()) / 2.0;
            let q1 = 0.5 * mu.ln();
            let last = rows.last().unwrap();
            assert!((last[1] - q1).abs() < 1e-8);
            assert!((last[2] - (2.0 - q1)).abs() < 1e-8);
        }
    }
}

#[test]
fn invalid_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (status, out) = simulate(
        dir.path(),
        r#"{"system":"goldfish","N":2,"q0":[1,0],"qdot0":[1,1],"t_end":1}"#,
        "bad",
    );
    assert_eq!(status.status.code(), Some(2));
    assert!(!out.exists());
    let (status, _) = simulate(dir.path(), "not json", "garbage");
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn blow_up_writes_partial_output_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let (status, out) = simulate(
        dir.path(),
        r#"{"system":"goldfish","N":2,"q0":[0,1],"qdot0":[1,-1],"t_end":2,"output_points":11}"#,
        "crash",
    );
    assert_eq!(status.status.code(), Some(3));
    let (_, rows) = read_csv(&out);
    assert!(!rows.is_empty() && rows.len() < 11);
    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("crash.csv.diag.json")).unwrap())
            .unwrap();
    assert_eq!(diag["truncated"], true);
    assert!(diag["error"].is_string());
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (_, a) = simulate(dir.path(), TWO_BODY, "a");
    let (_, b) = simulate(dir.path(), TWO_BODY, "b");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        std::fs::read(dir.path().join("a.csv.diag.json")).unwrap(),
        std::fs::read(dir.path().join("b.csv.diag.json")).unwrap()
    );
}

fn compare(dir: &Path, json: &str, solvers: &str, stem: &str) -> (Output, std::path::PathBuf) {
    let cfg = write_config(dir, &format!("{stem}.json"), json);
    let out = dir.join(format!("{stem}.csv"));
    let status = goldfish(&[
        "compare",
        "--config",
        &cfg,
        "--solvers",
        solvers,
        "--out",
        out.to_str().unwrap(),
    ]);
    (status, out)
}

#[test]
fn goldfish_solvers_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (status, out) = compare(
        dir.path(),
        r#"{"system":"goldfish","N":4,"q0":[-1.5,-0.4,0.6,1.8],"qdot0":[0.8,1.3,0.6,1.1],"t_end":0.3,"output_points":31}"#,
        "rk_integration,flat_exact,matrix_eigen",
        "cmp",
    );
    assert_eq!(status.status.code(), Some(0));
    let (header, rows) = read_csv(&out);
    assert_eq!(
        header,
        [
            "t",
            "rk_integration_vs_flat_exact",
            "rk_integration_vs_matrix_eigen",
            "flat_exact_vs_matrix_eigen"
        ]
    );
    assert_eq!(rows.len(), 31);
    assert!(rows.iter().all(|r| r[1..].iter().all(|d| *d < 1e-8)));
    let timing: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cmp.csv.timing.json")).unwrap())
            .unwrap();
    assert_eq!(timing["seconds"].as_object().unwrap().len(), 3);
}

#[test]
fn coth_solvers_agree() {
    let dir = tempfile::tempdir().unwrap();
    let (status, out) = compare(
        dir.path(),
        r#"{"system":"hyperbolic-coth","N":3,"a_vec":[-0.5,0.3,1.1],"c_vec":[0.9,1.2,0.7],"t_end":0.3,"output_points":16}"#,
        "z_eigen,s_exact,rk_integration",
        "coth",
    );
    assert_eq!(status.status.code(), Some(0));
    let (header, rows) = read_csv(&out);
    assert_eq!(header.len(), 4);
    assert!(rows.iter().all(|r| r[1..].iter().all(|d| *d < 1e-7)));
}

#[test]
fn single_solver_has_no_discrepancy_columns() {
    let dir = tempfile::tempdir().unwrap();
    let (status, out) = compare(dir.path(), TWO_BODY, "flat_exact", "one");
    assert_eq!(status.status.code(), Some(0));
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["t"]);
    assert_eq!(rows.len(), 11);
}

#[test]
fn inapplicable_solver_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (status, out) = compare(dir.path(), TWO_BODY, "rk_integration,z_eigen", "nope");
    assert_eq!(status.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn verify_geometry_contains_curvature_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("geo.json");
    let status = goldfish(&["verify", "geometry", "--seed", "7", "--out", out.to_str().unwrap()]);
    let report: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for name in ["curvature_flat_w2x", "curvature_nonflat_w1x"] {
        let entry = report.iter().find(|e| e["name"] == name).unwrap();
        assert_eq!(entry["pass"], true, "{name}");
    }
    let all_pass = report.iter().all(|e| e["pass"] == true);
    assert_eq!(status.status.code(), Some(if all_pass { 0 } else { 1 }));
    for e in &report {
        let keys: Vec<&String> = e.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["max_residual", "name", "pass", "seconds", "tolerance"]);
    }
}

#[test]
fn verify_suites_other_than_geometry_pass() {
    for suite in ["symfun", "poisson", "dynamics", "reduction", "hyperbolic"] {
        let status = goldfish(&["verify", suite, "--seed", "42"]);
        assert_eq!(status.status.code(), Some(0), "{suite}");
    }
}

#[test]
fn unknown_selector_exits_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let status = goldfish(&["verify", "everything", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(2));
    assert!(!out.exists());
    assert!(status.stdout.is_empty());
}

#[test]
fn missing_arguments_exit_2() {
    assert_eq!(goldfish(&["simulate"]).status.code(), Some(2));
    assert_eq!(goldfish(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_report_is_reproducible() {
    let a = goldfish(&["verify", "all", "--seed", "3"]);
    let b = goldfish(&["verify", "all", "--seed", "3"]);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}
