use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn psiflow(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psiflow")).args(args).current_dir(dir).output().expect("spawn psiflow")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn simulate_critical_ellipse() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.json"),
        r#"{"id": "c1", "density": {"family": "critical_log"},
            "curve": {"shape": "ellipse", "a": 0.5, "b": 0.3, "center": [3, 0]},
            "outputs": {"summary": "summary.json", "trace": "trace.csv", "snapshots": "s.jsonl", "svg": "s.svg"}}"#,
    )
    .unwrap();
    let o = psiflow(&["simulate", "run.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    let predicted = s["deltas"]["predicted_T"].as_f64().unwrap();
    let measured = s["deltas"]["measured_t_est"].as_f64().unwrap();
    assert!((predicted - 0.075).abs() < 1e-4, "{predicted}");
    assert!((measured - 0.075).abs() < 0.02 * 0.075, "{measured}");
    assert_eq!(s["prediction"]["case"], "Critical_outside");

    let o = psiflow(&["plot", "s.jsonl", "--out", "again.svg"], dir.path());
    assert!(o.status.success());
    let read = |f: &str| fs::read_to_string(dir.path().join(f)).unwrap();
    assert_eq!(read("again.svg"), read("s.svg"));
}

#[test]
fn curve_through_singular_origin_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.json"),
        r#"{"density": {"family": "critical_log"}, "curve": {"shape": "polar", "rho0": 1.0, "center": [1, 0], "n_vertices": 64}}"#,
    )
    .unwrap();
    let o = psiflow(&["simulate", "run.json"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard radius"));
}

#[test]
fn zero_horizon() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.json"),
        r#"{"density": {"family": "gaussian", "mu": 1}, "curve": {"shape": "polar", "rho0": 0.5},
            "flow": {"t_max": 0}, "outputs": {"summary": "summary.json"}}"#,
    )
    .unwrap();
    let o = psiflow(&["simulate", "run.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    assert_eq!(s["outcome"]["verdict"], "ReachedTMax");
    assert_eq!(s["outcome"]["t_final"], 0.0);
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.json"),
        r#"{"density": {"family": "flat"}, "curve": {"shape": "polar", "rho0": 1}, "flow": {"vicosity": 1}}"#,
    )
    .unwrap();
    let o = psiflow(&["simulate", "run.json"], dir.path());
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("vicosity"));
}

fn portrait(density: &str) -> String {
    let dir = tempfile::tempdir().unwrap();
    let o = psiflow(
        &["phase-portrait", "--density", density, "--interval", "0.2,3", "--samples", "300", "--out", "p.svg"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    fs::read_to_string(dir.path().join("p.svg")).unwrap()
}

#[test]
fn phase_portraits() {
    let svg = portrait(r#"{"family": "gaussian", "mu": 1}"#);
    assert_eq!(svg.matches("marker repulsor").count(), 1);
    assert_eq!(svg.matches("marker attractor").count(), 0);
    let r: f64 = svg.split("data-r=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap();
    assert!((r - 1.0).abs() < 1e-9);

    let svg = portrait(r#"{"family": "anti_gaussian", "mu": 1}"#);
    assert_eq!(svg.matches("class=\"marker").count(), 0);

    let svg = portrait(r#"{"family": "critical_log"}"#);
    assert!(svg.contains("class=\"degenerate\""));
}

#[test]
fn phase_portrait_reads_density_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d.json"), r#"{"family": "quadratic_log", "lambda": 2, "a": -2}"#).unwrap();
    let o = psiflow(
        &["phase-portrait", "--density", "d.json", "--interval", "0.2,3", "--out", "p.svg"],
        dir.path(),
    );
    assert!(o.status.success());
    let out = stdout(&o);
    let r: f64 = out.strip_prefix("attractor r = ").unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!((r - 1.0).abs() < 1e-9, "{out}");
}

#[test]
fn classify_prints_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"family": "gaussian", "mu": 1}"#, r#"{"shape": "polar", "rho0": 0.5}"#, "FiniteTimePoint"),
        (r#"{"family": "critical_log"}"#, r#"{"shape": "polar", "rho0": 1, "modes": [[3, 0.2]]}"#, "GlobalExistenceLimitCircle"),
        (
            r#"{"family": "quadratic_log", "lambda": 2, "a": -2}"#,
            r#"{"shape": "polar", "rho0": 1.3, "modes": [[2, 0.15]]}"#,
            "GlobalExistenceLimitCircle",
        ),
    ];
    for (d, c, outcome) in cases {
        fs::write(dir.path().join("c.json"), format!(r#"{{"density": {d}, "curve": {c}}}"#)).unwrap();
        let o = psiflow(&["classify", "c.json"], dir.path());
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["outcome"], outcome, "{d}");
    }
}

#[test]
fn verify_unknown_suite_fails() {
    let o = psiflow(&["verify", "everything"], Path::new("."));
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
}

#[test]
fn verify_collapse_times() {
    let o = psiflow(&["verify", "collapse-times"], Path::new("."));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with('[')).count(), 4, "{out}");
    assert!(o.status.success(), "{out}");
}

#[test]
fn plot_snapshot_files() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("one.jsonl"), "{\"t\": 0.5, \"vertices\": [[0,0],[1,0],[0,1]]}\n").unwrap();
    let o = psiflow(&["plot", "one.jsonl", "--out", "one.svg"], dir.path());
    assert!(o.status.success());
    let svg = fs::read_to_string(dir.path().join("one.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);

    fs::write(dir.path().join("empty.jsonl"), "").unwrap();
    let o = psiflow(&["plot", "empty.jsonl", "--out", "empty.svg"], dir.path());
    assert!(!o.status.success());
}
