use psiflow_web::{classify_config, portrait_svg, simulate_config};

#[test]
fn portrait_marks_the_gaussian_repulsor() {
    let svg = portrait_svg(r#"{"family": "gaussian", "mu": 1}"#, 0.2, 3.0, 200).unwrap();
    assert_eq!(svg.matches("marker repulsor").count(), 1);
    assert!(portrait_svg(r#"{"family": "gaussian", "mu": 1}"#, 3.0, 0.2, 200).is_err());
    assert!(portrait_svg(r#"{"family": "gausian"}"#, 0.2, 3.0, 200).is_err());
}

#[test]
fn classify_reports_the_critical_time() {
    let cfg = r#"{"density": {"family": "critical_log"},
                  "curve": {"shape": "ellipse", "a": 0.5, "b": 0.3, "center": [3, 0]}}"#;
    let v: serde_json::Value = serde_json::from_str(&classify_config(cfg).unwrap()).unwrap();
    assert_eq!(v["outcome"], "FiniteTimePoint");
    assert!((v["exact_T"].as_f64().unwrap() - 0.075).abs() < 1e-4);
}

#[test]
fn simulate_thins_snapshots_and_ignores_outputs() {
    let cfg = r#"{"density": {"family": "gaussian", "mu": 1},
                  "curve": {"shape": "polar", "rho0": 0.5, "n_vertices": 64},
                  "flow": {"snapshot_every": 1},
                  "outputs": {"summary": "/nonexistent/dir/summary.json"}}"#;
    let v: serde_json::Value = serde_json::from_str(&simulate_config(cfg, 5).unwrap()).unwrap();
    assert_eq!(v["snapshots"].as_array().unwrap().len(), 5);
    assert_eq!(v["summary"]["outcome"]["verdict"], "CollapsedToPoint");
    assert_eq!(v["svg"].as_str().unwrap().matches("class=\"snapshot\"").count(), 5);
}
