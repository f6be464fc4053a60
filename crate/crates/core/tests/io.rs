use psiflow::io::{parse_config, read_snapshots, run_experiment, Snapshot};
use psiflow::{DiscreteCurve, Vec2};
use std::fs;

fn config(dir: &std::path::Path, body: &str) -> psiflow::io::ExperimentConfig {
    let text = format!(
        r#"{{{body}, "outputs": {{"trace": "trace.csv", "snapshots": "snaps.jsonl", "summary": "summary.json", "svg": "plot.svg"}}}}"#
    );
    let cfg = parse_config(&text).unwrap();
    assert!(dir.is_dir());
    cfg
}

const ELLIPSE: &str = r#""id": "critical-ellipse", "density": {"family": "critical_log"},
    "curve": {"shape": "ellipse", "a": 0.5, "b": 0.3, "center": [3, 0], "n_vertices": 128},
    "flow": {"snapshot_every": 200}"#;

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), ELLIPSE);
    let first = run_experiment(&cfg, dir.path()).unwrap();
    let csv = fs::read(dir.path().join("trace.csv")).unwrap();
    let summary = fs::read(dir.path().join("summary.json")).unwrap();
    run_experiment(&cfg, dir.path()).unwrap();
    assert_eq!(csv, fs::read(dir.path().join("trace.csv")).unwrap());
    assert_eq!(summary, fs::read(dir.path().join("summary.json")).unwrap());

    let s = &first.summary;
    assert_eq!(s.outcome.verdict, "CollapsedToPoint");
    assert!((s.deltas.predicted_T.unwrap() - 0.075).abs() < 1e-3);
    assert!(s.deltas.rel_error_T.unwrap() < 0.02);
    assert_eq!(s.deltas.consistent, Some(true));

    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("t,n_vertices,length,"));
    assert_eq!(text.lines().count(), first.outcome.trace.len() + 1);

    let snaps = read_snapshots(&fs::read_to_string(dir.path().join("snaps.jsonl")).unwrap()).unwrap();
    assert_eq!(snaps, first.snapshots);
    assert_eq!(snaps.last().unwrap().t, first.outcome.final_state.t);
    let svg = fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert_eq!(svg.matches("class=\"snapshot\"").count(), snaps.len());
}

#[test]
fn converged_run_lies_on_the_dashed_circle() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#""density": {"family": "critical_log"},
        "curve": {"shape": "polar", "rho0": 1.0, "modes": [[3, 0.2]], "n_vertices": 128},
        "flow": {"snapshot_every": 1000}"#;
    let res = run_experiment(&config(dir.path(), body), dir.path()).unwrap();
    assert_eq!(res.summary.outcome.verdict, "ConvergedToMinimal");
    let r = res.prediction.limit_radius().unwrap();
    let svg = fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert!(svg.contains("limit-circle"));
    let width: f64 = svg
        .split("stroke-width=\"")
        .nth(1)
        .and_then(|s| s.split('"').next())
        .unwrap()
        .parse()
        .unwrap();
    let last: &Snapshot = res.snapshots.last().unwrap();
    let circle = DiscreteCurve::from_polar(r, &[], Vec2::ZERO, 4096).unwrap();
    let fin = DiscreteCurve::new(last.vertices.clone()).unwrap();
    assert!(fin.hausdorff_distance(&circle) < width, "{} vs {width}", fin.hausdorff_distance(&circle));
}

#[test]
fn polygon_file_resolves_against_base() {
    let dir = tempfile::tempdir().unwrap();
    let c = DiscreteCurve::from_polar(0.4, &[], Vec2::new(2.0, 0.0), 64).unwrap();
    fs::write(dir.path().join("poly.json"), serde_json::to_string(c.vertices()).unwrap()).unwrap();
    let body = r#""density": {"family": "flat"}, "curve": {"shape": "polygon_file", "path": "poly.json"},
        "flow": {"t_max": 0.01}"#;
    let res = run_experiment(&config(dir.path(), body), dir.path()).unwrap();
    assert_eq!(res.summary.outcome.verdict, "ReachedTMax");
}

#[test]
fn missing_output_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), ELLIPSE);
    assert!(run_experiment(&cfg, &dir.path().join("nope")).is_err());
}
