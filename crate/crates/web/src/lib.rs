//! Browser bindings: phase portraits, classification and short simulations.
//!
//! The plain functions return `Result<String, String>` so they can be tested
//! natively; the `#[wasm_bindgen]` wrappers forward to them.

use psiflow::analysis::classify_curve;
use psiflow::circle_ode::phase_portrait;
use psiflow::io::{curves_svg, parse_config, parse_density, phase_portrait_svg, run_experiment, Outputs, Snapshot};
use serde_json::json;
use std::path::Path;
use wasm_bindgen::prelude::*;

fn msg(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// SVG phase portrait of the density given as JSON.
pub fn portrait_svg(density: &str, lo: f64, hi: f64, samples: usize) -> Result<String, String> {
    if !(0.0 < lo && lo < hi && hi.is_finite()) {
        return Err(format!("need 0 < lo < hi, got [{lo}, {hi}]"));
    }
    let spec = parse_density(density).map_err(msg)?;
    let d = spec.build().map_err(msg)?;
    let p = phase_portrait(&d, spec.dim(), [lo, hi], samples.max(2)).map_err(msg)?;
    Ok(phase_portrait_svg(&p))
}

/// Prediction summary for the density and curve of a config, as JSON.
pub fn classify_config(config: &str) -> Result<String, String> {
    let cfg = parse_config(config).map_err(msg)?;
    let d = cfg.density.build().map_err(msg)?;
    let c = cfg.curve.build(Path::new(".")).map_err(msg)?;
    let p = classify_curve(&d, &c).map_err(msg)?;
    serde_json::to_string(&p.summary()).map_err(msg)
}

/// Runs a config (its outputs section is ignored) and returns
/// `{"summary", "svg", "snapshots"}` with at most `max_snapshots` evenly
/// spaced snapshots, the last one always included.
pub fn simulate_config(config: &str, max_snapshots: usize) -> Result<String, String> {
    let mut cfg = parse_config(config).map_err(msg)?;
    cfg.outputs = Outputs::default();
    let res = run_experiment(&cfg, Path::new(".")).map_err(msg)?;
    let snaps = thin(&res.snapshots, max_snapshots.max(1));
    let svg = curves_svg(&snaps, res.prediction.limit_radius());
    Ok(json!({ "summary": res.summary, "svg": svg, "snapshots": snaps }).to_string())
}

fn thin(s: &[Snapshot], k: usize) -> Vec<Snapshot> {
    if s.len() <= k {
        return s.to_vec();
    }
    let last = s.len() - 1;
    (0..k).map(|i| s[i * last / (k - 1).max(1)].clone()).collect()
}

#[wasm_bindgen(js_name = phasePortrait)]
pub fn phase_portrait_js(density: &str, lo: f64, hi: f64, samples: usize) -> Result<String, JsError> {
    portrait_svg(density, lo, hi, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classify)]
pub fn classify_js(config: &str) -> Result<String, JsError> {
    classify_config(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(config: &str, max_snapshots: usize) -> Result<String, JsError> {
    simulate_config(config, max_snapshots).map_err(|e| JsError::new(&e))
}
