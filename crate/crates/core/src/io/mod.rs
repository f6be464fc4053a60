//! Configuration files, output formats and the experiment driver.

pub mod config;
pub mod emit;
pub mod svg;

pub use config::{parse_config, parse_density, CurveSpec, DensitySpec, ExperimentConfig, FlowSpec, Outputs};
pub use emit::{read_snapshots, trace_csv, write_trace_csv, Snapshot, TRACE_HEADER};
pub use svg::{curves_svg, phase_portrait_svg};

use crate::analysis::{classify_curve, Outcome, Prediction, PredictionSummary};
use crate::curve::DiscreteCurve;
use crate::error::{Error, Result};
use crate::flow::{Flow, FlowOutcome, Verdict};
use crate::geom::Vec2;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSummary {
    pub verdict: String,
    pub t_final: f64,
    pub steps: usize,
    pub t_est: Option<f64>,
    pub limit_point: Option<Vec2>,
    pub isoperimetric_ratio: Option<f64>,
    pub sup_kpsi: Option<f64>,
    /// Radius of the circle with the final enclosed area.
    pub final_area_radius: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct Deltas {
    pub predicted_T: Option<f64>,
    pub measured_t_est: Option<f64>,
    pub abs_error_T: Option<f64>,
    pub rel_error_T: Option<f64>,
    pub predicted_limit_radius: Option<f64>,
    pub hausdorff_to_limit_circle: Option<f64>,
    /// Whether the verdict matches the predicted outcome; absent when either
    /// side is inconclusive.
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub id: String,
    pub prediction: PredictionSummary,
    pub outcome: OutcomeSummary,
    pub deltas: Deltas,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub prediction: Prediction,
    pub outcome: FlowOutcome,
    pub snapshots: Vec<Snapshot>,
    pub summary: RunSummary,
}

impl ExperimentResult {
    pub fn aborted(&self) -> Option<&Error> {
        match &self.outcome.verdict {
            Verdict::Aborted(e) => Some(e),
            _ => None,
        }
    }
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    base.join(p)
}

fn check_writable(base: &Path, outputs: &Outputs) -> Result<()> {
    let paths = [&outputs.trace, &outputs.snapshots, &outputs.summary, &outputs.svg];
    for p in paths.into_iter().flatten() {
        let full = resolve(base, p);
        let dir = full.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !dir.is_dir() {
            return Err(Error::Io(format!("output directory {} does not exist", dir.display())));
        }
    }
    Ok(())
}

/// Runs the flow described by `cfg`, predicting the outcome first. Relative
/// paths in the config resolve against `base`. Output files named in the
/// config are written even when the run aborts; an abort is reported in the
/// result, not as an error.
pub fn run_experiment(cfg: &ExperimentConfig, base: &Path) -> Result<ExperimentResult> {
    let v = cfg.violations();
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    check_writable(base, &cfg.outputs)?;
    let d = cfg.density.build()?;
    let c0 = cfg.curve.build(base)?;
    let flow = Flow::new(&c0, &d, cfg.flow_config())?;
    let prediction = classify_curve(&d, &c0)?;

    let every = cfg.flow.snapshot_every;
    let mut snapshots = Vec::new();
    let outcome = flow.run_observed(|s| {
        if s.steps % every == 0 {
            snapshots.push(Snapshot { t: s.t, vertices: s.curve.vertices().to_vec() });
        }
    });
    let fin = &outcome.final_state;
    if fin.steps % every != 0 {
        snapshots.push(Snapshot { t: fin.t, vertices: fin.curve.vertices().to_vec() });
    }

    let summary = summarize(&cfg.id, &prediction, &outcome);
    let out = &cfg.outputs;
    if let Some(p) = &out.trace {
        std::fs::write(resolve(base, p), trace_csv(&outcome.trace))?;
    }
    if let Some(p) = &out.snapshots {
        let lines: String = snapshots.iter().map(|s| s.to_json_line() + "\n").collect();
        std::fs::write(resolve(base, p), lines)?;
    }
    if let Some(p) = &out.summary {
        std::fs::write(resolve(base, p), serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n")?;
    }
    if let Some(p) = &out.svg {
        std::fs::write(resolve(base, p), curves_svg(&snapshots, prediction.limit_radius()))?;
    }
    Ok(ExperimentResult { prediction, outcome, snapshots, summary })
}

pub fn summarize(id: &str, prediction: &Prediction, outcome: &FlowOutcome) -> RunSummary {
    let fin = &outcome.final_state;
    let mut o = OutcomeSummary {
        verdict: outcome.verdict.name().to_string(),
        t_final: fin.t,
        steps: fin.steps,
        t_est: None,
        limit_point: None,
        isoperimetric_ratio: None,
        sup_kpsi: None,
        final_area_radius: None,
        error: None,
    };
    let mut hausdorff = None;
    match &outcome.verdict {
        Verdict::CollapsedToPoint { t_est, limit_point, isoperimetric_ratio } => {
            o.t_est = Some(*t_est);
            o.limit_point = Some(*limit_point);
            o.isoperimetric_ratio = Some(*isoperimetric_ratio);
        }
        Verdict::ConvergedToMinimal { curve, sup_kpsi } => {
            o.sup_kpsi = Some(*sup_kpsi);
            o.final_area_radius = Some((curve.area().abs() / std::f64::consts::PI).sqrt());
            if let Some(r) = prediction.limit_radius() {
                hausdorff = DiscreteCurve::from_polar(r, &[], Vec2::ZERO, 4096).ok().map(|c| c.hausdorff_distance(curve));
            }
        }
        Verdict::ReachedTMax => {}
        Verdict::Aborted(e) => o.error = Some(e.to_string()),
    }
    let predicted_t = prediction.exact_t();
    let abs = predicted_t.zip(o.t_est).map(|(p, m)| (m - p).abs());
    let consistent = match (prediction.outcome, &outcome.verdict) {
        (None, _) | (_, Verdict::ReachedTMax) | (_, Verdict::Aborted(_)) => None,
        (Some(Outcome::FiniteTimePoint { .. }), v) => Some(matches!(v, Verdict::CollapsedToPoint { .. })),
        (Some(_), v) => Some(matches!(v, Verdict::ConvergedToMinimal { .. })),
    };
    RunSummary {
        id: id.to_string(),
        prediction: prediction.summary(),
        outcome: o,
        deltas: Deltas {
            predicted_T: predicted_t,
            measured_t_est: outcome_t_est(&outcome.verdict),
            abs_error_T: abs,
            rel_error_T: abs.zip(predicted_t).map(|(a, p)| a / p.abs()),
            predicted_limit_radius: prediction.limit_radius(),
            hausdorff_to_limit_circle: hausdorff,
            consistent,
        },
    }
}

fn outcome_t_est(v: &Verdict) -> Option<f64> {
    match v {
        Verdict::CollapsedToPoint { t_est, .. } => Some(*t_est),
        _ => None,
    }
}
