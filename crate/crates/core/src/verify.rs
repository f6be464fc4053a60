//! Acceptance matrix: reference runs checked against closed forms.

use crate::analysis::gaussian_time_map;
use crate::circle_ode::{integrate, DEFAULT_TOL};
use crate::curve::DiscreteCurve;
use crate::density::{stability_second_variation, RadialDensity};
use crate::error::{Error, Result};
use crate::flow::{area_law_residual, Flow, FlowConfig, FlowOutcome, TraceRecord, Verdict};
use crate::geom::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};

pub const SUITES: [&str; 3] = ["collapse-times", "invariants", "acceptance"];
pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u32, name: &str, passed: bool, detail: String) -> Self {
        Self { id, name: name.into(), passed, detail }
    }

    pub fn row(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        format!("[{mark}] {:>2} {:<34} {}", self.id, self.name, self.detail)
    }
}

/// Seed from `PSIFLOW_SEED`, or [`DEFAULT_SEED`].
pub fn seed_from_env() -> Result<u64> {
    match std::env::var("PSIFLOW_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("PSIFLOW_SEED must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Criteria in a named suite. `all` is an alias of `acceptance`.
pub fn suite_criteria(name: &str) -> Result<Vec<u32>> {
    match name {
        "collapse-times" => Ok(vec![1, 3, 4, 5]),
        "invariants" => Ok(vec![7, 8, 9, 10, 11]),
        "acceptance" | "all" => Ok((1..=12).collect()),
        _ => Err(Error::InvalidArgument(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", ")))),
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CriterionResult>> {
    let ids = suite_criteria(name)?;
    Ok(run_criteria(&ids, seed))
}

/// Reference runs of the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Case {
    CriticalEllipse,
    CriticalTrefoil,
    GaussianCircle,
    AntiGaussianEllipse,
    QuadLogEllipse,
    QuadLogAttractor,
}

impl Case {
    pub const ALL: [Case; 6] = [
        Case::CriticalEllipse,
        Case::CriticalTrefoil,
        Case::GaussianCircle,
        Case::AntiGaussianEllipse,
        Case::QuadLogEllipse,
        Case::QuadLogAttractor,
    ];

    pub fn density(self) -> RadialDensity {
        match self {
            Case::CriticalEllipse | Case::CriticalTrefoil => RadialDensity::critical_log(),
            Case::GaussianCircle => RadialDensity::gaussian(1.0),
            Case::AntiGaussianEllipse => RadialDensity::anti_gaussian(1.0),
            Case::QuadLogEllipse => RadialDensity::quadratic_log(1.0, -2.0, 0.0),
            Case::QuadLogAttractor => RadialDensity::quadratic_log(2.0, -2.0, 0.0),
        }
    }

    pub fn curve(self, n: usize) -> DiscreteCurve {
        let c = match self {
            Case::CriticalEllipse => DiscreteCurve::ellipse(0.5, 0.3, Vec2::new(3.0, 0.0), 0.0, n),
            Case::CriticalTrefoil => DiscreteCurve::from_polar(1.0, &[(3, 0.2)], Vec2::ZERO, n),
            Case::GaussianCircle => DiscreteCurve::from_polar(0.5, &[], Vec2::ZERO, n),
            Case::AntiGaussianEllipse => DiscreteCurve::ellipse(1.0, 0.6, Vec2::ZERO, 0.0, n),
            Case::QuadLogEllipse => DiscreteCurve::ellipse(2.0, 1.0, Vec2::new(4.0, 0.0), FRAC_PI_2, n),
            Case::QuadLogAttractor => DiscreteCurve::from_polar(1.3, &[(2, 0.15)], Vec2::ZERO, n),
        };
        c.expect("reference curves are valid")
    }

    /// Closed-form collapse time and the relative tolerance on it.
    pub fn expected_collapse(self) -> Option<(f64, f64)> {
        match self {
            Case::CriticalEllipse => Some((0.5 * 0.3 * PI / TAU, 0.02)),
            Case::GaussianCircle => Some((0.5 * (4.0f64 / 3.0).ln(), 0.01)),
            Case::AntiGaussianEllipse => Some((0.5 * 1.6f64.ln(), 0.02)),
            Case::QuadLogEllipse => Some((LN_2, 0.02)),
            _ => None,
        }
    }

    fn config(self, refined: bool) -> FlowConfig {
        let base = FlowConfig::default();
        if refined {
            FlowConfig { vertex_budget: 512, cfl_factor: base.cfl_factor / 2.0, ..base }
        } else {
            base
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub outcome: FlowOutcome,
    /// Largest area-law residual over every 10th record.
    pub max_residual: std::result::Result<f64, String>,
}

impl RunRecord {
    pub fn t_est(&self) -> Option<f64> {
        match self.outcome.verdict {
            Verdict::CollapsedToPoint { t_est, .. } => Some(t_est),
            _ => None,
        }
    }
}

pub fn run_case(case: Case, refined: bool) -> Result<RunRecord> {
    let d = case.density();
    let cfg = case.config(refined);
    let c0 = case.curve(cfg.vertex_budget);
    let mut residual: std::result::Result<f64, String> = Ok(0.0);
    let outcome = Flow::new(&c0, &d, cfg)?.run_observed(|s| {
        if s.steps % 10 == 0 {
            if let Ok(m) = &mut residual {
                match area_law_residual(s, &d) {
                    Ok(r) => *m = m.max(r),
                    Err(e) => residual = Err(e.to_string()),
                }
            }
        }
    });
    Ok(RunRecord { outcome, max_residual: residual })
}

/// Runs every requested case concurrently.
pub fn run_cases(cases: &[(Case, bool)]) -> BTreeMap<(Case, bool), Result<RunRecord>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = cases.iter().map(|&k| (k, s.spawn(move || run_case(k.0, k.1)))).collect();
        handles
            .into_iter()
            .map(|(k, h)| (k, h.join().unwrap_or_else(|_| Err(Error::InvalidArgument("run panicked".into())))))
            .collect()
    })
}

/// Largest relative per-step increase of the weighted length.
pub fn max_weighted_length_rise(trace: &[TraceRecord]) -> f64 {
    trace
        .windows(2)
        .map(|w| (w[1].weighted_length - w[0].weighted_length) / w[0].weighted_length)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `L^2 / 4 pi A` of a trace record.
pub fn isoperimetric_ratio(r: &TraceRecord) -> f64 {
    r.length * r.length / (4.0 * PI * r.area)
}

/// Isoperimetric ratio over its floor for a polygon with the record's
/// vertex count, the regular polygon's `N tan(pi/N) / pi`.
pub fn normalized_isoperimetric_ratio(r: &TraceRecord) -> f64 {
    let n = r.n_vertices as f64;
    isoperimetric_ratio(r) / (n * (PI / n).tan() / PI)
}

fn count_rises(values: &[f64]) -> usize {
    values.windows(2).filter(|w| w[1] > w[0]).count()
}

fn collapse_row(id: u32, name: &str, case: Case, run: &Result<RunRecord>) -> CriterionResult {
    let (expect, tol) = case.expected_collapse().expect("collapse case");
    match run.as_ref().map(|r| (r.t_est(), r.outcome.verdict.name())) {
        Ok((Some(t), _)) => {
            let rel = (t - expect).abs() / expect;
            CriterionResult::new(id, name, rel < tol, format!("t_est {t:.6} vs {expect:.6}, rel {rel:.1e} < {tol}"))
        }
        Ok((None, v)) => CriterionResult::new(id, name, false, format!("verdict {v}, expected collapse")),
        Err(e) => CriterionResult::new(id, name, false, format!("run failed: {e}")),
    }
}

fn failed(id: u32, name: &str, e: impl std::fmt::Display) -> CriterionResult {
    CriterionResult::new(id, name, false, format!("run failed: {e}"))
}

fn needed_runs(ids: &[u32]) -> Vec<(Case, bool)> {
    let mut v = Vec::new();
    for &id in ids {
        let cases: &[Case] = match id {
            1 => &[Case::CriticalEllipse],
            2 => &[Case::CriticalTrefoil],
            3 => &[Case::GaussianCircle],
            4 => &[Case::AntiGaussianEllipse],
            5 => &[Case::QuadLogEllipse],
            6 => &[Case::QuadLogAttractor],
            7 => &Case::ALL,
            8 => &[Case::CriticalEllipse, Case::CriticalTrefoil, Case::AntiGaussianEllipse, Case::QuadLogEllipse],
            12 => &[Case::CriticalEllipse, Case::GaussianCircle, Case::AntiGaussianEllipse, Case::QuadLogEllipse],
            _ => &[],
        };
        v.extend(cases.iter().map(|&c| (c, false)));
        if id == 12 {
            v.extend(cases.iter().map(|&c| (c, true)));
        }
    }
    v.sort();
    v.dedup();
    v
}

/// Evaluates the listed criteria, sharing reference runs between them.
pub fn run_criteria(ids: &[u32], seed: u64) -> Vec<CriterionResult> {
    let runs = run_cases(&needed_runs(ids));
    let get = |c: Case| &runs[&(c, false)];
    ids.iter()
        .map(|&id| match id {
            1 => collapse_row(1, "critical collapse time", Case::CriticalEllipse, get(Case::CriticalEllipse)),
            2 => criterion_2(get(Case::CriticalTrefoil)),
            3 => criterion_3(get(Case::GaussianCircle)),
            4 => criterion_4(get(Case::AntiGaussianEllipse)),
            5 => collapse_row(5, "quadratic-log collapse time", Case::QuadLogEllipse, get(Case::QuadLogEllipse)),
            6 => criterion_6(get(Case::QuadLogAttractor)),
            7 => criterion_7(&runs),
            8 => criterion_8(&runs),
            9 => criterion_9(seed),
            10 => criterion_10(),
            11 => criterion_11(),
            12 => criterion_12(&runs),
            _ => CriterionResult::new(id, "unknown", false, "no such criterion".into()),
        })
        .collect()
}

fn circle_hausdorff(c: &DiscreteCurve, r: f64) -> f64 {
    let circle = DiscreteCurve::from_polar(r, &[], Vec2::ZERO, 4096).expect("circle");
    c.hausdorff_distance(&circle)
}

fn criterion_2(run: &Result<RunRecord>) -> CriterionResult {
    const NAME: &str = "critical conservation, limit circle";
    let r = match run {
        Ok(r) => r,
        Err(e) => return failed(2, NAME, e),
    };
    let tr = &r.outcome.trace;
    let a0 = tr[0].area;
    let drift = tr.iter().map(|x| (x.area - a0).abs() / a0).fold(0.0, f64::max);
    let Verdict::ConvergedToMinimal { curve, .. } = &r.outcome.verdict else {
        return CriterionResult::new(2, NAME, false, format!("verdict {}", r.outcome.verdict.name()));
    };
    let radius = (a0 / PI).sqrt();
    let h = circle_hausdorff(curve, radius) / radius;
    let e = tr.last().expect("trace").int_kpsi2_dspsi;
    let pass = drift < 5e-3 && h < 0.01 && e < 1e-5;
    CriterionResult::new(
        2,
        NAME,
        pass,
        format!("area drift {drift:.1e}, Hausdorff {h:.1e} of R={radius:.5}, int kpsi^2 {e:.1e}"),
    )
}

fn criterion_3(run: &Result<RunRecord>) -> CriterionResult {
    const NAME: &str = "gaussian circle extinction";
    let expect = 0.5 * (4.0f64 / 3.0).ln();
    let ode = integrate(0.5, &RadialDensity::gaussian(1.0), 1, 1.0, DEFAULT_TOL).map(|p| p.extinction);
    let (ode_ok, ode_detail) = match ode {
        Ok(Some(t)) => ((t - expect).abs() < 1e-6, format!("ode {t:.9} (err {:.1e})", (t - expect).abs())),
        Ok(None) => (false, "ode: no extinction".into()),
        Err(e) => (false, format!("ode: {e}")),
    };
    let flow = collapse_row(3, NAME, Case::GaussianCircle, run);
    CriterionResult::new(3, NAME, ode_ok && flow.passed, format!("{ode_detail}; flow {}", flow.detail))
}

fn criterion_4(run: &Result<RunRecord>) -> CriterionResult {
    const NAME: &str = "anti-gaussian round point";
    let t_row = collapse_row(4, NAME, Case::AntiGaussianEllipse, run);
    let Ok(r) = run else { return t_row };
    let tr = &r.outcome.trace;
    let tail = &tr[tr.len() * 3 / 4..];
    let norm: Vec<f64> = tail.iter().map(normalized_isoperimetric_ratio).collect();
    let raw: Vec<f64> = tail.iter().map(isoperimetric_ratio).collect();
    let last = *raw.last().expect("trace");
    let rises = count_rises(&norm);
    let pass = t_row.passed && rises == 0 && last < 1.01;
    CriterionResult::new(
        4,
        NAME,
        pass,
        format!(
            "{}; final iso {last:.5}; rises in last quarter: {rises} normalized, {} raw",
            t_row.detail,
            count_rises(&raw)
        ),
    )
}

fn criterion_6(run: &Result<RunRecord>) -> CriterionResult {
    const NAME: &str = "attractor capture";
    let d = Case::QuadLogAttractor.density();
    let mut detail = Vec::new();
    let mut pass = true;
    for r0 in [0.7, 1.5] {
        match integrate(r0, &d, 1, 10.0, DEFAULT_TOL) {
            Ok(p) => {
                let err = (p.final_radius() - 1.0).abs();
                pass &= err < 1e-4;
                detail.push(format!("ode r0={r0}: |r-1| {err:.1e}"));
            }
            Err(e) => {
                pass = false;
                detail.push(format!("ode r0={r0}: {e}"));
            }
        }
    }
    match run {
        Ok(r) => match &r.outcome.verdict {
            Verdict::ConvergedToMinimal { curve, .. } => {
                let h = circle_hausdorff(curve, 1.0);
                pass &= h < 0.01;
                detail.push(format!("flow Hausdorff {h:.1e}"));
            }
            v => {
                pass = false;
                detail.push(format!("flow verdict {}", v.name()));
            }
        },
        Err(e) => {
            pass = false;
            detail.push(format!("flow: {e}"));
        }
    }
    CriterionResult::new(6, NAME, pass, detail.join(", "))
}

fn criterion_7(runs: &BTreeMap<(Case, bool), Result<RunRecord>>) -> CriterionResult {
    const NAME: &str = "weighted length monotone";
    let mut worst = f64::NEG_INFINITY;
    for c in Case::ALL {
        match &runs[&(c, false)] {
            Ok(r) => worst = worst.max(max_weighted_length_rise(&r.outcome.trace)),
            Err(e) => return failed(7, NAME, e),
        }
    }
    CriterionResult::new(7, NAME, worst <= 1e-9, format!("largest relative step change {worst:.2e} over 6 runs"))
}

fn criterion_8(runs: &BTreeMap<(Case, bool), Result<RunRecord>>) -> CriterionResult {
    const NAME: &str = "area-law residual";
    let mut worst: f64 = 0.0;
    for c in [Case::CriticalEllipse, Case::CriticalTrefoil, Case::AntiGaussianEllipse, Case::QuadLogEllipse] {
        match runs[&(c, false)].as_ref().map(|r| r.max_residual.clone()) {
            Ok(Ok(m)) => worst = worst.max(m),
            Ok(Err(e)) => return failed(8, NAME, e),
            Err(e) => return failed(8, NAME, e),
        }
    }
    CriterionResult::new(8, NAME, worst < 0.01, format!("max residual {worst:.2e} of 2 pi over 4 runs"))
}

/// Attractor verdict from integrating the circle ODE off both sides of `r`.
fn ode_attracts(d: &RadialDensity, r: f64, delta: f64, t: f64) -> bool {
    [1.0 - delta, 1.0 + delta].iter().all(|f| match integrate(r * f, d, 1, t, DEFAULT_TOL) {
        Ok(p) => p.extinction.is_none() && (p.final_radius() - r).abs() < delta * r,
        Err(_) => false,
    })
}

fn criterion_9(seed: u64) -> CriterionResult {
    const NAME: &str = "stability criterion equivalence";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agree = 0;
    let mut stable = 0;
    let mut notes = Vec::new();
    for _ in 0..100 {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let lambda = sign * rng.gen_range(0.2..3.0);
        let a = -1.0 - sign * rng.gen_range(0.2..3.0);
        let d = RadialDensity::quadratic_log(lambda, a, 0.0);
        let r = (-2.0 * (a + 1.0) / lambda).sqrt();
        let second = match stability_second_variation(&d, 1, r) {
            Ok(s) => s,
            Err(e) => {
                notes.push(e.to_string());
                continue;
            }
        };
        let ode = ode_attracts(&d, r, 1e-3, 0.5);
        stable += second as usize;
        if second == ode {
            agree += 1;
        } else if notes.len() < 3 {
            notes.push(format!("lambda={lambda:.3}, a={a:.3}"));
        }
    }
    let mut detail = format!("{agree}/100 agree ({stable} stable), seed {seed}");
    if !notes.is_empty() {
        detail += &format!("; {}", notes.join(", "));
    }
    CriterionResult::new(9, NAME, agree == 100, detail)
}

/// Advances `flow` to exactly `target`.
fn advance_to(flow: &mut Flow, target: f64) -> Result<()> {
    while flow.state().t < target {
        let rest = target - flow.state().t;
        let dt = flow.propose_dt().min(rest);
        if rest <= 1e-14 * target.max(1.0) {
            break;
        }
        flow.step_with_dt(dt)?;
    }
    Ok(())
}

/// Maximum over the matched times of Hausdorff distance over diameter.
pub fn rescaling_discrepancy(t_hats: &[f64]) -> Result<f64> {
    let mu = 1.0;
    let c0 = DiscreteCurve::from_polar(0.8, &[(5, 0.12)], Vec2::new(0.3, 0.2), 256)?;
    let gauss = RadialDensity::gaussian(mu);
    let flat = RadialDensity::flat();
    let cfg = FlowConfig::default();
    let mut fw = Flow::new(&c0, &gauss, cfg.clone())?;
    let mut ff = Flow::new(&c0, &flat, cfg)?;
    let mut worst: f64 = 0.0;
    for &th in t_hats {
        let t = gaussian_time_map(th, mu, -1, 1)?;
        advance_to(&mut fw, t)?;
        advance_to(&mut ff, th)?;
        let mapped = fw.state().curve.scaled((-mu * mu * t).exp());
        let f = &ff.state().curve;
        worst = worst.max(mapped.hausdorff_distance(f) / f.diameter());
    }
    Ok(worst)
}

fn criterion_10() -> CriterionResult {
    const NAME: &str = "gaussian rescaling equivalence";
    match rescaling_discrepancy(&[0.02, 0.06, 0.1, 0.14, 0.18]) {
        Ok(w) => CriterionResult::new(10, NAME, w < 0.01, format!("max Hausdorff/diameter {w:.1e} at 5 times")),
        Err(e) => failed(10, NAME, e),
    }
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    let s = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * s)).norm()
}

/// Smallest distance between two polygons that do not cross.
pub fn polygon_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    let one_way = |p: &[Vec2], q: &[Vec2]| {
        p.iter()
            .flat_map(|&x| (0..q.len()).map(move |j| (x, j)))
            .map(|(x, j)| point_segment_distance(x, q[j], q[(j + 1) % q.len()]))
            .fold(f64::INFINITY, f64::min)
    };
    one_way(a, b).min(one_way(b, a))
}

/// Evolves two nested curves under the critical density with a shared step
/// until either reaches a verdict. Returns the smallest distance seen and
/// the number of records.
pub fn avoidance_run() -> Result<(f64, usize)> {
    let d = RadialDensity::critical_log();
    let outer = DiscreteCurve::from_polar(0.6, &[(3, 0.05)], Vec2::new(3.0, 0.0), 256)?;
    let inner = DiscreteCurve::ellipse(0.3, 0.2, Vec2::new(3.1, 0.05), 0.0, 256)?;
    let cfg = FlowConfig::default();
    let mut a = Flow::new(&outer, &d, cfg.clone())?;
    let mut b = Flow::new(&inner, &d, cfg)?;
    let mut min_d = polygon_distance(a.state().curve.vertices(), b.state().curve.vertices());
    let mut records = 1;
    while a.verdict().is_none() && b.verdict().is_none() {
        let mut dt = a.propose_dt().min(b.propose_dt());
        let mut tries = 0;
        let (na, nb) = loop {
            if let (Some(na), Some(nb)) = (a.attempt(dt)?, b.attempt(dt)?) {
                break (na, nb);
            }
            tries += 1;
            if tries >= 20 {
                return Err(Error::StepRejectedRepeatedly { t: a.state().t, attempts: tries });
            }
            dt *= 0.5;
        };
        a.commit(na);
        b.commit(nb);
        records += 1;
        min_d = min_d.min(polygon_distance(a.state().curve.vertices(), b.state().curve.vertices()));
    }
    Ok((min_d, records))
}

fn criterion_11() -> CriterionResult {
    const NAME: &str = "avoidance";
    match avoidance_run() {
        Ok((m, n)) => CriterionResult::new(11, NAME, m > 0.0, format!("min distance {m:.3e} over {n} records")),
        Err(e) => failed(11, NAME, e),
    }
}

fn criterion_12(runs: &BTreeMap<(Case, bool), Result<RunRecord>>) -> CriterionResult {
    const NAME: &str = "refinement convergence";
    let mut pass = true;
    let mut detail = Vec::new();
    for c in [Case::CriticalEllipse, Case::GaussianCircle, Case::AntiGaussianEllipse, Case::QuadLogEllipse] {
        let (expect, tol) = c.expected_collapse().expect("collapse case");
        let coarse = runs[&(c, false)].as_ref().ok().and_then(|r| r.t_est());
        let fine = runs[&(c, true)].as_ref().ok().and_then(|r| r.t_est());
        match coarse.zip(fine) {
            Some((a, b)) => {
                let change = (a - b).abs() / expect;
                pass &= change < tol / 2.0;
                detail.push(format!("{change:.1e}"));
            }
            None => {
                pass = false;
                detail.push("missing t_est".into());
            }
        }
    }
    CriterionResult::new(12, NAME, pass, format!("relative t_est changes [{}] vs half tolerances", detail.join(", ")))
}
