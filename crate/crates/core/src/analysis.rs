//! Predictions for a (density, initial curve) pair: which case of the
//! classification applies, closed-form collapse times and limit radii, the
//! psi-minimal circles in a region, and the rescaling maps that relate the
//! (anti-)Gaussian flows to the unweighted one.

use crate::circle_ode::linear_extinction;
use crate::curve::DiscreteCurve;
use crate::density::{find_crossings, CrossingSet, Family, RadialDensity, DEFAULT_GRID_POINTS};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Relative tolerance for deciding that a Gaussian area is exactly critical.
pub const CRITICAL_AREA_TOL: f64 = 1e-9;
/// Samples used by [`validate_ao_bounds`].
pub const AO_SAMPLES: usize = 4096;
/// Relative safety margin applied to the sampled bounds.
pub const AO_MARGIN: f64 = 0.1;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    A_i,
    A_ii,
    A_iii,
    A_iii_1,
    B_i,
    B_ii_1,
    B_ii_2,
    B_ii_3,
    Critical_outside,
    Critical_inside,
    QuadLog_outside,
    Gaussian_subcritical,
    Gaussian_critical,
    Gaussian_supercritical,
    AntiGaussian,
    Unpredicted,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::A_i => "A_i",
            CaseLabel::A_ii => "A_ii",
            CaseLabel::A_iii => "A_iii",
            CaseLabel::A_iii_1 => "A_iii_1",
            CaseLabel::B_i => "B_i",
            CaseLabel::B_ii_1 => "B_ii_1",
            CaseLabel::B_ii_2 => "B_ii_2",
            CaseLabel::B_ii_3 => "B_ii_3",
            CaseLabel::Critical_outside => "Critical_outside",
            CaseLabel::Critical_inside => "Critical_inside",
            CaseLabel::QuadLog_outside => "QuadLog_outside",
            CaseLabel::Gaussian_subcritical => "Gaussian_subcritical",
            CaseLabel::Gaussian_critical => "Gaussian_critical",
            CaseLabel::Gaussian_supercritical => "Gaussian_supercritical",
            CaseLabel::AntiGaussian => "AntiGaussian",
            CaseLabel::Unpredicted => "Unpredicted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    FiniteTimePoint { exact_t: Option<f64> },
    GlobalExistenceLimitCircle { radius: Option<f64> },
    GlobalExistenceUnresolvedLimit,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::FiniteTimePoint { .. } => "FiniteTimePoint",
            Outcome::GlobalExistenceLimitCircle { .. } => "GlobalExistenceLimitCircle",
            Outcome::GlobalExistenceUnresolvedLimit => "GlobalExistenceUnresolvedLimit",
        }
    }
}

/// One checked hypothesis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assumption {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assumption {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub case: CaseLabel,
    /// `None` exactly when the case is [`CaseLabel::Unpredicted`].
    pub outcome: Option<Outcome>,
    pub assumptions: Vec<Assumption>,
}

/// Flat form written into run summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSummary {
    pub case: String,
    pub outcome: String,
    #[serde(rename = "exact_T")]
    pub exact_t: Option<f64>,
    pub limit_radius: Option<f64>,
    pub assumptions: Vec<Assumption>,
}

impl Prediction {
    fn new(case: CaseLabel, outcome: Outcome, assumptions: Vec<Assumption>) -> Self {
        Self { case, outcome: Some(outcome), assumptions }
    }

    fn unpredicted(assumptions: Vec<Assumption>) -> Self {
        Self { case: CaseLabel::Unpredicted, outcome: None, assumptions }
    }

    pub fn exact_t(&self) -> Option<f64> {
        match self.outcome {
            Some(Outcome::FiniteTimePoint { exact_t }) => exact_t,
            _ => None,
        }
    }

    pub fn limit_radius(&self) -> Option<f64> {
        match self.outcome {
            Some(Outcome::GlobalExistenceLimitCircle { radius }) => radius,
            _ => None,
        }
    }

    pub fn summary(&self) -> PredictionSummary {
        PredictionSummary {
            case: self.case.as_str().into(),
            outcome: self.outcome.map_or("Unpredicted", Outcome::as_str).into(),
            exact_t: self.exact_t(),
            limit_radius: self.limit_radius(),
            assumptions: self.assumptions.clone(),
        }
    }
}

/// The parts of an initial curve the classification depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveStats {
    pub r_min: f64,
    pub r_max: f64,
    pub winding: i32,
    pub area: f64,
}

impl CurveStats {
    pub fn of(c: &DiscreteCurve) -> Result<Self> {
        let (r_min, r_max) = c.radial_extent();
        Ok(Self { r_min, r_max, winding: c.winding_number()?, area: c.area() })
    }
}

fn nmu2(d: &RadialDensity, mu: f64) -> f64 {
    d.dim() as f64 * mu * mu
}

/// Closed-form collapse time for the families where it is known.
pub fn predicted_collapse_time(d: &RadialDensity, area: f64, winding: i32) -> Option<f64> {
    if !(area > 0.0) {
        return None;
    }
    match *d.family() {
        Family::CriticalLog { .. } if d.is_critical_for(1) => (winding == 0).then(|| area / TAU),
        Family::QuadraticLog { lambda, a, .. } if lambda > 0.0 && a <= -1.0 && winding == 0 => {
            linear_extinction(area, TAU, lambda)
        }
        Family::AntiGaussian { mu } => {
            let k = nmu2(d, mu);
            Some((k * area / PI).ln_1p() / (2.0 * k))
        }
        Family::Gaussian { mu } => {
            let k = nmu2(d, mu);
            (k * area < PI).then(|| -(-k * area / PI).ln_1p() / (2.0 * k))
        }
        _ => None,
    }
}

/// Limit circle radius for the global-existence cases that pin it.
pub fn predicted_limit_radius(d: &RadialDensity, crossings: &CrossingSet, stats: &CurveStats) -> Result<f64> {
    classify_case(d, stats, crossings).limit_radius().ok_or(Error::NotGlobalCase)
}

/// Classifies the flow of a curve with the given statistics.
///
/// The exact families are recognised first; everything else goes through the
/// crossing-based case analysis, which needs `crossings` computed on an
/// interval reaching from near the origin to beyond `r_max`.
pub fn classify_case(d: &RadialDensity, stats: &CurveStats, crossings: &CrossingSet) -> Prediction {
    let mut notes = Vec::new();
    let w = stats.winding;
    let inside = w == 1;
    notes.push(Assumption::new(
        "origin_position",
        true,
        if inside { "origin inside the curve" } else { "origin outside the curve" },
    ));

    match *d.family() {
        Family::CriticalLog { .. } if d.is_critical_for(1) => {
            return if inside {
                let r = (stats.area / PI).sqrt();
                Prediction::new(CaseLabel::Critical_inside, Outcome::GlobalExistenceLimitCircle { radius: Some(r) }, notes)
            } else {
                let t = predicted_collapse_time(d, stats.area, w);
                Prediction::new(CaseLabel::Critical_outside, Outcome::FiniteTimePoint { exact_t: t }, notes)
            };
        }
        Family::QuadraticLog { lambda, a, .. } if lambda > 0.0 && a < -1.0 && !inside => {
            let t = predicted_collapse_time(d, stats.area, w);
            return Prediction::new(CaseLabel::QuadLog_outside, Outcome::FiniteTimePoint { exact_t: t }, notes);
        }
        Family::Gaussian { mu } => {
            let critical = PI / nmu2(d, mu);
            let rel = (stats.area - critical) / critical;
            notes.push(Assumption::new(
                "gaussian_area",
                true,
                format!("A0 = {} against critical area {}", stats.area, critical),
            ));
            return if rel.abs() <= CRITICAL_AREA_TOL {
                let r = 1.0 / nmu2(d, mu).sqrt();
                Prediction::new(CaseLabel::Gaussian_critical, Outcome::GlobalExistenceLimitCircle { radius: Some(r) }, notes)
            } else if rel < 0.0 {
                let t = predicted_collapse_time(d, stats.area, w);
                Prediction::new(CaseLabel::Gaussian_subcritical, Outcome::FiniteTimePoint { exact_t: t }, notes)
            } else {
                Prediction::new(CaseLabel::Gaussian_supercritical, Outcome::GlobalExistenceUnresolvedLimit, notes)
            };
        }
        Family::AntiGaussian { .. } => {
            let t = predicted_collapse_time(d, stats.area, w);
            return Prediction::new(CaseLabel::AntiGaussian, Outcome::FiniteTimePoint { exact_t: t }, notes);
        }
        _ => {}
    }
    classify_by_crossings(d, stats, crossings, notes)
}

fn classify_by_crossings(d: &RadialDensity, stats: &CurveStats, cs: &CrossingSet, mut notes: Vec<Assumption>) -> Prediction {
    let z = cs.radii();
    let k = z.len();
    let inside = stats.winding == 1;

    let covers = cs.scan_interval[0] <= stats.r_min && cs.scan_interval[1] >= stats.r_max;
    notes.push(Assumption::new(
        "scan_covers_curve",
        covers,
        format!("crossings scanned on [{}, {}], curve spans [{}, {}]", cs.scan_interval[0], cs.scan_interval[1], stats.r_min, stats.r_max),
    ));
    if cs.degenerate {
        notes.push(Assumption::new("transversal", false, "psi' + 1/r vanishes identically"));
        return Prediction::unpredicted(notes);
    }

    let tail_ok = if k == 0 { cs.sign_below_first > 0 } else { stats.r_max <= z[k - 1] || cs.sign_after_last > 0 };
    notes.push(Assumption::new(
        "tail_sign",
        tail_ok,
        if k == 0 {
            format!("no crossings; psi' + 1/r has sign {}", cs.sign_below_first)
        } else {
            format!("psi' + 1/r has sign {} after the biggest zero {}", cs.sign_after_last, z[k - 1])
        },
    ));
    if !covers || !tail_ok {
        return Prediction::unpredicted(notes);
    }

    let singular = d.is_singular_at_origin();
    let below = cs.sign_below_first;
    if singular {
        let probe = cs.scan_interval[0].min(stats.r_min);
        let diverges_down = d.eval_unchecked(probe).d1 < 0.0;
        notes.push(Assumption::new(
            "psi_prime_to_minus_infinity",
            diverges_down,
            format!("psi'({probe}) = {}", d.eval_unchecked(probe).d1),
        ));
        if !diverges_down {
            return Prediction::unpredicted(notes);
        }
    }

    // shift = 0: zeros with odd 1-based index are repulsors (g > 0 below r_1);
    // shift = 1: g < 0 below r_1, so r_1 is an attractor.
    let shift = if below > 0 { 0 } else { 1 };
    let zero = |i: usize| -> f64 {
        // 1-based index into the zeros, with infinity past the last one
        if i == 0 {
            0.0
        } else {
            z.get(i - 1).copied().unwrap_or(f64::INFINITY)
        }
    };

    // bracket [r_{2j-1+shift}, r_{2j+1+shift}] around the attractor r_{2j+shift}
    let mut bracket = None;
    let mut j = 1;
    while 2 * j - 1 + shift <= k.max(1) {
        let (lo, hi) = (zero(2 * j - 1 + shift), zero(2 * j + 1 + shift));
        if lo <= stats.r_min && stats.r_max <= hi {
            bracket = Some((lo, zero(2 * j + shift), hi));
            break;
        }
        j += 1;
    }
    let reach = bracket.map(|b| b.2).unwrap_or(stats.r_max);
    let transversal = cs.zeros.iter().filter(|c| c.r <= reach).all(|c| c.transversal);
    notes.push(Assumption::new(
        "transversal",
        transversal,
        format!("{} crossings below {reach}", cs.zeros.iter().filter(|c| c.r <= reach).count()),
    ));
    if !transversal {
        return Prediction::unpredicted(notes);
    }
    if let Some((lo, mid, hi)) = bracket {
        notes.push(Assumption::new("bracket", true, format!("curve lies in [{lo}, {hi}] around {mid}")));
    } else {
        notes.push(Assumption::new("bracket", false, "curve is not confined between consecutive repulsors"));
    }

    let finite = Outcome::FiniteTimePoint { exact_t: None };
    if shift == 0 {
        let r1 = zero(1);
        if stats.r_max <= r1 {
            if singular {
                notes.push(Assumption::new("inside_first_zero", false, "singular density with the curve inside r_1"));
                return Prediction::unpredicted(notes);
            }
            return Prediction::new(CaseLabel::A_i, finite, notes);
        }
        let label = |smooth: CaseLabel| if singular { CaseLabel::B_i } else { smooth };
        return match (bracket, inside) {
            (Some(_), false) => Prediction::new(label(CaseLabel::A_ii), finite, notes),
            (Some((_, mid, _)), true) if mid.is_finite() => Prediction::new(
                label(CaseLabel::A_iii_1),
                Outcome::GlobalExistenceLimitCircle { radius: Some(mid) },
                notes,
            ),
            (_, true) if r1 <= stats.r_min => {
                Prediction::new(label(CaseLabel::A_iii), Outcome::GlobalExistenceUnresolvedLimit, notes)
            }
            _ => Prediction::unpredicted(notes),
        };
    }

    // g < 0 below the first zero
    let (r1, r2) = (zero(1), zero(2));
    if stats.r_max <= r2 {
        return if inside {
            Prediction::new(CaseLabel::B_ii_2, Outcome::GlobalExistenceLimitCircle { radius: Some(r1) }, notes)
        } else {
            Prediction::new(CaseLabel::B_ii_1, finite, notes)
        };
    }
    match (bracket, inside) {
        (Some(_), false) => Prediction::new(CaseLabel::B_ii_3, finite, notes),
        (Some((_, mid, _)), true) if mid.is_finite() => {
            Prediction::new(CaseLabel::B_ii_3, Outcome::GlobalExistenceLimitCircle { radius: Some(mid) }, notes)
        }
        (_, true) if r2 <= stats.r_min => {
            Prediction::new(CaseLabel::B_ii_3, Outcome::GlobalExistenceUnresolvedLimit, notes)
        }
        _ => Prediction::unpredicted(notes),
    }
}

/// Crossings on a window suited to `stats`, then [`classify_case`].
pub fn classify_curve(d: &RadialDensity, c: &DiscreteCurve) -> Result<Prediction> {
    let stats = CurveStats::of(c)?;
    let cs = crossings_for(d, &stats);
    Ok(classify_case(d, &stats, &cs))
}

/// Scan window from well inside the curve to well beyond it.
pub fn crossings_for(d: &RadialDensity, stats: &CurveStats) -> CrossingSet {
    let lo = (1e-4 * stats.r_min).max(1e-9 * stats.r_max);
    let hi = (4.0 * stats.r_max).max(10.0);
    find_crossings(d, 1, lo, hi, 4 * DEFAULT_GRID_POINTS)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalInventory {
    pub radii: Vec<f64>,
    /// No closed psi-minimal curve lies inside the first crossing.
    pub none_inside_first_zero: bool,
    /// Every origin-centred circle is psi-minimal.
    pub all_circles_minimal: bool,
    /// Closed psi-minimal curves must be star-shaped about the origin.
    pub starshaped_necessary: bool,
}

/// The psi-minimal circles with radius in `region`, with the structural
/// facts that hold for the density.
pub fn minimal_circles_in_region(d: &RadialDensity, n: u32, crossings: &CrossingSet, region: [f64; 2]) -> MinimalInventory {
    let all = crossings.degenerate || d.is_critical_for(n);
    let radii: Vec<f64> = if all {
        Vec::new()
    } else {
        crossings.radii().into_iter().filter(|&r| r >= region[0] && r <= region[1]).collect()
    };
    let first = crossings.zeros.first().map(|c| c.r).unwrap_or(f64::INFINITY);
    let none_inside = !all && crossings.sign_below_first > 0 && region[1] <= first;
    MinimalInventory { radii, none_inside_first_zero: none_inside, all_circles_minimal: all, starshaped_necessary: n == 1 }
}

fn check_eps(eps: i32) -> Result<f64> {
    match eps {
        1 | -1 => Ok(eps as f64),
        _ => Err(Error::InvalidArgument(format!("epsilon must be +1 or -1, got {eps}"))),
    }
}

/// `t(t_hat) = ln(1 + eps 2 n mu^2 t_hat) / (eps 2 n mu^2)`.
pub fn gaussian_time_map(t_hat: f64, mu: f64, eps: i32, n: u32) -> Result<f64> {
    let k = check_eps(eps)? * 2.0 * n as f64 * mu * mu;
    if eps < 0 {
        let bound = 1.0 / (2.0 * n as f64 * mu * mu);
        if t_hat >= bound {
            return Err(Error::TimeOutOfDomain { t_hat, bound });
        }
    }
    if k * t_hat == 0.0 {
        return Ok(t_hat);
    }
    Ok((k * t_hat).ln_1p() / k)
}

/// Inverse of [`gaussian_time_map`].
pub fn gaussian_time_map_inverse(t: f64, mu: f64, eps: i32, n: u32) -> Result<f64> {
    let k = check_eps(eps)? * 2.0 * n as f64 * mu * mu;
    if k * t == 0.0 {
        return Ok(t);
    }
    Ok((k * t).exp_m1() / k)
}

/// Scales a weighted-flow curve taken at `t(t_hat)` onto the unweighted flow
/// at `t_hat`.
pub fn gaussian_rescale_curve(c: &DiscreteCurve, t_hat: f64, mu: f64, eps: i32, n: u32) -> Result<DiscreteCurve> {
    let t = gaussian_time_map(t_hat, mu, eps, n)?;
    Ok(c.scaled((eps as f64 * n as f64 * mu * mu * t).exp()))
}

/// `p(t) = e^{-eps n mu^2 t} p0`.
pub fn translation_map(p0: Vec2, t: f64, mu: f64, eps: i32, n: u32) -> Result<Vec2> {
    let e = check_eps(eps)?;
    Ok(p0 * (-e * n as f64 * mu * mu * t).exp())
}

/// Sampled bounds on psi and its derivatives over an annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AOBounds {
    pub annulus: [f64; 2],
    /// `sup |grad psi|`
    pub grad_sup: f64,
    /// `sup` over unit directions of `|Hess psi(v, v)|`
    pub hess_sup: f64,
    /// `inf e^psi`
    pub density_min: f64,
    /// `sup e^psi`
    pub density_max: f64,
    pub all_finite: bool,
}

impl AOBounds {
    /// Bounds inflated by [`AO_MARGIN`].
    pub fn with_margin(&self) -> AOBounds {
        let m = 1.0 + AO_MARGIN;
        AOBounds {
            grad_sup: self.grad_sup * m,
            hess_sup: self.hess_sup * m,
            density_min: self.density_min / m,
            density_max: self.density_max * m,
            ..*self
        }
    }
}

pub fn validate_ao_bounds(d: &RadialDensity, annulus: [f64; 2]) -> Result<AOBounds> {
    let [lo, hi] = annulus;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!("annulus must satisfy 0 < delta < R, got [{lo}, {hi}]")));
    }
    let (mut g, mut h, mut e, mut dmax) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for i in 0..AO_SAMPLES {
        let r = lo + (hi - lo) * i as f64 / (AO_SAMPLES - 1) as f64;
        let v = d.eval(r)?;
        g = g.max(v.d1.abs());
        h = h.max(v.d2.abs()).max((v.d1 / r).abs());
        let w = v.psi.exp();
        e = e.min(w);
        dmax = dmax.max(w);
    }
    let all_finite = [g, h, e, dmax].iter().all(|x| x.is_finite()) && e > 0.0;
    Ok(AOBounds { annulus, grad_sup: g, hess_sup: h, density_min: e, density_max: dmax, all_finite })
}
