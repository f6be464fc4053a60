//! Radial dynamics of origin-centred spheres, `dr/dt = -(n/r + psi'(r))`.
//!
//! The integrator works with `u = r^2`, for which the equation reads
//! `u' = -2 (n + r psi'(r))`. This stays smooth through extinction (`u -> 0`)
//! for all the closed-form families, so the extinction time can be located by
//! a cubic Hermite root on the final step.

use crate::density::{classify_circle, find_crossings, CircleVerdict, CrossingSet, RadialDensity};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Radius below which a sphere is considered extinct.
pub const EXTINCTION_RADIUS: f64 = 1e-6;
/// Radius above which integration aborts.
pub const BLOW_UP_RADIUS: f64 = 1e6;

const MAX_STEPS: usize = 1_000_000;

/// Radial velocity of the sphere of radius `r`.
pub fn rhs(d: &RadialDensity, n: u32, r: f64) -> Result<f64> {
    if r == 0.0 && d.is_singular_at_origin() {
        return Err(Error::EvalAtSingularity { r });
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    Ok(-d.crossing_function(n, r))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusPath {
    /// Accepted `(t, r)` samples, starting with `(0, r0)`.
    pub points: Vec<(f64, f64)>,
    /// Time at which the radius reached zero, if it did before `t_end`.
    pub extinction: Option<f64>,
}

impl RadiusPath {
    pub fn final_radius(&self) -> f64 {
        self.points.last().map(|p| p.1).unwrap_or(f64::NAN)
    }
}

#[inline]
fn u_rhs(d: &RadialDensity, n: u32, u: f64) -> f64 {
    let r = u.max(0.0).sqrt();
    -2.0 * (n as f64 + d.r_dpsi(r))
}

fn rk4(d: &RadialDensity, n: u32, u: f64, h: f64) -> f64 {
    let k1 = u_rhs(d, n, u);
    let k2 = u_rhs(d, n, u + 0.5 * h * k1);
    let k3 = u_rhs(d, n, u + 0.5 * h * k2);
    let k4 = u_rhs(d, n, u + h * k3);
    u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// One full step and two half steps; returns the Richardson-extrapolated
/// value and the error estimate.
fn doubled_step(d: &RadialDensity, n: u32, u: f64, h: f64) -> (f64, f64) {
    let big = rk4(d, n, u, h);
    let half = rk4(d, n, rk4(d, n, u, 0.5 * h), 0.5 * h);
    let err = (half - big) / 15.0;
    (half + err, err.abs())
}

/// Adaptive classical RK4 (step doubling) for the sphere radius.
pub fn integrate(r0: f64, d: &RadialDensity, n: u32, t_end: f64, tol: f64) -> Result<RadiusPath> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidArgument(format!("initial radius must be positive, got {r0}")));
    }
    if !(t_end >= 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidArgument("t_end must be non-negative and tol positive".into()));
    }
    let u0 = r0 * r0;
    let u_floor = 1e-4 * u0;
    let u_extinct = EXTINCTION_RADIUS * EXTINCTION_RADIUS;
    let mut points = vec![(0.0, r0)];
    let mut t = 0.0;
    let mut u = u0;
    let f0 = u_rhs(d, n, u).abs();
    let mut h = if f0 > 0.0 { (0.01 * u0 / f0).min(t_end.max(1e-12)) } else { t_end.max(1e-12) };

    for _ in 0..MAX_STEPS {
        if t >= t_end {
            return Ok(RadiusPath { points, extinction: None });
        }
        let h_try = h.min(t_end - t);
        let (u_new, err) = doubled_step(d, n, u, h_try);
        let scale = tol * u_new.abs().max(u_floor);
        if err > scale && h_try > 1e-14 * (1.0 + t) {
            h = h_try * (0.9 * (scale / err).powf(0.2)).max(0.1);
            continue;
        }
        if u_new <= u_extinct {
            let t_ext = locate_extinction(d, n, t, u, h_try, u_new);
            points.push((t_ext, 0.0));
            return Ok(RadiusPath { points, extinction: Some(t_ext) });
        }
        t += h_try;
        u = u_new;
        let r = u.sqrt();
        if r > BLOW_UP_RADIUS {
            return Err(Error::BlowUp { t, limit: BLOW_UP_RADIUS });
        }
        points.push((t, r));
        let grow = if err > 0.0 { 0.9 * (scale / err).powf(0.2) } else { 4.0 };
        h = h_try * grow.clamp(0.2, 4.0);
    }
    Err(Error::InvalidArgument(format!("integration did not reach t_end = {t_end} in {MAX_STEPS} steps")))
}

/// Root of `u` inside the step `[t, t + h]` that crossed zero: cubic Hermite
/// guess, then secant refinement on re-integrated sub-steps.
fn locate_extinction(d: &RadialDensity, n: u32, t: f64, u: f64, h: f64, u_end: f64) -> f64 {
    let f_start = u_rhs(d, n, u);
    let f_end = u_rhs(d, n, u_end);
    let hermite = |s: f64| {
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * u + (s3 - 2.0 * s2 + s) * h * f_start + (-2.0 * s3 + 3.0 * s2) * u_end
            + (s3 - s2) * h * f_end
    };
    // bisection on the interpolant (u > 0 at s = 0, <= 0 at s = 1)
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if hermite(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s1 = 0.5 * (lo + hi) * h;
    let value = |hs: f64| doubled_step(d, n, u, hs).0;
    let mut v1 = value(s1);
    let mut s0 = s1 * (1.0 - 1e-3);
    let mut v0 = value(s0);
    for _ in 0..8 {
        if v1 == v0 || v1.abs() < 1e-15 * u.max(1.0) {
            break;
        }
        let s2 = s1 - v1 * (s1 - s0) / (v1 - v0);
        s0 = s1;
        v0 = v1;
        s1 = s2.clamp(0.0, h);
        v1 = value(s1);
    }
    t + s1
}

/// Closed-form state of an origin-centred sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactCircle {
    Radius(f64),
    Extinct { time: f64 },
}

/// Extinction time of `u' = -c - lambda u` from `u0 > 0`, if it reaches zero.
pub(crate) fn linear_extinction(u0: f64, c: f64, lambda: f64) -> Option<f64> {
    if !(c > 0.0) {
        return None;
    }
    if lambda == 0.0 {
        return Some(u0 / c);
    }
    let x = lambda * u0 / c;
    if x > -1.0 {
        Some(x.ln_1p() / lambda)
    } else {
        None
    }
}

fn linear_coefficients(d: &RadialDensity, n: u32) -> Result<(f64, f64)> {
    let law = d
        .area_law()
        .ok_or_else(|| Error::NoClosedForm("tabulated densities".into()))?;
    // r psi' = lambda r^2 / 2 + a  =>  u' = -2 (n + a) - lambda u
    Ok((2.0 * (n as f64 + law.log_coeff), law.lambda))
}

/// Closed-form radius at time `t` from `r0`, or the extinction time when the
/// sphere has already vanished.
pub fn exact_solution(d: &RadialDensity, n: u32, r0: f64, t: f64) -> Result<ExactCircle> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidArgument(format!("initial radius must be positive, got {r0}")));
    }
    let (c, lambda) = linear_coefficients(d, n)?;
    let u0 = r0 * r0;
    if let Some(time) = linear_extinction(u0, c, lambda) {
        if t >= time {
            return Ok(ExactCircle::Extinct { time });
        }
    }
    let u = if lambda == 0.0 {
        u0 - c * t
    } else {
        (u0 + c / lambda) * (-lambda * t).exp() - c / lambda
    };
    Ok(ExactCircle::Radius(u.max(0.0).sqrt()))
}

/// Closed-form extinction time, `None` when the sphere never vanishes.
pub fn exact_extinction_time(d: &RadialDensity, n: u32, r0: f64) -> Result<Option<f64>> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidArgument(format!("initial radius must be positive, got {r0}")));
    }
    let (c, lambda) = linear_coefficients(d, n)?;
    Ok(linear_extinction(r0 * r0, c, lambda))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortraitRow {
    pub r: f64,
    pub drift: f64,
    pub class: CircleVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePortrait {
    pub n: u32,
    pub rows: Vec<PortraitRow>,
    pub crossings: CrossingSet,
}

/// Drift and circle class sampled over `[r_lo, r_hi]`, plus the crossings.
pub fn phase_portrait(d: &RadialDensity, n: u32, interval: [f64; 2], samples: usize) -> Result<PhasePortrait> {
    let [lo, hi] = interval;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!("interval must satisfy 0 < a < b, got [{lo}, {hi}]")));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let rows = (0..samples)
        .map(|i| {
            let r = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            let class = classify_circle(d, n, r)?;
            Ok(PortraitRow { r, drift: class.drift, class: class.verdict })
        })
        .collect::<Result<Vec<_>>>()?;
    let crossings = find_crossings(d, n, lo, hi, samples.max(crate::density::DEFAULT_GRID_POINTS));
    Ok(PhasePortrait { n, rows, crossings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rhs_examples() {
        for r in [0.1, 1.0, 7.0] {
            assert!(rhs(&RadialDensity::critical_log(), 1, r).unwrap().abs() < 1e-15);
        }
        assert_relative_eq!(rhs(&RadialDensity::gaussian(1.0), 1, 0.5).unwrap(), -1.5, epsilon = 1e-15);
        let ag = RadialDensity::anti_gaussian(2.0).with_dim(3);
        assert_relative_eq!(rhs(&ag, 3, 1.0).unwrap(), -15.0, epsilon = 1e-14);
        assert!(matches!(rhs(&RadialDensity::critical_log(), 1, 0.0), Err(Error::EvalAtSingularity { .. })));
    }

    #[test]
    fn fixed_point_stays() {
        let p = integrate(1.0, &RadialDensity::gaussian(1.0), 1, 5.0, DEFAULT_TOL).unwrap();
        assert!(p.extinction.is_none());
        assert!(p.points.iter().all(|&(_, r)| (r - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gaussian_extinction() {
        let expect = 0.5 * (4.0f64 / 3.0).ln();
        let p = integrate(0.5, &RadialDensity::gaussian(1.0), 1, 1.0, DEFAULT_TOL).unwrap();
        assert!((p.extinction.unwrap() - expect).abs() < 1e-6);
        let e = exact_extinction_time(&RadialDensity::gaussian(1.0), 1, 0.5).unwrap().unwrap();
        assert!((e - expect).abs() < 1e-15);
    }

    #[test]
    fn attractor_capture() {
        let d = RadialDensity::quadratic_log(2.0, -2.0, 0.0);
        for r0 in [0.7, 1.5] {
            let p = integrate(r0, &d, 1, 10.0, DEFAULT_TOL).unwrap();
            assert!((p.final_radius() - 1.0).abs() < 1e-4);
            assert_eq!(p.points.last().unwrap().0, 10.0);
        }
    }

    #[test]
    fn exact_examples() {
        let ag = RadialDensity::anti_gaussian(1.0);
        assert_eq!(
            exact_solution(&ag, 1, 1.0, 5.0).unwrap(),
            ExactCircle::Extinct { time: 0.5 * 2f64.ln() }
        );
        assert_relative_eq!(exact_extinction_time(&ag, 1, 1.0).unwrap().unwrap(), 0.34657359027997264, epsilon = 1e-15);
        assert_eq!(exact_solution(&RadialDensity::critical_log(), 1, 2.0, 3.7).unwrap(), ExactCircle::Radius(2.0));
        assert!(matches!(
            exact_solution(&RadialDensity::tabulated(vec![0.0, 1.0, 2.0, 3.0], vec![0.0; 4], false).unwrap(), 1, 1.0, 0.1),
            Err(Error::NoClosedForm(_))
        ));
    }

    #[test]
    fn portrait_examples() {
        let p = phase_portrait(&RadialDensity::gaussian(1.0), 1, [0.1, 3.0], 59).unwrap();
        assert_eq!(p.crossings.zeros.len(), 1);
        assert_relative_eq!(p.crossings.zeros[0].r, 1.0, epsilon = 1e-12);
        for row in &p.rows {
            if row.r < 0.999 {
                assert!(row.drift < 0.0);
            } else if row.r > 1.001 {
                assert!(row.drift > 0.0);
            }
        }
        let p = phase_portrait(&RadialDensity::anti_gaussian(1.0), 1, [0.1, 3.0], 50).unwrap();
        assert!(p.crossings.is_empty() && p.rows.iter().all(|r| r.drift < 0.0));
        let p = phase_portrait(&RadialDensity::critical_log(), 1, [0.1, 3.0], 50).unwrap();
        assert!(p.crossings.degenerate && p.rows.iter().all(|r| r.drift.abs() < 1e-14));
    }
}
