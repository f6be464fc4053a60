//! Radial densities `e^psi(r)` and their psi-minimal circles.
//!
//! A circle of radius `r` centred at the origin moves under the flow with
//! radial velocity `-(n/r + psi'(r))`. Its zeros are the psi-minimal circles;
//! the slope of the drift at a zero decides whether nearby circles are pulled
//! in (attractor) or pushed away (repulsor).

use crate::error::{Error, Result};
use crate::geom::Vec2;
use serde::{Deserialize, Serialize};

/// Tolerance on `|drift|` for declaring a circle psi-minimal.
pub const MINIMAL_TOL: f64 = 1e-9;
/// Threshold on `|g'|` for a transversal crossing.
pub const TRANSVERSAL_TOL: f64 = 1e-8;
/// Default number of scan points used by [`find_crossings`].
pub const DEFAULT_GRID_POINTS: usize = 2048;

/// `psi` together with its first two radial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue {
    pub psi: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `psi = -n ln r + offset`
    CriticalLog { offset: f64 },
    /// `psi = -n mu^2 r^2 / 2`
    Gaussian { mu: f64 },
    /// `psi = n mu^2 r^2 / 2`
    AntiGaussian { mu: f64 },
    /// `psi = lambda r^2 / 4 + b + a ln r`
    QuadraticLog { lambda: f64, a: f64, b: f64 },
    /// `psi = 0`
    Flat,
    /// Natural cubic interpolation of sampled `(r, psi)` values.
    Tabulated(Tabulated),
}

/// A radial weight `e^psi(|x|)`.
///
/// `dim` is the hypersurface dimension `n` that enters the Gaussian and
/// critical families; the curve flow uses `dim = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDensity {
    family: Family,
    dim: u32,
}

/// Coefficients of the exact enclosed-area law
/// `A' = -2 pi - lambda A - 2 pi a [origin inside]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaLaw {
    pub lambda: f64,
    pub log_coeff: f64,
}

impl RadialDensity {
    pub fn critical_log() -> Self {
        Self::new(Family::CriticalLog { offset: 0.0 })
    }

    pub fn gaussian(mu: f64) -> Self {
        Self::new(Family::Gaussian { mu })
    }

    pub fn anti_gaussian(mu: f64) -> Self {
        Self::new(Family::AntiGaussian { mu })
    }

    pub fn quadratic_log(lambda: f64, a: f64, b: f64) -> Self {
        Self::new(Family::QuadraticLog { lambda, a, b })
    }

    pub fn flat() -> Self {
        Self::new(Family::Flat)
    }

    pub fn tabulated(r: Vec<f64>, psi: Vec<f64>, singular_at_origin: bool) -> Result<Self> {
        Ok(Self::new(Family::Tabulated(Tabulated::new(r, psi, singular_at_origin)?)))
    }

    pub fn new(family: Family) -> Self {
        Self { family, dim: 1 }
    }

    /// Same density with hypersurface dimension `n`.
    pub fn with_dim(mut self, n: u32) -> Self {
        self.dim = n;
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_singular_at_origin(&self) -> bool {
        match &self.family {
            Family::CriticalLog { .. } => self.dim != 0,
            Family::QuadraticLog { a, .. } => *a != 0.0,
            Family::Tabulated(t) => t.singular_at_origin,
            _ => false,
        }
    }

    /// True when every origin-centred sphere of dimension `n` is psi-minimal,
    /// decided from the family tag.
    pub fn is_critical_for(&self, n: u32) -> bool {
        match self.family {
            Family::CriticalLog { .. } => self.dim == n,
            Family::QuadraticLog { lambda, a, .. } => lambda == 0.0 && a == -(n as f64),
            _ => false,
        }
    }

    pub fn eval(&self, r: f64) -> Result<PsiValue> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("radius must be non-negative, got {r}")));
        }
        if r == 0.0 && self.is_singular_at_origin() {
            return Err(Error::EvalAtSingularity { r });
        }
        Ok(self.eval_unchecked(r))
    }

    /// Evaluation without the domain checks; `r > 0` or a regular family.
    pub(crate) fn eval_unchecked(&self, r: f64) -> PsiValue {
        let n = self.dim as f64;
        match &self.family {
            Family::CriticalLog { offset } => PsiValue {
                psi: -n * r.ln() + offset,
                d1: -n / r,
                d2: n / (r * r),
            },
            Family::Gaussian { mu } => {
                let k = n * mu * mu;
                PsiValue { psi: -0.5 * k * r * r, d1: -k * r, d2: -k }
            }
            Family::AntiGaussian { mu } => {
                let k = n * mu * mu;
                PsiValue { psi: 0.5 * k * r * r, d1: k * r, d2: k }
            }
            Family::QuadraticLog { lambda, a, b } => {
                if *a == 0.0 {
                    PsiValue { psi: lambda * r * r / 4.0 + b, d1: lambda * r / 2.0, d2: lambda / 2.0 }
                } else {
                    PsiValue {
                        psi: lambda * r * r / 4.0 + b + a * r.ln(),
                        d1: lambda * r / 2.0 + a / r,
                        d2: lambda / 2.0 - a / (r * r),
                    }
                }
            }
            Family::Flat => PsiValue { psi: 0.0, d1: 0.0, d2: 0.0 },
            Family::Tabulated(t) => t.eval(r),
        }
    }

    /// `r psi'(r)`, which stays finite at the origin for the log families.
    pub fn r_dpsi(&self, r: f64) -> f64 {
        let n = self.dim as f64;
        match &self.family {
            Family::CriticalLog { .. } => -n,
            Family::Gaussian { mu } => -n * mu * mu * r * r,
            Family::AntiGaussian { mu } => n * mu * mu * r * r,
            Family::QuadraticLog { lambda, a, .. } => lambda * r * r / 2.0 + a,
            Family::Flat => 0.0,
            Family::Tabulated(t) => r * t.eval(r).d1,
        }
    }

    /// Ambient (planar) Laplacian `psi'' + psi'/r`.
    pub fn laplacian(&self, r: f64) -> Result<f64> {
        if let Some(law) = self.area_law() {
            if r > 0.0 || law.log_coeff == 0.0 {
                return Ok(law.lambda);
            }
            return Err(Error::EvalAtSingularity { r });
        }
        let v = self.eval(r)?;
        if r == 0.0 {
            // psi'/r -> psi''(0) for a smooth radial function
            return Ok(2.0 * v.d2);
        }
        Ok(v.d2 + v.d1 / r)
    }

    /// The exact area-law coefficients, for the families where the planar
    /// Laplacian of psi is constant away from the origin.
    pub fn area_law(&self) -> Option<AreaLaw> {
        let n = self.dim as f64;
        match self.family {
            Family::CriticalLog { .. } => Some(AreaLaw { lambda: 0.0, log_coeff: -n }),
            Family::Gaussian { mu } => Some(AreaLaw { lambda: -2.0 * n * mu * mu, log_coeff: 0.0 }),
            Family::AntiGaussian { mu } => Some(AreaLaw { lambda: 2.0 * n * mu * mu, log_coeff: 0.0 }),
            Family::QuadraticLog { lambda, a, .. } => Some(AreaLaw { lambda, log_coeff: a }),
            Family::Flat => Some(AreaLaw { lambda: 0.0, log_coeff: 0.0 }),
            Family::Tabulated(_) => None,
        }
    }

    /// `grad psi = psi'(|p|) p / |p|`.
    pub fn grad_psi(&self, p: Vec2) -> Result<Vec2> {
        let r = p.norm();
        if r == 0.0 {
            if self.is_singular_at_origin() {
                return Err(Error::EvalAtSingularity { r });
            }
            return Ok(Vec2::ZERO);
        }
        let v = self.eval_unchecked(r);
        Ok(p * (v.d1 / r))
    }

    /// Hessian of psi applied to a unit vector twice:
    /// `psi'' c^2 + (psi'/r)(1 - c^2)` with `c = <p/|p|, N>`.
    pub fn hess_psi_nn(&self, p: Vec2, normal: Vec2) -> Result<f64> {
        if (normal.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("normal is not unit: |N| = {}", normal.norm())));
        }
        let r = p.norm();
        if r == 0.0 {
            if self.is_singular_at_origin() {
                return Err(Error::EvalAtSingularity { r });
            }
            return Ok(self.eval_unchecked(0.0).d2);
        }
        let v = self.eval_unchecked(r);
        let c = p.dot(normal) / r;
        let c2 = c * c;
        Ok(v.d2 * c2 + v.d1 / r * (1.0 - c2))
    }

    /// `g(r) = psi'(r) + n/r`; its zeros are the psi-minimal radii.
    pub fn crossing_function(&self, n: u32, r: f64) -> f64 {
        self.eval_unchecked(r).d1 + n as f64 / r
    }

    /// Derivative of [`Self::crossing_function`].
    pub fn crossing_slope(&self, n: u32, r: f64) -> f64 {
        self.eval_unchecked(r).d2 - n as f64 / (r * r)
    }
}

/// Sampled psi with a natural cubic spline. Values outside the table are
/// extrapolated linearly, which keeps the interpolant C^2.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    r: Vec<f64>,
    psi: Vec<f64>,
    m: Vec<f64>,
    singular_at_origin: bool,
}

impl Tabulated {
    pub fn new(r: Vec<f64>, psi: Vec<f64>, singular_at_origin: bool) -> Result<Self> {
        if r.len() != psi.len() {
            return Err(Error::InvalidDensity("r and psi tables differ in length".into()));
        }
        if r.len() < 4 {
            return Err(Error::InvalidDensity("need at least 4 table points".into()));
        }
        if r[0] < 0.0 || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidDensity("radii must be non-negative and strictly increasing".into()));
        }
        if psi.iter().chain(r.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidDensity("table contains non-finite values".into()));
        }
        let m = natural_spline_moments(&r, &psi);
        Ok(Self { r, psi, m, singular_at_origin })
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.psi
    }

    pub fn singular_at_origin(&self) -> bool {
        self.singular_at_origin
    }

    fn eval(&self, x: f64) -> PsiValue {
        let n = self.r.len();
        if x <= self.r[0] || x >= self.r[n - 1] {
            let (i, j) = if x <= self.r[0] { (0, 1) } else { (n - 2, n - 1) };
            let end = if x <= self.r[0] { i } else { j };
            let s = self.segment(i, j, self.r[end]);
            let dx = x - self.r[end];
            return PsiValue { psi: s.psi + s.d1 * dx, d1: s.d1, d2: 0.0 };
        }
        let j = self.r.partition_point(|&v| v <= x).min(n - 1);
        self.segment(j - 1, j, x)
    }

    fn segment(&self, i: usize, j: usize, x: f64) -> PsiValue {
        let h = self.r[j] - self.r[i];
        let a = (self.r[j] - x) / h;
        let b = (x - self.r[i]) / h;
        let (mi, mj) = (self.m[i], self.m[j]);
        let psi = a * self.psi[i]
            + b * self.psi[j]
            + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
        let d1 = (self.psi[j] - self.psi[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * mi
            + (3.0 * b * b - 1.0) / 6.0 * h * mj;
        let d2 = a * mi + b * mj;
        PsiValue { psi, d1, d2 }
    }
}

/// Second-derivative values of the natural cubic spline (tridiagonal solve).
fn natural_spline_moments(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let diag = 2.0 * (h0 + h1);
        let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        let denom = diag - h0 * c[i - 1];
        c[i] = h1 / denom;
        d[i] = (rhs - h0 * d[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    m
}

/// Sign change of the radial drift `-(psi' + n/r)` across a zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignChange {
    /// Drift goes from positive to negative: circles converge to the zero.
    PlusToMinus,
    /// Drift goes from negative to positive: circles leave the zero.
    MinusToPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub r: f64,
    pub transversal: bool,
    pub sign_change: SignChange,
}

impl Crossing {
    pub fn is_attractor(&self) -> bool {
        self.sign_change == SignChange::PlusToMinus
    }
}

/// Ordered zeros of `psi' + n/r` on a scan interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingSet {
    pub zeros: Vec<Crossing>,
    pub degenerate: bool,
    pub scan_interval: [f64; 2],
    /// Sign of `psi' + n/r` at the lower end of the scan (0 when degenerate).
    pub sign_below_first: i8,
    /// Sign of `psi' + n/r` at the upper end of the scan.
    pub sign_after_last: i8,
}

impl CrossingSet {
    pub fn radii(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.r).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn all_transversal(&self) -> bool {
        self.zeros.iter().all(|z| z.transversal)
    }
}

/// Scan `g(r) = psi'(r) + n/r` on `[r_lo, r_hi]` and bisect every sign change.
pub fn find_crossings(d: &RadialDensity, n: u32, r_lo: f64, r_hi: f64, grid_points: usize) -> CrossingSet {
    assert!(r_lo > 0.0 && r_hi > r_lo, "scan interval must satisfy 0 < r_lo < r_hi");
    let grid_points = grid_points.max(16);
    let interval = [r_lo, r_hi];
    if d.is_critical_for(n) {
        return CrossingSet {
            zeros: Vec::new(),
            degenerate: true,
            scan_interval: interval,
            sign_below_first: 0,
            sign_after_last: 0,
        };
    }

    let log_spaced = d.is_singular_at_origin();
    let grid: Vec<f64> = (0..grid_points)
        .map(|i| {
            let s = i as f64 / (grid_points - 1) as f64;
            if log_spaced {
                (r_lo.ln() + s * (r_hi.ln() - r_lo.ln())).exp()
            } else {
                r_lo + s * (r_hi - r_lo)
            }
        })
        .collect();
    let g: Vec<f64> = grid.iter().map(|&r| d.crossing_function(n, r)).collect();

    let sign = |v: f64| -> i8 {
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    };

    if g.iter().all(|v| v.abs() < 1e-12) {
        return CrossingSet {
            zeros: Vec::new(),
            degenerate: true,
            scan_interval: interval,
            sign_below_first: 0,
            sign_after_last: 0,
        };
    }

    let mut zeros = Vec::new();
    let mut i = 0;
    while i + 1 < grid.len() {
        let (ga, gb) = (g[i], g[i + 1]);
        if ga == 0.0 {
            i += 1;
            continue;
        }
        if gb == 0.0 {
            // exact grid hit: look past it for the sign on the other side
            if let Some(k) = (i + 2..grid.len()).find(|&k| g[k] != 0.0) {
                if sign(g[k]) != sign(ga) {
                    zeros.push(make_crossing(d, n, grid[i + 1], ga));
                }
                i = k;
            } else {
                i = grid.len();
            }
            continue;
        }
        if sign(ga) != sign(gb) {
            let r = bisect(d, n, grid[i], grid[i + 1], ga);
            zeros.push(make_crossing(d, n, r, ga));
        }
        i += 1;
    }

    let first_nonzero = g.iter().copied().find(|v| *v != 0.0).unwrap_or(0.0);
    let last_nonzero = g.iter().rev().copied().find(|v| *v != 0.0).unwrap_or(0.0);
    CrossingSet {
        zeros,
        degenerate: false,
        scan_interval: interval,
        sign_below_first: sign(first_nonzero),
        sign_after_last: sign(last_nonzero),
    }
}

fn make_crossing(d: &RadialDensity, n: u32, r: f64, g_before: f64) -> Crossing {
    let slope = d.crossing_slope(n, r);
    Crossing {
        r,
        transversal: slope.abs() > TRANSVERSAL_TOL,
        // drift = -g
        sign_change: if g_before > 0.0 { SignChange::MinusToPlus } else { SignChange::PlusToMinus },
    }
}

fn bisect(d: &RadialDensity, n: u32, mut lo: f64, mut hi: f64, g_lo: f64) -> f64 {
    let lo_positive = g_lo > 0.0;
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let gm = d.crossing_function(n, mid);
        let slope = d.crossing_slope(n, mid);
        if gm.abs() < 1e-12 * slope.abs().max(1.0) || hi - lo <= 4.0 * f64::EPSILON * mid {
            break;
        }
        if (gm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mid
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleVerdict {
    PsiMinimalAttractor,
    PsiMinimalRepulsor,
    PsiMinimalSemistable,
    Shrinking,
    Expanding,
}

impl CircleVerdict {
    pub fn is_minimal(self) -> bool {
        matches!(
            self,
            CircleVerdict::PsiMinimalAttractor | CircleVerdict::PsiMinimalRepulsor | CircleVerdict::PsiMinimalSemistable
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CircleVerdict::PsiMinimalAttractor => "psi_minimal_attractor",
            CircleVerdict::PsiMinimalRepulsor => "psi_minimal_repulsor",
            CircleVerdict::PsiMinimalSemistable => "psi_minimal_semistable",
            CircleVerdict::Shrinking => "shrinking",
            CircleVerdict::Expanding => "expanding",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleClass {
    pub verdict: CircleVerdict,
    /// `-(n/r + psi'(r))`
    pub drift: f64,
}

/// Classify the origin-centred sphere of radius `r`.
pub fn classify_circle(d: &RadialDensity, n: u32, r: f64) -> Result<CircleClass> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let drift = -d.crossing_function(n, r);
    let verdict = if drift.abs() < MINIMAL_TOL {
        let slope = -d.crossing_slope(n, r);
        if slope < -MINIMAL_TOL {
            CircleVerdict::PsiMinimalAttractor
        } else if slope > MINIMAL_TOL {
            CircleVerdict::PsiMinimalRepulsor
        } else {
            CircleVerdict::PsiMinimalSemistable
        }
    } else if drift < 0.0 {
        CircleVerdict::Shrinking
    } else {
        CircleVerdict::Expanding
    };
    Ok(CircleClass { verdict, drift })
}

/// Strict stability of a psi-minimal sphere from the second variation of
/// weighted area: `psi''(r) > n / r^2`.
pub fn stability_second_variation(d: &RadialDensity, n: u32, r: f64) -> Result<bool> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let residual = d.crossing_function(n, r).abs();
    if residual >= MINIMAL_TOL {
        return Err(Error::NotMinimalRadius { r, residual });
    }
    let nf = n as f64;
    Ok(d.eval_unchecked(r).d2 > nf / (r * r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_examples() {
        let v = RadialDensity::critical_log().eval(2.0).unwrap();
        assert_eq!((v.d1, v.d2), (-0.5, 0.25));
        let v = RadialDensity::gaussian(1.0).eval(3.0).unwrap();
        assert_eq!((v.d1, v.d2), (-3.0, -1.0));
        let v = RadialDensity::quadratic_log(2.0, -2.0, 0.0).eval(1.0).unwrap();
        assert_eq!((v.d1, v.d2), (-1.0, 3.0));
    }

    #[test]
    fn eval_at_origin() {
        assert_eq!(
            RadialDensity::critical_log().eval(0.0),
            Err(Error::EvalAtSingularity { r: 0.0 })
        );
        assert!(RadialDensity::quadratic_log(1.0, -2.0, 0.0).eval(0.0).is_err());
        let v = RadialDensity::gaussian(2.0).eval(0.0).unwrap();
        assert_eq!((v.psi, v.d1, v.d2), (0.0, 0.0, -4.0));
        assert!(RadialDensity::quadratic_log(1.0, 0.0, 0.0).eval(0.0).is_ok());
    }

    #[test]
    fn singular_flags() {
        assert!(RadialDensity::critical_log().is_singular_at_origin());
        assert!(RadialDensity::quadratic_log(1.0, 0.5, 0.0).is_singular_at_origin());
        assert!(!RadialDensity::quadratic_log(1.0, 0.0, 3.0).is_singular_at_origin());
        assert!(!RadialDensity::gaussian(1.0).is_singular_at_origin());
        assert!(!RadialDensity::flat().is_singular_at_origin());
        // sign of psi' near the origin follows the log coefficient
        let pos = RadialDensity::quadratic_log(1.0, 0.5, 0.0).eval(1e-8).unwrap();
        let neg = RadialDensity::quadratic_log(1.0, -0.5, 0.0).eval(1e-8).unwrap();
        assert!(pos.d1 > 1e6 && neg.d1 < -1e6);
    }

    #[test]
    fn grad_examples() {
        let g = RadialDensity::critical_log().grad_psi(Vec2::new(2.0, 0.0)).unwrap();
        assert_eq!(g, Vec2::new(-0.5, 0.0));
        let g = RadialDensity::gaussian(1.0).grad_psi(Vec2::new(0.0, 3.0)).unwrap();
        assert_eq!(g, Vec2::new(0.0, -3.0));
        let g = RadialDensity::flat().grad_psi(Vec2::new(0.3, -7.0)).unwrap();
        assert_eq!(g, Vec2::ZERO);
        assert!(RadialDensity::critical_log().grad_psi(Vec2::ZERO).is_err());
    }

    #[test]
    fn hessian_examples() {
        let d = RadialDensity::critical_log();
        let p = Vec2::new(1.0, 0.0);
        assert_eq!(d.hess_psi_nn(p, Vec2::new(1.0, 0.0)).unwrap(), 1.0);
        assert_eq!(d.hess_psi_nn(p, Vec2::new(0.0, 1.0)).unwrap(), -1.0);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = RadialDensity::gaussian(1.0);
        let p = Vec2::new(2.0, 0.0);
        let nrm = Vec2::new(s, s);
        let h = g.hess_psi_nn(p, nrm).unwrap();
        assert_relative_eq!(h, -1.0, epsilon = 1e-12);
        // second difference of psi along N
        let psi = |q: Vec2| g.eval(q.norm()).unwrap().psi;
        let e = 1e-4;
        let fd = (psi(p + nrm * e) - 2.0 * psi(p) + psi(p - nrm * e)) / (e * e);
        assert_relative_eq!(h, fd, epsilon = 1e-6);

        assert!(d.hess_psi_nn(p, Vec2::new(1.0, 1.0)).is_err());
    }

    #[test]
    fn crossing_examples() {
        let c = find_crossings(&RadialDensity::gaussian(1.0), 1, 0.01, 10.0, DEFAULT_GRID_POINTS);
        assert_eq!(c.zeros.len(), 1);
        assert_relative_eq!(c.zeros[0].r, 1.0, epsilon = 1e-12);
        assert!(c.zeros[0].transversal);
        assert_eq!(c.zeros[0].sign_change, SignChange::MinusToPlus);
        assert!(!c.degenerate);

        let c = find_crossings(&RadialDensity::anti_gaussian(1.0), 1, 0.01, 10.0, DEFAULT_GRID_POINTS);
        assert!(c.is_empty() && !c.degenerate);

        let c = find_crossings(&RadialDensity::critical_log(), 1, 0.01, 10.0, DEFAULT_GRID_POINTS);
        assert!(c.degenerate && c.is_empty());

        // -ln r is not critical for spheres of dimension 2
        let c = find_crossings(&RadialDensity::critical_log(), 2, 0.01, 10.0, DEFAULT_GRID_POINTS);
        assert!(!c.degenerate && c.is_empty());
    }

    #[test]
    fn crossing_refinement_residual() {
        let d = RadialDensity::quadratic_log(0.7, -3.1, 0.0);
        let c = find_crossings(&d, 1, 1e-3, 20.0, DEFAULT_GRID_POINTS);
        assert_eq!(c.zeros.len(), 1);
        let r = c.zeros[0].r;
        assert!(d.crossing_function(1, r).abs() < 1e-12 * d.crossing_slope(1, r).abs().max(1.0));
        assert_relative_eq!(r, (-2.0 * (-3.1 + 1.0) / 0.7f64).sqrt(), epsilon = 1e-10);
        assert!(c.zeros[0].is_attractor());
    }

    #[test]
    fn classify_examples() {
        let c = classify_circle(&RadialDensity::gaussian(1.0), 1, 1.0).unwrap();
        assert_eq!(c.verdict, CircleVerdict::PsiMinimalRepulsor);
        let c = classify_circle(&RadialDensity::quadratic_log(2.0, -2.0, 0.0), 1, 1.0).unwrap();
        assert_eq!(c.verdict, CircleVerdict::PsiMinimalAttractor);
        let c = classify_circle(&RadialDensity::anti_gaussian(1.0), 1, 5.0).unwrap();
        assert_eq!(c.verdict, CircleVerdict::Shrinking);
        assert_relative_eq!(c.drift, -(0.2 + 5.0), epsilon = 1e-15);
        let c = classify_circle(&RadialDensity::critical_log(), 1, 3.0).unwrap();
        assert_eq!(c.verdict, CircleVerdict::PsiMinimalSemistable);
    }

    #[test]
    fn stability_examples() {
        let q = RadialDensity::quadratic_log(2.0, -2.0, 0.0);
        assert!(stability_second_variation(&q, 1, 1.0).unwrap());
        assert!(!stability_second_variation(&RadialDensity::gaussian(1.0), 1, 1.0).unwrap());
        for r in [0.3, 1.0, 4.0] {
            assert!(!stability_second_variation(&RadialDensity::critical_log(), 1, r).unwrap());
        }
        assert!(matches!(
            stability_second_variation(&q, 1, 2.0),
            Err(Error::NotMinimalRadius { .. })
        ));
    }

    #[test]
    fn area_law_coefficients() {
        let law = RadialDensity::anti_gaussian(1.0).area_law().unwrap();
        assert_eq!(law.lambda, 2.0);
        let law = RadialDensity::critical_log().area_law().unwrap();
        assert_eq!((law.lambda, law.log_coeff), (0.0, -1.0));
        for d in [RadialDensity::gaussian(0.7), RadialDensity::quadratic_log(1.3, -0.4, 2.0)] {
            let law = d.area_law().unwrap();
            for r in [0.2, 1.0, 3.0] {
                let v = d.eval(r).unwrap();
                assert_relative_eq!(v.d2 + v.d1 / r, law.lambda, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn spline_reproduces_cubic() {
        // natural spline of a linear function is exact
        let r: Vec<f64> = (0..20).map(|i| i as f64 * 0.25).collect();
        let psi: Vec<f64> = r.iter().map(|x| 2.0 - 0.5 * x).collect();
        let d = RadialDensity::tabulated(r, psi, false).unwrap();
        let v = d.eval(1.37).unwrap();
        assert_relative_eq!(v.psi, 2.0 - 0.5 * 1.37, epsilon = 1e-13);
        assert_relative_eq!(v.d1, -0.5, epsilon = 1e-13);
        assert!(v.d2.abs() < 1e-12);
        // linear extrapolation past the table
        let v = d.eval(10.0).unwrap();
        assert_relative_eq!(v.psi, -3.0, epsilon = 1e-12);
    }

    #[test]
    fn spline_approximates_smooth_profile() {
        let r: Vec<f64> = (0..=400).map(|i| i as f64 * 0.0125).collect();
        let psi: Vec<f64> = r.iter().map(|x| -0.5 * x * x).collect();
        let d = RadialDensity::tabulated(r, psi, false).unwrap();
        for x in [0.5, 1.0, 2.5, 4.0] {
            let v = d.eval(x).unwrap();
            assert_relative_eq!(v.d1, -x, epsilon = 1e-4);
        }
        let c = find_crossings(&d, 1, 0.01, 4.5, DEFAULT_GRID_POINTS);
        assert_eq!(c.zeros.len(), 1);
        assert!((c.zeros[0].r - 1.0).abs() < 1e-5);
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(RadialDensity::tabulated(vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4], false).is_err());
        assert!(RadialDensity::tabulated(vec![0.0, 1.0, 2.0], vec![0.0; 3], false).is_err());
        assert!(RadialDensity::tabulated(vec![0.0, 1.0, 2.0, 3.0], vec![0.0; 5], false).is_err());
    }
}
