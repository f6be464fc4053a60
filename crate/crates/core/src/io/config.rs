//! Experiment configuration files.

use crate::curve::{DiscreteCurve, MIN_VERTICES};
use crate::density::{Family, RadialDensity, Tabulated};
use crate::error::{Error, Result};
use crate::flow::FlowConfig;
use crate::geom::Vec2;
use serde::{Deserialize, Serialize};
use std::path::Path;

fn one() -> u32 {
    1
}

fn default_vertices() -> usize {
    256
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensitySpec {
    CriticalLog {
        #[serde(default, skip_serializing_if = "is_zero")]
        offset: f64,
        #[serde(default = "one")]
        n: u32,
    },
    Gaussian {
        mu: f64,
        #[serde(default = "one")]
        n: u32,
    },
    AntiGaussian {
        mu: f64,
        #[serde(default = "one")]
        n: u32,
    },
    QuadraticLog {
        lambda: f64,
        a: f64,
        #[serde(default, skip_serializing_if = "is_zero")]
        b: f64,
        #[serde(default = "one")]
        n: u32,
    },
    Flat {
        #[serde(default = "one")]
        n: u32,
    },
    Tabulated {
        r: Vec<f64>,
        psi: Vec<f64>,
        #[serde(default)]
        singular_at_origin: bool,
        #[serde(default = "one")]
        n: u32,
    },
}

impl DensitySpec {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut finite = |name: &str, x: f64| {
            if !x.is_finite() {
                v.push(format!("density.{name} must be finite, got {x}"));
            }
        };
        match self {
            DensitySpec::CriticalLog { offset, .. } => finite("offset", *offset),
            DensitySpec::Gaussian { mu, .. } | DensitySpec::AntiGaussian { mu, .. } => {
                finite("mu", *mu);
                if !(*mu > 0.0) {
                    v.push(format!("density.mu must be positive, got {mu}"));
                }
            }
            DensitySpec::QuadraticLog { lambda, a, b, .. } => {
                finite("lambda", *lambda);
                finite("a", *a);
                finite("b", *b);
            }
            DensitySpec::Flat { .. } => {}
            DensitySpec::Tabulated { r, psi, singular_at_origin, .. } => {
                if let Err(e) = Tabulated::new(r.clone(), psi.clone(), *singular_at_origin) {
                    v.push(format!("density table: {e}"));
                }
            }
        }
        if self.dim() == 0 {
            v.push("density.n must be at least 1".into());
        }
        v
    }

    pub fn dim(&self) -> u32 {
        match *self {
            DensitySpec::CriticalLog { n, .. }
            | DensitySpec::Gaussian { n, .. }
            | DensitySpec::AntiGaussian { n, .. }
            | DensitySpec::QuadraticLog { n, .. }
            | DensitySpec::Flat { n }
            | DensitySpec::Tabulated { n, .. } => n,
        }
    }

    pub fn build(&self) -> Result<RadialDensity> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(Error::Validation(v));
        }
        let d = match self {
            DensitySpec::CriticalLog { offset, .. } => RadialDensity::new(Family::CriticalLog { offset: *offset }),
            DensitySpec::Gaussian { mu, .. } => RadialDensity::gaussian(*mu),
            DensitySpec::AntiGaussian { mu, .. } => RadialDensity::anti_gaussian(*mu),
            DensitySpec::QuadraticLog { lambda, a, b, .. } => RadialDensity::quadratic_log(*lambda, *a, *b),
            DensitySpec::Flat { .. } => RadialDensity::flat(),
            DensitySpec::Tabulated { r, psi, singular_at_origin, .. } => {
                RadialDensity::tabulated(r.clone(), psi.clone(), *singular_at_origin)?
            }
        };
        Ok(d.with_dim(self.dim()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    /// `r(theta) = rho0 + sum a_m cos(m theta)` about `center`.
    Polar {
        rho0: f64,
        #[serde(default)]
        modes: Vec<(u32, f64)>,
        #[serde(default)]
        center: [f64; 2],
        #[serde(default = "default_vertices")]
        n_vertices: usize,
    },
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
        #[serde(default, skip_serializing_if = "is_zero")]
        rotation: f64,
        #[serde(default = "default_vertices")]
        n_vertices: usize,
    },
    /// JSON file holding `[[x, y], ...]` or `{"vertices": [[x, y], ...]}`.
    PolygonFile { path: String },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolygonFile {
    Bare(Vec<Vec2>),
    Wrapped { vertices: Vec<Vec2> },
}

impl CurveSpec {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut check_n = |n: usize| {
            if n < MIN_VERTICES {
                v.push(format!("curve.n_vertices must be at least {MIN_VERTICES}, got {n}"));
            }
        };
        match self {
            CurveSpec::Polar { rho0, modes, center, n_vertices } => {
                check_n(*n_vertices);
                let amp: f64 = modes.iter().map(|m| m.1.abs()).sum();
                if !(*rho0 > amp) {
                    v.push(format!("curve.rho0 = {rho0} must exceed the total mode amplitude {amp}"));
                }
                if !center.iter().chain(modes.iter().map(|m| &m.1)).all(|x| x.is_finite()) {
                    v.push("curve values must be finite".into());
                }
            }
            CurveSpec::Ellipse { a, b, center, rotation, n_vertices } => {
                check_n(*n_vertices);
                if !(*a > 0.0 && *b > 0.0) {
                    v.push(format!("curve semi-axes must be positive, got ({a}, {b})"));
                }
                if !center.iter().chain([rotation]).all(|x| x.is_finite()) {
                    v.push("curve values must be finite".into());
                }
            }
            CurveSpec::PolygonFile { path } => {
                if path.is_empty() {
                    v.push("curve.path must not be empty".into());
                }
            }
        }
        v
    }

    /// Vertex count requested by the spec, if it states one.
    pub fn n_vertices(&self) -> Option<usize> {
        match *self {
            CurveSpec::Polar { n_vertices, .. } | CurveSpec::Ellipse { n_vertices, .. } => Some(n_vertices),
            CurveSpec::PolygonFile { .. } => None,
        }
    }

    /// Builds the curve; relative polygon paths resolve against `base`.
    pub fn build(&self, base: &Path) -> Result<DiscreteCurve> {
        match self {
            CurveSpec::Polar { rho0, modes, center, n_vertices } => {
                DiscreteCurve::from_polar(*rho0, modes, Vec2::from(*center), *n_vertices)
            }
            CurveSpec::Ellipse { a, b, center, rotation, n_vertices } => {
                DiscreteCurve::ellipse(*a, *b, Vec2::from(*center), *rotation, *n_vertices)
            }
            CurveSpec::PolygonFile { path } => {
                let full = base.join(path);
                let text = std::fs::read_to_string(&full).map_err(|e| Error::Io(format!("{}: {e}", full.display())))?;
                let parsed: PolygonFile = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse { path: full.display().to_string(), message: e.to_string() })?;
                let vertices = match parsed {
                    PolygonFile::Bare(v) | PolygonFile::Wrapped { vertices: v } => v,
                };
                DiscreteCurve::new(vertices)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSpec {
    pub cfl_factor: f64,
    pub t_max: f64,
    pub max_steps: usize,
    pub epsilon_len: f64,
    pub epsilon_kpsi: f64,
    pub dwell: usize,
    pub snapshot_every: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin_guard: Option<f64>,
    /// Defaults to the curve's vertex count, or 256.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_budget: Option<usize>,
    pub resample_every: usize,
}

impl Default for FlowSpec {
    fn default() -> Self {
        let f = FlowConfig::default();
        Self {
            cfl_factor: f.cfl_factor,
            t_max: f.t_max,
            max_steps: f.max_steps,
            epsilon_len: f.collapse_length_fraction,
            epsilon_kpsi: f.convergence_kpsi_tol,
            dwell: f.dwell,
            snapshot_every: 10,
            origin_guard: None,
            vertex_budget: None,
            resample_every: f.resample_every,
        }
    }
}

impl FlowSpec {
    pub fn to_flow_config(&self, curve: &CurveSpec) -> FlowConfig {
        FlowConfig {
            cfl_factor: self.cfl_factor,
            resample_every: self.resample_every,
            vertex_budget: self.vertex_budget.or(curve.n_vertices()).unwrap_or_else(default_vertices),
            collapse_length_fraction: self.epsilon_len,
            convergence_kpsi_tol: self.epsilon_kpsi,
            dwell: self.dwell,
            t_max: self.t_max,
            max_steps: self.max_steps,
            origin_guard: self.origin_guard,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub id: String,
    pub density: DensitySpec,
    pub curve: CurveSpec,
    #[serde(default)]
    pub flow: FlowSpec,
    #[serde(default)]
    pub outputs: Outputs,
}

impl ExperimentConfig {
    pub fn flow_config(&self) -> FlowConfig {
        self.flow.to_flow_config(&self.curve)
    }

    /// Every violated constraint, across all sections.
    pub fn violations(&self) -> Vec<String> {
        let mut v = self.density.violations();
        v.extend(self.curve.violations());
        v.extend(self.flow_config().violations().into_iter().map(|s| format!("flow: {s}")));
        if self.flow.snapshot_every == 0 {
            v.push("flow: snapshot_every must be positive".into());
        }
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parses JSON with defaults filled in; reports the key path of the first
/// structural error, or every violated constraint.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = parse_json(text)?;
    let v = cfg.violations();
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    Ok(cfg)
}

/// A density spec on its own, as taken by the phase-portrait command.
pub fn parse_density(text: &str) -> Result<DensitySpec> {
    let d: DensitySpec = parse_json(text)?;
    let v = d.violations();
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    Ok(d)
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| Error::Parse { path: ".".into(), message: e.to_string() })?;
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"density": {"family": "critical_log"}, "curve": {"shape": "polar", "rho0": 1.0}}"#;

    #[test]
    fn defaults_applied() {
        let cfg = parse_config(MINIMAL).unwrap();
        let f = cfg.flow_config();
        assert_eq!(f.vertex_budget, 256);
        assert_eq!(f.cfl_factor, 0.25);
        assert_eq!(cfg.curve.n_vertices(), Some(256));
    }

    #[test]
    fn negative_lambda_is_legal() {
        let text = r#"{"density": {"family": "quadratic_log", "lambda": -1, "a": 0.5},
                       "curve": {"shape": "ellipse", "a": 1, "b": 0.5, "center": [2, 0]}}"#;
        let cfg = parse_config(text).unwrap();
        assert!(cfg.density.build().is_ok());
    }

    #[test]
    fn unknown_key_is_named() {
        let text = r#"{"density": {"family": "flat"}, "curve": {"shape": "polar", "rho0": 1.0},
                       "flow": {"vicosity": 2}}"#;
        match parse_config(text) {
            Err(Error::Parse { path, message }) => {
                assert!(message.contains("vicosity"), "{message}");
                assert!(path.starts_with("flow"), "{path}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn all_violations_listed() {
        let text = r#"{"density": {"family": "gaussian", "mu": -1},
                       "curve": {"shape": "polar", "rho0": 0.5, "modes": [[2, 0.6]], "n_vertices": 4},
                       "flow": {"cfl_factor": 0}}"#;
        match parse_config(text) {
            Err(Error::Validation(v)) => assert_eq!(v.len(), 5, "{v:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let text = r#"{"id": "x", "density": {"family": "tabulated", "r": [0, 1, 2, 3], "psi": [0, 0.5, 2, 4.5]},
                       "curve": {"shape": "ellipse", "a": 1, "b": 0.5, "rotation": 0.3},
                       "flow": {"t_max": 2, "origin_guard": 1e-3},
                       "outputs": {"trace": "t.csv"}}"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(parse_config(&cfg.to_json()).unwrap(), cfg);
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(parse_config(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn trailing_garbage_rejected() {
        assert!(matches!(parse_config(&format!("{MINIMAL} x")), Err(Error::Parse { .. })));
    }
}
