use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("density is singular at the origin and cannot be evaluated at r = {r}")]
    EvalAtSingularity { r: f64 },

    #[error("r = {r} is not a psi-minimal radius (|psi' + n/r| = {residual:e})")]
    NotMinimalRadius { r: f64, residual: f64 },

    #[error("base radius {rho0} does not exceed the total mode amplitude {amplitude}")]
    DegenerateRadius { rho0: f64, amplitude: f64 },

    #[error("vertex at distance {distance:e} from the origin is inside the guard radius {guard:e}")]
    SingularProximity { distance: f64, guard: f64 },

    #[error("step rejected {attempts} times at t = {t}")]
    StepRejectedRepeatedly { t: f64, attempts: usize },

    #[error("curve self-intersects after the step at t = {t}")]
    SelfIntersection { t: f64 },

    #[error("no collapse was detected in the trace")]
    NoCollapseDetected,

    #[error("no closed form is available for {0}")]
    NoClosedForm(String),

    #[error("radius exceeded {limit:e} at t = {t}")]
    BlowUp { t: f64, limit: f64 },

    #[error("time {t_hat} is outside the domain of the time map (must be below {bound})")]
    TimeOutOfDomain { t_hat: f64, bound: f64 },

    #[error("the curve does not fall into a global-existence case")]
    NotGlobalCase,

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("winding number sum {0} is not close to an integer")]
    WindingInconsistent(f64),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("invalid config: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
