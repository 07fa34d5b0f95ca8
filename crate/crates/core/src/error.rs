use crate::Complex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point {z} (t = {t:?}) leaves the domain")]
    DomainExit { z: Complex, t: Option<f64> },

    #[error("non-finite value at {z}")]
    NonFinite { z: Complex },

    #[error("{what} did not converge (last change {delta:e})")]
    NonConvergent { what: &'static str, delta: f64 },

    #[error("value {value:e} exceeds the overflow guard; the function is numerically outside the space")]
    Unbounded { value: f64 },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("trajectory escaped the domain at t = {tau}")]
    EscapedDomain { tau: f64 },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("declared zero {zero} moves under the flow (drift {drift:e})")]
    ZeroNotFixed { zero: Complex, drift: f64 },

    #[error("quotient limit {quotient} at zero {zero} disagrees with derivative power {power}")]
    OrderMismatch {
        zero: Complex,
        quotient: Complex,
        power: Complex,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("sup-norm estimate {value:e} exceeds the overflow guard")]
    UnboundedSignal { value: f64 },

    #[error("no operator-norm bound available: {0}")]
    UnsupportedSpaceBound(String),

    #[error("expression error at {pos}: {msg}")]
    Expr { pos: usize, msg: String },

    #[error("config error at `{path}`: {msg}")]
    Config { path: String, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
