use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LabError {
    #[error("unknown function `{name}`; available: {}", available.join(", "))]
    UnknownFunction {
        name: String,
        available: Vec<String>,
    },

    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("integrand is not finite at t = {t}")]
    NonFiniteSample { t: f64 },

    #[error("function `{name}` has infinite support and no usable decay envelope")]
    EnvelopeUnavailable { name: String },

    #[error("no truncation meets the tail budget {eps_tail:e} for `{name}`")]
    TruncationUnachievable { name: String, eps_tail: f64 },

    #[error("grid too small: {reason}")]
    GridTooSmall { reason: String },

    #[error("bad grid spec `{spec}`: {reason}")]
    BadGridSpec { spec: String, reason: String },

    #[error(
        "no limit detected: stability {stability:e} exceeds {threshold:e} with monotone drift"
    )]
    NoLimitDetected { stability: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, LabError>;
