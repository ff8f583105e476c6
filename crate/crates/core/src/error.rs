use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    InvalidParams { name: &'static str, reason: String },

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("closed form requires lambda' >= ln 4 + margin = {threshold:.6}, got lambda' = {lambda_prime:.6}")]
    Validity { lambda_prime: f64, threshold: f64 },

    #[error("transform denominator vanishes near z = {re}{im:+}i (|den| = {magnitude:e})")]
    Singularity { re: f64, im: f64, magnitude: f64 },

    #[error("coefficient extraction aliasing bound {bound:e} exceeds {limit:e}")]
    Aliasing { bound: f64, limit: f64 },

    #[error("derivative at z = 1 unstable: Richardson estimates differ by {rel_diff:e} (relative)")]
    DerivativeInstability { rel_diff: f64 },

    #[error("{what} disagrees with its cross-check: {a} vs {b} (relative {rel:e})")]
    CrossCheck {
        what: &'static str,
        a: f64,
        b: f64,
        rel: f64,
    },

    #[error("value out of representable range: {0}")]
    OutOfRange(String),

    #[error("only {observed} dead-end events observed, need at least {required}")]
    InsufficientDeadEnds { observed: u64, required: u64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid value for {key} = {value}: {reason}")]
    ConfigValue { key: String, value: String, reason: String },

    #[error("unknown key `{key}` in [{section}]{}", suggestion.as_ref().map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default())]
    UnknownKey {
        section: String,
        key: String,
        suggestion: Option<String>,
    },

    #[error("unknown recovery strategy `{0}`")]
    UnknownStrategy(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            name,
            reason: reason.into(),
        }
    }
}
