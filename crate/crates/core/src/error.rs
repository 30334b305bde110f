use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("interval endpoints out of order: {lo} > {hi}")]
    Ordering { lo: f64, hi: f64 },

    #[error("{what} = {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("measure is not normalized: sum of weighted evaluations is {value} on cell ({cell_lo}, {cell_hi})")]
    NotNormalized {
        cell_lo: f64,
        cell_hi: f64,
        value: f64,
    },

    #[error("quadrature stopped after {panels} panels with estimated error {achieved:e} (target {target:e})")]
    Quadrature {
        achieved: f64,
        target: f64,
        panels: usize,
    },

    #[error("empty dataset")]
    EmptyData,
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
