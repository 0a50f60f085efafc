use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A word is listed as a member of two different classes.
    #[error("word `{word}` is claimed by both class `{first}` and class `{second}`")]
    PartitionConflict {
        word: String,
        first: String,
        second: String,
    },

    #[error("malformed descriptor map: {0}")]
    MalformedMap(String),

    #[error("malformed frequency dictionary: {0}")]
    MalformedDictionary(String),

    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidEncoding { offset: usize },

    #[error("domain error: {0}")]
    Domain(String),

    /// Enumeration was asked for more tuples than the oracle guard allows.
    #[error("enumeration of {count} configurations exceeds the oracle limit of {limit}")]
    OracleTooLarge { count: String, limit: u64 },

    /// beta * (alpha + eps) <= 0: the occupation diverges.
    #[error("occupation diverges: beta*(alpha+eps) = {exponent} <= 0")]
    Divergence { exponent: f64 },

    #[error("no equilibrium: mean energy {mean} outside achievable range ({low}, {high})")]
    Infeasible { mean: f64, low: f64, high: f64 },

    #[error("equilibrium fit did not converge after {iterations} iterations (residual_N = {residual_n:e}, residual_E = {residual_e:e})")]
    Convergence {
        iterations: usize,
        residual_n: f64,
        residual_e: f64,
    },

    #[error("class `{0}` is occupied but has no informatibility assigned")]
    IncompleteAssignment(String),

    #[error("invalid compression rule: {0}")]
    InvalidRule(String),
}
