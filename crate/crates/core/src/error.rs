use thiserror::Error;

use crate::words::Letter;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} undefined on empty word")]
    EmptyWord(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    /// A construction precondition (uniformity, girth, isolated vertices)
    /// does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("pair equivalence undefined: girth {girth} < 3")]
    EquivalenceUndefined { girth: String },

    #[error("not a monoid: {0}")]
    NotAMonoid(String),

    #[error("not a two-sided ideal: {left}*{right} = {product} leaves the set")]
    NotAnIdeal {
        left: usize,
        right: usize,
        product: usize,
    },

    #[error("budget exceeded for {what}: need {needed}, budget {budget}{hint}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
        hint: &'static str,
    },

    #[error("letter {0} is not covered by the assignment")]
    UncoveredLetter(Letter),

    #[error("rewrite mismatch at position {0}")]
    RewriteMismatch(usize),

    /// A machine check of a structural claim failed.
    #[error("check failed: {0}")]
    Falsified(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
