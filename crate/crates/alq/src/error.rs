use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected input: non-squarefree level, odd weight, M not dividing N, etc.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A closed-form formula was asked to evaluate outside its hypotheses.
    /// The caller is expected to fall back to the unconditional route.
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),

    /// An internal exactness invariant fired (e.g. a trace that should be an
    /// integer came out with a nontrivial denominator). Never silently rounded.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("cache file error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
