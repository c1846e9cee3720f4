use thiserror::Error;

use crate::graph::{EdgeLabel, Terminal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid size {0}: a square rhomboid needs at least one basic vertex")]
    InvalidSize(u32),

    #[error("no directed path from {src} to {dst}")]
    EmptySubgraph { src: Terminal, dst: Terminal },

    #[error("{dst} does not follow {src}")]
    Ordering { src: Terminal, dst: Terminal },

    #[error("{terminal} is outside SR({n})")]
    Range { terminal: Terminal, n: u32 },

    #[error("{count} monomials exceed the capacity limit {limit}")]
    Capacity { count: String, limit: u64 },

    #[error("label {0} has no value in the assignment")]
    UnboundLabel(EdgeLabel),

    #[error("split requested for {src}..{dst}, which is a base case")]
    BaseCaseExpected { src: Terminal, dst: Terminal },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime {prime} is too small for polynomials of degree {degree}")]
    PrimeTooSmall { prime: u64, degree: u64 },

    #[error("{0}")]
    Domain(String),

    #[error("closed form for n = {n} is not an integer: {value}")]
    Integrity { n: u64, value: String },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: &'static str },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
