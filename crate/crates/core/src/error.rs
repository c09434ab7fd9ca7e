use thiserror::Error;

/// Errors raised by graph construction, input parsing and argument validation.
///
/// Solver outcomes (degree violations, 4-cycles) are not errors; they are
/// reported through [`crate::solver::Certificate`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex pair must be distinct, got ({0}, {0})")]
    SameVertex(usize),
    #[error("vertex {v} outside 0..{n}")]
    BadVertex { v: usize, n: usize },
    #[error("demand length {got} does not match vertex count {n}")]
    DemandLength { got: usize, n: usize },
    #[error("demand {which}({vertex}) = {value} is below the minimum of 2")]
    DemandTooSmall {
        which: &'static str,
        vertex: usize,
        value: u32,
    },
    #[error("partition is malformed: {0}")]
    BadPartition(String),
    #[error("{what} is limited to n <= {max}, got n = {n}")]
    TooLarge {
        what: &'static str,
        n: usize,
        max: usize,
    },
    #[error("q = {0} is not a prime")]
    NotPrime(u64),
    #[error("unknown graph name {name:?}; supported: {supported}")]
    UnknownName {
        name: String,
        supported: &'static str,
    },
    #[error("tightness instance breached at vertex {vertex}: {reason}")]
    NotTight { vertex: usize, reason: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("edge list parse error on line {line}: {reason}")]
    EdgeList { line: usize, reason: String },
    #[error("demand document error: {0}")]
    Demands(String),
}

pub type Result<T> = std::result::Result<T, Error>;
