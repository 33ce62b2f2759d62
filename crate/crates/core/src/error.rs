use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive (got {rows}x{cols})")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("{what} exceeds the size budget ({limit})")]
    SizeLimit { what: String, limit: usize },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("parity violation: k - x - y = {0} is odd")]
    Parity(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("rectangle is empty")]
    EmptyRectangle,
    #[error("entry ({row},{col}) inside a rectangle is 0")]
    NotARectangle { row: usize, col: usize },
    #[error("entry ({row},{col}) is 1 but not covered")]
    Uncovered { row: usize, col: usize },
    #[error("entry ({row},{col}) has coverage {total} < 1")]
    CoverageDeficit { row: usize, col: usize, total: String },
    #[error("weight {0} is outside [0,1]")]
    BadWeight(String),
    #[error("covering has no rectangles")]
    EmptyCovering,

    #[error("network contains a cycle")]
    Cycle,
    #[error("network: {0}")]
    MalformedNetwork(String),
    #[error("network has no maximal paths")]
    NoPaths,
    #[error("network depth profile is ({min},{max}), expected exactly {expected}")]
    WrongDepth { expected: usize, min: usize, max: usize },
    #[error("network does not express the matrix: entry ({row},{col}) differs")]
    DoesNotExpress { row: usize, col: usize },
    #[error("network is ambiguous: {paths} paths from input {col} to output {row}")]
    Ambiguous { row: usize, col: usize, paths: String },

    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit reached")]
    IterationLimit,

    #[error("matrix contains an all-1 {rows:?} x {cols:?} submatrix")]
    DenseWitness { rows: Vec<usize>, cols: Vec<usize> },
    #[error("set cover instance is infeasible: element {0} lies in no set")]
    InfeasibleCover(usize),
}
