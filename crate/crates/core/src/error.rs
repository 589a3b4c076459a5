use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph input: {0}")]
    ParseGraph(String),
    #[error("vertex index {index} out of range for {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("graph is not a forest: {0}")]
    NotAForest(String),
    #[error("empty graph")]
    EmptyGraph,
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("{what} exceeds cap {cap} (got {got})")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        got: usize,
    },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("division by zero field element")]
    DivisionByZero,
    #[error("field mismatch: operands live in different number fields")]
    FieldMismatch,
    #[error("malformed polynomial input: {0}")]
    ParsePoly(String),
    #[error("interval ({lo}, {hi}) does not isolate exactly one real root")]
    NonIsolating { lo: String, hi: String },
    #[error("gamma is undefined here (beta diverges)")]
    UndefinedGamma,
    #[error("prime-tree index only covers n <= {max_n}, need {needed}")]
    IndexTooShallow { max_n: usize, needed: usize },
    #[error("degree distribution: {0}")]
    BadDistribution(String),
    #[error("invalid subset: {0}")]
    BadSubset(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
