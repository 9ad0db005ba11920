use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("rows have differing lengths")]
    Ragged,
}

/// Construction, parsing and transformation failures for signed digraphs.
/// Node numbers in messages are 1-based, as in the edge-list format.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("weight matrix must be {n}x{n}")]
    Shape { n: usize },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: usize },
    #[error("self-loop on node {node}: diagonal weight must be zero")]
    NonZeroDiagonal { node: usize },
    #[error("line {line}: cannot parse {what} {token:?}")]
    Parse {
        line: usize,
        what: &'static str,
        token: String,
    },
    #[error("line {line}: expected \"src dst weight\"")]
    Malformed { line: usize },
    #[error("line {line}: duplicate edge {src} -> {dst}")]
    DuplicateEdge { line: usize, src: usize, dst: usize },
    #[error("line {line}: zero weight on edge {src} -> {dst}")]
    ZeroWeight { line: usize, src: usize, dst: usize },
    #[error("line {line}: node index {index} out of range 1..={n}")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("non-finite weight on edge {src} -> {dst}")]
    NonFinite { src: usize, dst: usize },
    #[error("node index {index} out of range 1..={n}")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("node set is empty")]
    EmptyNodeSet,
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("{0} is not a closed root set: a non-root node feeds into it")]
    InvalidRootSet(String),
    #[error("invalid JSON graph: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("graph is not quasi-strongly connected")]
    NotQuasiStronglyConnected,
    #[error("no zero eigenvalue (condition C3)")]
    NoZeroEigenvalue,
    #[error("gauge has length {found}, expected {expected}")]
    GaugeLength { expected: usize, found: usize },
    #[error("gauge does not certify balance of the root subgraph")]
    GaugeMismatch,
    #[error("laplacian view carries no root-ordered blocks")]
    MissingBlocks,
    #[error("det(L_nr + B) vanishes; the root classification is inconsistent")]
    SingularFollowerBlock,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("initial state has length {found}, graph has {expected} nodes")]
    LengthMismatch { expected: usize, found: usize },
    #[error("time step {dt} exceeds the stability bound {bound}")]
    UnstableStep { dt: f64, bound: f64 },
    #[error("invalid integration parameters: {0}")]
    InvalidParameters(String),
    #[error("state diverged (non-finite value) at t = {t}")]
    Diverged { t: f64 },
    #[error("trajectory did not converge by t = {t_end}")]
    NotConverged { t_end: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BehaviorError {
    #[error("initial state has length {found}, graph has {expected} nodes")]
    LengthMismatch { expected: usize, found: usize },
    #[error("no well-defined limit: the zero eigenvalue is not semisimple")]
    NoWellDefinedLimit,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("conflicting options: {0}")]
    Conflict(String),
}
