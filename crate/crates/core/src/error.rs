use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular (det = 0)")]
    Singular,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhaseError {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("placement index {index} out of range or not a monomial term")]
    PlacementRange { index: usize },
    #[error("placement puts two auxiliaries on term {index}")]
    PlacementDuplicate { index: usize },
    #[error("placement violates rule a: every monomial involving variable {var} is modified")]
    RuleA { var: String },
    #[error("placement violates rule b: every monomial of polynomial {poly} is modified")]
    RuleB { poly: usize },
    #[error("phase is {balance} (L = {terms}, variables = {vars}); a square matrix is required")]
    NotSquare { balance: String, terms: usize, vars: usize },
    #[error("exponent matrix is degenerate (det = 0) for this placement")]
    Degenerate,
    #[error("no admissible auxiliary placement makes the system simpliciable")]
    NotSimpliciable,
    #[error("abundant system (L = {terms} < {vars} variables) is not handled")]
    Abundant { terms: usize, vars: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MellinError {
    #[error("parameter vector {name} has length {got}, expected {want}")]
    ParamLength { name: &'static str, got: usize, want: usize },
    #[error("block index {0} out of range")]
    BlockIndex(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("empty point set")]
    Empty,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("polytope is not full-dimensional (dim {dim} in ambient {ambient})")]
    Degenerate { dim: usize, ambient: usize },
    #[error("point lies outside the cone over the polytope")]
    OutsideCone,
    #[error("integer overflow in exact polytope arithmetic")]
    Overflow,
    #[error("mixed-volume normalization failed: {0}")]
    Normalization(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HornError {
    #[error("block index {0} out of range")]
    BlockIndex(usize),
    #[error("all sampled points were degenerate; reseed")]
    Sampling,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Mellin(#[from] MellinError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectraError {
    #[error("structural weight count mismatch: {0}")]
    WeightCount(String),
    #[error("systems do not present the same term set: {0}")]
    Mismatch(String),
    #[error("monomial lies outside the cone over the Newton simplex")]
    OutsideCone,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Mellin(#[from] MellinError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GkzError {
    #[error("A-matrix has rank {rank}, expected k+N = {want}")]
    Rank { rank: usize, want: usize },
    #[error("block shape mismatch: {0}")]
    Shape(String),
    #[error("simplex columns {0:?} are not linearly independent")]
    SingularSimplex(Vec<usize>),
    #[error("volume routes disagree: {0}")]
    VolumeMismatch(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MirrorError {
    #[error("invalid mirror input: {0}")]
    Input(String),
    #[error("no positive weight solution for block {0}")]
    Weight(usize),
    #[error("condition {which} fails: {detail}")]
    Condition { which: &'static str, detail: String },
    #[error("structural check failed: {0}")]
    Structure(String),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("schema error at {location}: {msg}")]
    Schema { location: String, msg: String },
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("{0}")]
    Usage(String),
}

/// Umbrella error for the driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Mellin(#[from] MellinError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Horn(#[from] HornError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Gkz(#[from] GkzError),
    #[error(transparent)]
    Mirror(#[from] MirrorError),
    #[error(transparent)]
    Io(#[from] IoError),
}
