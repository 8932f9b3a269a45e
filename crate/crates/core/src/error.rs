use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("loops forbidden: edge {0}–{0}")]
    Loop(String),
    #[error("multi-edges forbidden: {0}–{1} appears more than once")]
    MultiEdge(String, String),
    #[error("length must be positive and finite (edge {from}–{to}: {length})")]
    NonPositiveLength { from: String, to: String, length: f64 },
    #[error("graph must be connected")]
    Disconnected,
    #[error("unknown vertex label {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("graph has no bonds")]
    Empty,
    #[error("invalid length mode: {0}")]
    LengthMode(String),
    #[error("bond index {index} out of range (B = {bonds})")]
    BondIndex { index: usize, bonds: usize },
    #[error("subdivision fraction must lie in (0,1), got {0}")]
    Fraction(f64),
    #[error("vertex degree must be at least 1")]
    ZeroDegree,
    #[error("vertex matrix for {vertex:?} must be {expected}×{expected}")]
    VertexMatrixShape { vertex: String, expected: usize },
    #[error("non-Neumann scattering matrix: det S = {re:+.3e}{im:+.3e}i")]
    NonNeumann { re: f64, im: f64 },
    #[error("graph too large: 2B = {0} exceeds the 64-arc limit")]
    TooManyArcs(usize),
    #[error("primitive oracle capped at n = {cap}, requested {requested}")]
    PrimitiveCap { cap: usize, requested: usize },
    #[error("partition expansion capped at n = {cap}, requested {requested}")]
    PartitionCap { cap: usize, requested: usize },
    #[error("pseudo orbits enumerated only to total length {have}, need {need}")]
    EnumerationCap { have: usize, need: usize },
    #[error("eigensolve failed")]
    Eigensolve,
    #[error("spectral parameter must be positive, got {0}")]
    NonPositiveLambda(f64),
    #[error("zero-mode regime (lambda = {0:e} < 1e-8), increase lambda")]
    ZeroModeRegime(f64),
    #[error("zeta representation valid for real s < 1 excluding the pole s = 1/2, got s = {0}")]
    ZetaStrip(f64),
    #[error("k_max must be positive, got {0}")]
    NonPositiveKmax(f64),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
