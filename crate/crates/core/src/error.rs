use thiserror::Error;

/// Errors produced by the numerical kernels and bound evaluators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{context}: {detail}")]
    ShapeMismatch { context: &'static str, detail: String },

    #[error("thin QR needs rows >= cols, got {rows}x{cols}")]
    NotTall { rows: usize, cols: usize },

    #[error("SVD of a {rows}x{cols} matrix did not converge")]
    SvdNoConvergence { rows: usize, cols: usize },

    #[error("rank {k} out of range 1..={max}")]
    RankOutOfRange { k: usize, max: usize },

    #[error("invalid norm: {0}")]
    InvalidNorm(String),

    #[error("norm {spec} is not supported here: {reason}")]
    UnsupportedNorm { spec: String, reason: &'static str },

    #[error("columns are not orthonormal (max deviation {deviation:.3e})")]
    NotOrthonormal { deviation: f64 },

    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("sketch has numerical rank {numerical_rank} < {expected}")]
    RankDeficientSketch {
        numerical_rank: usize,
        expected: usize,
    },

    #[error(
        "starting guess violates rank(Omega1) = {k}: sigma_min {sigma_min:.3e} <= threshold {threshold:.3e}"
    )]
    Omega1RankDeficient {
        k: usize,
        sigma_min: f64,
        threshold: f64,
    },

    #[error("no singular value gap at index {k}: gamma_k = {gamma_k}")]
    NoSpectralGap { k: usize, gamma_k: f64 },

    #[error("singular value {index} is zero")]
    ZeroSingularValue { index: usize },

    #[error("sin-theta gap is not positive (zeta = {zeta:.3e})")]
    GapViolation { zeta: f64 },

    #[error("approximate singular value {j} sits in a degenerate cluster (delta = 0)")]
    DegenerateCluster { j: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix market line {line}: {message}")]
    MatrixMarket { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
