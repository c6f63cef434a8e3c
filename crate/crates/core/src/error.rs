use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion {0} has modulus below the zero-divisor threshold")]
    ZeroDivisor(String),

    #[error("vector ({0}, {1}, {2}) cannot be normalized to an imaginary unit")]
    DegenerateAxis(f64, f64, f64),

    #[error("invalid grid size: {0}")]
    InvalidGrid(String),

    #[error("radius {0} is outside [0, 1)")]
    RadiusOutOfRange(f64),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("functions live on different grids")]
    GridMismatch,

    #[error("sphere rule lacks antipodal closure")]
    NotAntipodal,

    #[error("zero input: {0}")]
    ZeroInput(&'static str),

    #[error(
        "sampled function is not well defined on the boundary: defect {defect:.3e} at \
         sphere node {node} / t index {t_idx} paired with sphere node {pair_node} / t index {pair_t_idx}"
    )]
    IllDefined {
        defect: f64,
        node: usize,
        t_idx: usize,
        pair_node: usize,
        pair_t_idx: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
