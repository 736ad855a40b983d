use thiserror::Error;

/// Errors produced by model construction and evaluation.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("angle {value_rad} rad is outside the physical range [0, pi]")]
    InvalidAngle { value_rad: f64 },

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate geometry: {0}")]
    Geometry(String),

    #[error("model inconsistency: missing link {from} -> {to}")]
    MissingLink { from: usize, to: usize },

    #[error(
        "constraint system is rank deficient: rank {rank} of {constraints} constraints, residual {residual:.3e}"
    )]
    RankDeficient {
        rank: usize,
        constraints: usize,
        residual: f64,
    },

    #[error("sum-rate bound undefined for {pairs} pairs on {elements} elements (needs pairs <= elements)")]
    BoundUndefined { pairs: usize, elements: usize },

    #[error("no equal-length path decomposition for k={k}, tau={tau}: {reason}")]
    DecompositionInfeasible {
        k: usize,
        tau: usize,
        reason: String,
    },

    #[error("decomposition search exhausted for k={k}, tau={tau} (feasibility precheck passed; this is a bug)")]
    SearchExhausted { k: usize, tau: usize },

    #[error("scenario config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
