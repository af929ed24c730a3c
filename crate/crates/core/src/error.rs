use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Fock space dimension {dim} exceeds the configured limit {limit}; shrink the grid or the occupation caps")]
    DimensionOverflow { dim: u128, limit: usize },
    #[error("mode not present on the grid: {0}")]
    UnknownMode(String),
    #[error("operand dimensions do not match: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("zero momentum has no spinor (the k = 0 mode is excluded)")]
    ZeroMomentum,
    #[error("momentum {0:?} is not on the box lattice")]
    OffLatticeMomentum([f64; 3]),
    #[error("momentum mismatch: p + q - k = {0:?}")]
    MomentumMismatch([f64; 4]),
    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),
    #[error("operation requires the canonical frame p = (0, 0, 0, p3)")]
    RequiresCanonicalFrame,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
