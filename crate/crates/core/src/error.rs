use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no generators given")]
    NoGenerators,
    #[error("generator {0} is the zero vector (no singularity at the origin)")]
    ZeroGenerator(usize),
    #[error("generator {index} has a negative coordinate")]
    NegativeCoordinate { index: usize },
    #[error("generator {index} of an ideal has a non-integer exponent")]
    NonIntegerExponent { index: usize },
    #[error("scaling factor must be positive")]
    NonPositiveScale,
    #[error("complement of the Newton polyhedron is unbounded: axis {axis} never meets it")]
    UnboundedComplement { axis: usize },
    #[error("exact computation supports n <= {max}, got n = {n}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("Lelong number vanishes; all multiplicity ratios are undefined")]
    ZeroLelong,
    #[error("mixed multiplicities did not stabilize for N <= {n_max}")]
    NoStabilization { n_max: u64 },
    #[error("instance is not m-primary")]
    NotPrimary,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("{0}")]
    Unsupported(String),
}
