use thiserror::Error;

/// Errors produced by the epicube toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is the focal point of the camera (projection is the zero vector)")]
    FocalPointProjection,
    #[error("camera matrix has rank {0} < 3")]
    RankDeficientCamera(usize),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("homogeneous point has all coordinates zero")]
    ZeroPoint,
    #[error("degenerate input: constraint kernel has dimension {kernel_dim}")]
    DegenerateInput { kernel_dim: usize },
    #[error("camera centers coincide")]
    CoincidentCenters,
    #[error("every member of the pencil is singular")]
    IdenticallyZeroPencil,
    #[error("pencil generators are linearly dependent")]
    DependentInputs,
    #[error("pencil determinant has no real root")]
    NoRealRoot,
    #[error("point cloud is degenerate (all points coincide)")]
    DegenerateCloud,
    #[error("point lies at infinity (last coordinate zero)")]
    NotAffine,
    #[error("more than one quadric fits the points (Veronese rank {rank} < 9)")]
    PencilOfQuadrics { rank: usize },
    #[error("no quadric passes through the points (Veronese rank 10)")]
    NoQuadric,
    #[error("linear system is rank deficient")]
    RankDeficient,
    #[error("delta-minor vanishes; the delta = 1 chart is undefined")]
    AtInfinity,
    #[error("exhausted {0} sampling retries")]
    ExhaustedRetries(usize),
    #[error("the three facet planes do not meet in a single affine point")]
    DegenerateIntersection,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
            _ => Error::Parse(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
