use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points live on different manifolds or have mismatched dimensions")]
    ManifoldMismatch,
    #[error("invalid point: {0}")]
    InvalidPoint(&'static str),
    #[error("invalid tangent vector: {0}")]
    InvalidTangent(&'static str),
    #[error("point lies on (or within tolerance of) the cut locus; clearance {clearance:e}")]
    CutLocus { clearance: f64 },
    #[error("weights have (numerically) zero total mass")]
    ZeroMass,
    #[error("query point is on the focal set of the affine span (datum {index:?})")]
    FocalPoint { index: Option<usize> },
    #[error("reference points are affinely dependent")]
    DependentPoints,
    #[error("point is not on the exponential barycentric subspace (smallest singular value {smallest:e})")]
    NotOnEbs { smallest: f64 },
    #[error("Hessian is singular")]
    DegenerateHessian,
    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("domain violation: {0}")]
    DomainViolation(&'static str),
    #[error("a reference point coincides with the evaluation point")]
    ReferenceCoincidence,
    #[error("not enough data: {0}")]
    InsufficientData(&'static str),
    #[error("no affinely independent tuple among the candidates")]
    NoIndependentTuple,
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
    #[error("invalid flag: {0}")]
    InvalidFlag(&'static str),
    #[error("sampling gave up after {0} proposals")]
    SamplingExhausted(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
