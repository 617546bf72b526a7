use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {0} lies outside the map's domain")]
    DomainError(String),
    #[error("maps live on different domains")]
    DomainMismatch,
    #[error("self-similar descent exceeded depth bound {0}")]
    DepthExceeded(u32),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("cover admits no cut-point schedule: {0}")]
    NoOverlap(String),
    #[error("map cannot be fragmented over this cover: {0}")]
    NotFragmentable(String),
    #[error("support is not compactly contained in the ball: {0}")]
    SupportTooLarge(String),
    #[error("balls are not pairwise disjoint")]
    BallsNotDisjoint,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("sample resolution {resolution} exceeds epsilon/8 = {limit}")]
    ResolutionTooCoarse { resolution: String, limit: String },
    #[error("not a local contraction")]
    NotAContraction,
    #[error("map does not contract the dyadic basis at level {0}")]
    NotBasisContracting(u32),
    #[error("cannot compress balls into cores: {0}")]
    CoresTooLarge(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
