use thiserror::Error;

/// Problems with the definition of a map system or its inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("a + b must exceed 1 (got a = {a}, b = {b}, a + b ≤ 1)")]
    NotOverlapping { a: String, b: String },
    #[error("parameter {name} = {value} must lie in (0, 1)")]
    ParamOutOfRange { name: &'static str, value: String },
    #[error("rho = {rho} must lie in [1 - b, a] = [{lo}, {hi}]")]
    RhoOutOfRange { rho: String, lo: String, hi: String },
    #[error("branch {branch}: eps = {eps} must satisfy 0 <= eps < {limit} so the derivative bound exceeds 1")]
    EpsTooLarge { branch: u8, eps: f64, limit: f64 },
    #[error("exact rational mode requires both branches to be affine")]
    RationalNeedsAffine,
    #[error("cannot parse {0:?} as a number")]
    BadNumber(String),
    #[error("x = {0} lies outside [0, 1]")]
    OutOfDomain(String),
    #[error("{0}")]
    Precondition(String),
}

/// A computation needed more certified digits than the itinerary provides.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("critical itineraries are reliable to {available} digits but {needed} are required")]
pub struct ReliabilityError {
    pub needed: usize,
    pub available: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("symmetry defect does not change sign on [{lo}, {hi}] ({at_lo} at lo, {at_hi} at hi)")]
    NoBracket {
        lo: String,
        hi: String,
        at_lo: String,
        at_hi: String,
    },
    #[error("itinerary reliability collapsed to {depth} digits at rho = {rho}")]
    ReliabilityCollapse { depth: usize, rho: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    InvalidNode(usize, usize, usize),
    #[error("relations live on different node sets ({0} vs {1} nodes)")]
    SizeMismatch(usize, usize),
    #[error("the given set is not invariant: r(A) != A")]
    NotInvariant,
    #[error("dual repeller disagrees with the attractor of the transpose relation")]
    DualMismatch,
}

/// Umbrella error for front ends.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Reliability(#[from] ReliabilityError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// A computation ran but its result failed a required check.
    #[error("{0}")]
    Failed(String),
}

impl Error {
    /// `2` for configuration or domain problems, `3` for computational failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Model(_) | Error::Config(_) | Error::Io(_) => 2,
            Error::Solve(SolveError::Model(_)) => 2,
            Error::Reliability(_) | Error::Solve(_) | Error::Relation(_) | Error::Failed(_) => 3,
        }
    }
}
