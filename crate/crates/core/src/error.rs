use thiserror::Error;

/// Every failure the library can report.
///
/// Domain errors (a degenerate form, a non-primitive series, ...) are kept
/// apart from input errors so that the command-line front end can map them
/// to different exit codes; see [`Error::is_domain`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(u32, u32),
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("constraint `{constraint}` violated at ({i}, {j})")]
    ConstraintViolation {
        constraint: &'static str,
        i: usize,
        j: usize,
    },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("divided discriminant is only defined for odd rank (got {0})")]
    EvenRank(usize),
    #[error("gram determinant is not divisible by theta")]
    NotDivisible,
    #[error("precision {precision} does not exceed v(theta) = {needed}")]
    InsufficientPrecision { precision: u32, needed: u32 },
    #[error("pairing f(x, Pi*y) is not 1")]
    BadPairing,
    #[error("Newton iteration left a nonzero residual after {0} steps")]
    NewtonDivergence(usize),
    #[error("form is degenerate: {0}")]
    Degenerate(String),
    #[error("not a similitude modulo the thickening ideal: {0}")]
    NotASimilitudeModI(String),
    #[error("series is not primitive")]
    NotPrimitive,
    #[error("polynomial is not monic with lower coefficients in the maximal ideal")]
    NotMonic,
    #[error("monomial support exceeded {0} terms")]
    SupportOverflow(usize),
    #[error("iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("generator {0} is not invertible over the integers")]
    NonUnimodular(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("zero input")]
    ZeroInput,
    #[error("matrix is not invertible")]
    Singular,
    #[error("bad input: {0}")]
    Input(String),
}

impl Error {
    /// Stable machine-readable name, used in JSON error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidRing(_) => "InvalidRing",
            Error::RingMismatch => "RingMismatch",
            Error::PrecisionMismatch(..) => "PrecisionMismatch",
            Error::NotAUnit(_) => "NotAUnit",
            Error::ConstraintViolation { .. } => "ConstraintViolation",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::EvenRank(_) => "EvenRank",
            Error::NotDivisible => "NotDivisible",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::BadPairing => "BadPairing",
            Error::NewtonDivergence(_) => "NewtonDivergence",
            Error::Degenerate(_) => "Degenerate",
            Error::NotASimilitudeModI(_) => "NotASimilitudeModI",
            Error::NotPrimitive => "NotPrimitive",
            Error::NotMonic => "NotMonic",
            Error::SupportOverflow(_) => "SupportOverflow",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NonUnimodular(_) => "NonUnimodular",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ZeroInput => "ZeroInput",
            Error::Singular => "Singular",
            Error::Input(_) => "Input",
        }
    }

    /// False only for malformed input, which the CLI reports with exit code 1.
    pub fn is_domain(&self) -> bool {
        !matches!(self, Error::Input(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
