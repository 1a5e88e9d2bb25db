use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("chain length must be positive")]
    EmptyChain,
    #[error("curve {index} cannot lie on curve {parent}: parents must precede their children")]
    InvalidParent { index: usize, parent: usize },
    #[error("level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: usize, found: usize },
    #[error("curve index {index} out of range 1..={level}")]
    CurveOutOfRange { index: usize, level: usize },
    #[error("closed forms are defined for levels >= 2, got {0}")]
    ClosedFormLevel(usize),
    #[error("pullback target level {to} is below source level {from}")]
    PullbackDirection { from: usize, to: usize },
    #[error("pullback maps do not compose: {first_to} != {second_from}")]
    PullbackComposition { first_to: usize, second_from: usize },
    #[error("multiplier must be positive")]
    NonPositiveMultiplier,
    #[error("unknown chain preset {0:?}")]
    UnknownPreset(String),
    #[error("empty value sequence")]
    EmptySequence,
    #[error("sequence declares bound {declared} but holds {actual} values")]
    BoundMismatch { declared: usize, actual: usize },
    #[error("negative value {value} at m = {m}")]
    NegativeValue { m: usize, value: String },
    #[error(
        "not subadditive at ({m}, {n}): v(I_{sum}) = {lhs} exceeds v(I_{m}) + v(I_{n}) = {rhs}"
    )]
    NotSubadditive {
        m: usize,
        n: usize,
        sum: usize,
        lhs: String,
        rhs: String,
    },
    #[error("sequence values must all be integers or all be [a, b] pairs")]
    MixedValueKinds,
    #[error("the zero polynomial has infinite Gauss value")]
    ZeroPolynomial,
    #[error("value sequence must start with a(0) = 0")]
    NonzeroBase,
    #[error("index {index} beyond sequence bound {bound}")]
    BeyondBound { index: usize, bound: usize },
    #[error("empty generator set")]
    EmptyGenerators,
    #[error("semigroup generators must be positive")]
    NonPositiveGenerator,
    #[error("certificate size must satisfy 2 <= N <= {max}, got {n}")]
    CertificateSize { n: usize, max: usize },
    #[error("certificate witness failed re-verification: {0}")]
    CertificateMismatch(String),
    #[error("invalid rational {0:?}")]
    ParseRational(String),
    #[error("invalid t-exponent {0:?}")]
    ParseExponent(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
