use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("s must be at least 1 (got s={s})")]
    SIsZero { s: u32 },
    #[error("s exceeds r (r={r}, s={s})")]
    SExceedsR { r: u32, s: u32 },
    #[error("r and s must both be odd (r={r}, s={s})")]
    EvenParameter { r: u32, s: u32 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {degree} lies outside the computed window (max degree {window})")]
    DegreeOutOfWindow { degree: usize, window: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("fiber is not finite-dimensional within degree {window}")]
    InfiniteFiber { window: usize },
    #[error("window too narrow: {0}")]
    WindowTooNarrow(String),
    #[error("invalid differential: {0}")]
    InvalidDifferential(String),
    #[error("derivation is not well defined: relation {relation} maps to a nonzero class")]
    DerivationNotWellDefined { relation: usize },
    #[error("no admissible differential exists for this action")]
    NoSurvivor,
    #[error("no parameter vector matches the spectral sequence")]
    NoMatchingParameters,
    #[error("invalid parameter bit string: {0}")]
    InvalidParams(String),
    #[error("power of the class is still nonzero at the bound {bound}")]
    NilpotencyBoundReached { bound: u32 },
    #[error("expected two algebra generators of equal degree")]
    NotMilnorShape,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SIsZero { .. } => "s-is-zero",
            Error::SExceedsR { .. } => "s-exceeds-r",
            Error::EvenParameter { .. } => "even-parameter",
            Error::NotHomogeneous => "not-homogeneous",
            Error::DegreeOutOfWindow { .. } => "degree-out-of-window",
            Error::UnknownGenerator(_) => "unknown-generator",
            Error::InvalidPresentation(_) => "invalid-presentation",
            Error::Parse { .. } => "parse-error",
            Error::InfiniteFiber { .. } => "infinite-fiber",
            Error::WindowTooNarrow(_) => "window-too-narrow",
            Error::InvalidDifferential(_) => "invalid-differential",
            Error::DerivationNotWellDefined { .. } => "derivation-not-well-defined",
            Error::NoSurvivor => "no-survivor",
            Error::NoMatchingParameters => "no-matching-parameters",
            Error::InvalidParams(_) => "invalid-params",
            Error::NilpotencyBoundReached { .. } => "nilpotency-bound-reached",
            Error::NotMilnorShape => "not-milnor-shape",
            Error::Unsupported(_) => "unsupported",
        }
    }
}
