use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer {0}")]
    PoleAtNonPositiveInteger(f64),

    #[error("lower hypergeometric parameter c = {0} is a non-positive integer")]
    LowerParameterPole(f64),

    #[error("series did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },

    #[error("argument {value} outside the domain {domain}")]
    DomainError { value: f64, domain: &'static str },

    #[error("invalid dimension n = {0}; need n >= 1")]
    InvalidDimension(i64),

    #[error("invalid circle radius {0}; need rho > 0")]
    InvalidRadius(f64),

    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("validation error: {0}")]
    ValidationError(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inconsistent hypergeometric parameters: {0}")]
    InconsistentParams(String),

    #[error("undecidable membership in Z_- for {what}: value {value} lies within 1e-9 of a non-positive integer and carries no exact form")]
    UndecidableMembership { what: String, value: String },

    #[error("truncation insufficient: bound {bound} exceeds certified completeness {certified}")]
    TruncationInsufficient { bound: f64, certified: f64 },

    #[error("parameter pole: {0}")]
    ParameterPole(String),

    #[error("resolvent evaluated at a genuine pole (case {case})")]
    PoleEvaluation { case: String },

    #[error("quadrature did not reach tolerance after {subdivisions} subdivisions (error estimate {estimate:e})")]
    QuadratureFailure { subdivisions: usize, estimate: f64 },

    #[error("residue probe inconclusive: ratio {ratio:e} too close to the decision threshold")]
    ProbeInconclusive { ratio: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
