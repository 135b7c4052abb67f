use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative probability {value} at n = {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("non-finite probability at n = {index}")]
    NonFiniteProbability { index: usize },

    #[error("distribution has no probability mass")]
    ZeroMass,

    #[error("probabilities sum to {sum}, outside the normalization tolerance")]
    NotNormalized { sum: f64 },

    #[error("state has no photons (mean photon number is zero)")]
    VacuumOnlyState,

    #[error("source state already contains vacuum (p0 = {p0})")]
    SourceHasVacuum { p0: f64 },

    #[error("{what} = {value} is out of range: {expected}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        expected: String,
    },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("photon-number ratio r = {0} is too close to 1; the mixture is flat")]
    DegenerateRatio(f64),

    #[error("argument {0} is outside the Lambert-W principal branch domain [-1/e, 0]")]
    OutOfDomain(f64),

    #[error("sample mean is zero")]
    ZeroMeanSample,

    #[error("every event recorded zero photons; post-selection leaves nothing")]
    AllVacuumEvents,

    #[error("{source_name}: row {row}: {message}")]
    Parse {
        source_name: String,
        row: usize,
        message: String,
    },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
