use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("filtration radius search failed: {0}")]
    RadiusSearch(String),

    #[error("no Julia samples found")]
    NoJuliaSamples,

    #[error("empty census: {0}")]
    EmptyCensus(String),

    #[error("pressure has no root in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("segment does not cross J+")]
    NoCrossing,

    /// A numerical hypothesis of a bound or formula is not met.
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
}
