//! Error type shared by all core modules.

use thiserror::Error;

/// Errors raised by configuration validation, oracle evaluation, sampling,
/// and image reconstruction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    /// A numeric input was NaN or infinite.
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    /// A quantity that must be non-negative was negative.
    #[error("negative value for {0}")]
    Negative(&'static str),

    /// A value fell outside its admissible interval.
    #[error("{0} out of range")]
    OutOfRange(&'static str),

    /// A mode index was out of range or two indices coincided.
    #[error("bad mode index")]
    BadMode,

    /// Sampling was requested with a negative or non-finite variance.
    #[error("variance must be finite and non-negative")]
    BadVariance,

    /// Estimation needs at least two samples.
    #[error("too few samples")]
    TooFewSamples,

    /// The truncated Fock simulation leaked too much population past the
    /// cutoff for its result to be trusted.
    #[error("Fock cutoff too small: leaked population {leaked:.3e} exceeds {limit:.1e}")]
    CutoffTooSmall { leaked: f64, limit: f64 },

    /// The signal protocol divides by the seed amplitude and therefore
    /// requires a nonzero coherent seed.
    #[error("signal protocol requires a nonzero coherent seed amplitude")]
    ZeroSeed,

    /// With a zero conversion-gain product the object never couples into the
    /// detected mode and reconstruction is impossible.
    #[error("zero conversion-gain product: object is not observable")]
    ZeroGain,

    /// Homodyne detection needs a local oscillator with positive amplitude.
    #[error("local oscillator amplitude must be positive")]
    ZeroLocalOscillator,

    /// The asymptotic reference forms require the detection phase to be an
    /// integer multiple of pi/2.
    #[error("detection phase is not the requested multiple of pi/2")]
    InvalidSetting,

    /// Image scans need at least one pixel.
    #[error("object map must be non-empty")]
    EmptyMap,
}
