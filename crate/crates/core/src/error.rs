//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric input was NaN or infinite.
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// A numeric input fell outside its documented domain.
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// Evolved dynamics are only defined for a real squeezing parameter.
    #[error("evolved dynamics require squeezing phase 0, got phi = {phi}")]
    PhaseUnsupported { phi: f64 },

    /// The coherent-superposition weight is undefined for the vacuum.
    #[error("coherent-superposition weight is undefined at s = 0")]
    ZeroSqueezing,

    /// A displacement too large for the truncated number basis.
    #[error(
        "displacement |alpha|^2 = {alpha_sq:.3} needs a larger basis than cutoff {cutoff}"
    )]
    CutoffTooSmall { alpha_sq: f64, cutoff: usize },

    /// Quadrature of the channel convolution degenerates near r = 0 and r = 1;
    /// the closed-form coefficients cover the endpoints.
    #[error(
        "r = {r} is too close to a channel endpoint for quadrature; \
         use the closed-form coefficients instead"
    )]
    QuadratureEndpoint { r: f64 },

    /// The Bell maximum never fell to the locality bound on (0, 1).
    #[error("no crossing of the locality bound 2 found in r ∈ (0, 1) for s = {s}, nbar = {nbar}")]
    NoCrossing { s: f64, nbar: f64 },

    /// A sweep configuration file or flag could not be parsed.
    #[error("config: {0}")]
    Config(String),
}
