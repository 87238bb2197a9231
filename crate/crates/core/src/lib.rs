//! Decay of phase-space Bell nonlocality for a two-mode squeezed vacuum in
//! thermal environments.
//!
//! The state of interest starts as a two-mode squeezed vacuum, each mode
//! coupled to its own thermal bath. Its Wigner function stays Gaussian for
//! all times, so the whole evolution reduces to three closed-form
//! coefficients ([`phase_space`]). Displaced-parity correlations turn four
//! Wigner values into a Bell function whose maximum over displacement
//! settings measures nonlocality; [`bell`] evaluates and maximizes it.
//! Everything is double-checked by independent numerical routes: a truncated
//! number-basis computation of the same correlations ([`fock`]) and
//! Gauss–Hermite quadrature of the channel convolution and of the
//! coherent-superposition decomposition ([`oracles`]). [`sweep`] drives
//! parameter sweeps, the loss-of-nonlocality crossing time, and the
//! aggregated oracle reports used by the `sqbell` binary.
//!
//! ```
//! use squeezed_bell::{
//!     bell::{max_bell, OptimizerConfig},
//!     phase_space::{evolve_coeffs, BathSpec, ChannelTime, SqueezeSpec},
//! };
//!
//! let coeffs = evolve_coeffs(
//!     &SqueezeSpec::magnitude(0.3)?,
//!     &BathSpec::new(0.5)?,
//!     &ChannelTime::from_r(0.2)?,
//! )?;
//! let result = max_bell(&coeffs, &OptimizerConfig::default())?;
//! assert!(result.b_max > 2.0); // still nonlocal this early
//! # Ok::<(), squeezed_bell::Error>(())
//! ```

pub mod bell;
pub mod error;
pub mod fock;
pub mod oracles;
pub mod phase_space;
pub mod quad;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
pub use phase_space::{BathSpec, ChannelTime, GaussianCoeffs, PhasePoint, SqueezeSpec};
