//! Desk-scale simulator for a monostatic wideband MIMO-OFDM sensing system
//! operating in a hybrid near-/far-field regime.
//!
//! The transmit array is a conventional half-wavelength ULA steered in the far
//! field; the receive array reaches an extremely large aperture by widening the
//! element spacing to `N_t λ/2` instead of adding elements, which drives the
//! whole monitored area into its near field while the Tx/Rx composite response
//! stays free of grating lobes. The crate provides:
//!
//! - array construction and the derived near-field scales (Fraunhofer and
//!   maximum-focusing distances, depth of focus, super-resolution radius),
//! - steering vectors, array factors and range profiles in closed form,
//! - extended-target scene sampling and frequency-domain signal synthesis,
//! - a GLRT detector with false-alarm-calibrated thresholding, beam scanning
//!   and radar-map assembly,
//! - centroid-RMSE / GOSPA evaluation and a seeded Monte Carlo harness.

pub mod config;
pub mod detector;
pub mod error;
pub mod export;
pub mod geometry;
pub mod metrics;
pub mod rng;
pub mod scene;
pub mod signal;
pub mod special;
pub mod steering;

pub use error::{Error, Result};

/// Propagation speed in m/s. The design numbers throughout use the round
/// radar convention rather than the exact SI value.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Reference noise temperature in K.
pub const T0_KELVIN: f64 = 290.0;
