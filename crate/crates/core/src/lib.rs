//! Exact atom-field dynamics of the multiphoton (intensity-dependent)
//! Jaynes-Cummings model with coherent or hand-built initial fields.
//!
//! The crate is organised bottom-up:
//!
//! * [`fockspace`] truncated Fock-basis field states,
//! * [`model`] model parameters and the Rabi spectrum,
//! * [`evolution`] the closed-form joint state and atomic inversion,
//! * [`moments`] ladder-operator moments and the closed forms for `<a^2>`,
//! * [`squeezing`] squeezing factors, the rescaled squeezing factor and the
//!   proportionality constants behind it,
//! * [`analysis`] revival times, generalized Rabi frequencies, revival
//!   detection and pattern similarity,
//! * [`oracle`] brute-force propagators used for cross-validation,
//! * [`timeseries`] the CSV data contract,
//! * [`cli`] the `ijcm` command-line front end.
//!
//! Time is always the scaled time `T = lambda * t` and detuning the ratio
//! `eta = Delta / lambda`.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod fockspace;
pub mod model;
pub mod moments;
pub mod oracle;
pub mod special;
pub mod squeezing;
pub mod timeseries;

pub use error::{Error, Result};
pub use evolution::{atomic_inversion, evolve, JointState, TimeGrid};
pub use fockspace::{FieldSpec, TruncatedFieldState};
pub use model::{ModelParams, Nonlinearity, RabiSpectrum};
pub use timeseries::TimeSeries;

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
