//! Vacuum field fluctuations and energy densities inside a cavity whose one
//! wall is a quantum harmonic oscillator coupled to the field by radiation
//! pressure.
//!
//! Two models are provided:
//!
//! * [`cavity1d`]: one-dimensional electromagnetic field, electric and
//!   magnetic fluctuations to zeroth and first order in the wall coupling.
//! * [`cavity3d`]: three-dimensional massless scalar field with periodic
//!   transverse directions, photon spectrum of the dressed ground state and
//!   the renormalized energy density.
//!
//! All quantities are in SI units. First-order quantities are truncated,
//! cutoff-regularized mode sums evaluated by the [`modesum`] engine.

pub mod cavity1d;
pub mod cavity3d;
pub mod config;
pub mod constants;
pub mod error;
pub mod grid;
pub mod modes;
pub mod modesum;
pub mod trig;

pub use config::{Cavity1D, Cavity1DParams, Cavity3D, Cavity3DParams, ConfigError, SumControl};
pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use modes::ModeIndex3;
pub use modesum::{CutoffScheme, CutoffWeight, SumResult};
