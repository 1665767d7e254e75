//! Finite-temperature dispersion forces between a gold sphere and a silicon
//! plate whose carrier density is modulated by light, together with the data
//! reduction used to extract force differences from lock-in measurements.
//!
//! The crate is organised bottom-up:
//!
//! * [`materials`] evaluates dielectric permittivities on the imaginary
//!   frequency axis (Kramers-Kronig transform of tabulated data, Lorentz
//!   fits, Drude carrier terms, plasma frequencies).
//! * [`lifshitz`] sums the Lifshitz free energy over Matsubara frequencies
//!   and maps it to a sphere-plate force with the proximity force
//!   approximation.
//! * [`analysis`] handles electrostatic calibration, residual potentials,
//!   inversion of the measured total force difference and Student-t
//!   statistics, plus a synthetic data generator.
//! * [`cli`] is the command-line front end used by the `casimir` binary.
//!
//! All quantities are SI; angular frequencies are in rad/s.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod constants;
pub mod error;
pub mod lifshitz;
pub mod materials;
pub mod quadrature;

pub use error::{Error, Result};
