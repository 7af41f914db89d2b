//! Relativistic Maxwell-Bloch equations for ensembles of two-level emitters
//! moving along the line of sight to an observer.
//!
//! The crate is `no_std` (with `alloc`). It contains:
//!
//! * [`params`]: physical constants, rest-frame transition and sample data, and
//!   the quantities derived from them (dipole moment, superradiance time,
//!   saturation intensity, gain, particle number, tipping angle).
//! * [`relativity`]: Lorentz kinematics linking rest-frame and observer-frame
//!   quantities.
//! * [`solver`]: the retarded-time × space integrator for the coupled
//!   inversion / polarization / field system, with any number of velocity
//!   channels.
//! * [`steady_state`]: closed-form maser limits and the linear-regime Bessel
//!   solution, usable both as calculators and as oracles for the solver.
//!
//! File formats, presets and the command-line front end live in the `relmaser`
//! crate.
#![cfg_attr(not(feature = "std"), no_std)]
// `!(x >= 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod params;
pub mod relativity;
pub mod solver;
pub mod special;
pub mod steady_state;

pub use error::Error;
pub use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;
