//! Retarded-time integrator for the relativistic Maxwell-Bloch system.
//!
//! Each velocity channel carries a rest-frame inversion n′ᵥ(z) and a
//! polarization envelope P′ᵥ⁺(z); the observer-frame field envelope E⁺(z)
//! follows from the polarizations by a spatial quadrature that is redone at
//! every Runge-Kutta substage. Internally the solver runs in units of the
//! observer-frame superradiance time T_R and sample length L, in which the
//! system is independent of the frame velocity.

mod field;
mod model;
mod rhs;
mod run;
mod types;

pub use field::integrate_field;
pub use rhs::{bloch_rhs, BlochCoefficients, BlochDerivative};
pub use run::{init_state, run, Solver};
pub use types::*;
