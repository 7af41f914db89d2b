//! Reduction of a [`RunSetup`] to dimensionless coefficients.
//!
//! Units: τ̃ = τ/T_R, z̃ = z/L, ñ = n′/n′₀, p̃ = P′⁺/(d′n′₀),
//! ẽ = (2d′T_R/ħ)E⁺, with T_R the observer-frame superradiance time and n′₀
//! half the reference density. The equations become
//!
//! ```text
//! dñᵥ/dτ̃ = −Im(p̃ᵥ ẽ) − ñᵥ/t₁ + λₙᵥ
//! dp̃ᵥ/dτ̃ = i δᵥ p̃ᵥ + i ñᵥ ẽ* − p̃ᵥ/t₂ + λₚᵥ e^{iδᵥτ̃}
//! ∂ẽ/∂z̃  = i κ Σᵥ p̃ᵥ*
//! ```

use alloc::vec::Vec;

use num_complex::Complex64;

use super::types::{BoundaryInput, RunSetup};
use crate::error::Error;
use crate::params::{HBAR, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use crate::relativity::channel_detuning;
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub(crate) struct ChannelCoefficients {
    pub weight: f64,
    pub detuning: f64,
    pub pump_n: f64,
    pub pump_p: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Model {
    pub tr: f64,
    pub length: f64,
    pub n0: f64,
    pub dipole: f64,
    pub inv_t1: f64,
    pub inv_t2: f64,
    pub coupling: f64,
    pub seed: f64,
    pub channels: Vec<ChannelCoefficients>,
    pub n_z: usize,
    pub dtau: f64,
    pub dz: f64,
    /// SI field per unit ẽ.
    pub field_unit: f64,
    pub boundary: BoundaryInput,
}

/// Prefactor of the field equation, γ√((1+β)/(1−β)) ω₀′/(2cε₀).
pub(crate) fn field_prefactor(omega0_rest: f64, frame: crate::relativity::FrameVelocity) -> f64 {
    frame.gamma() * frame.doppler_factor() * omega0_rest
        / (2.0 * SPEED_OF_LIGHT * VACUUM_PERMITTIVITY)
}

impl Model {
    pub fn new(setup: &RunSetup) -> Result<Self> {
        setup.grid.validate()?;
        if setup.channels.is_empty() {
            return Err(Error::Config(
                "at least one velocity channel is required".into(),
            ));
        }
        let frame = setup.frame;
        let s = frame.time_factor();
        let tr = setup.timescales.tr_rest * s;
        let t1 = setup.timescales.t1_rest * s;
        let t2 = setup.timescales.t2_rest * s;
        let n_ref = setup.sample.inversion_density_rest;
        let n0 = 0.5 * n_ref;
        let d = setup.transition.dipole_rest;
        let length = setup.grid.length_observer;
        let expected_length = setup.sample.length_rest / frame.gamma();
        if ((length - expected_length) / expected_length).abs() > 1e-9 {
            return Err(Error::Config(alloc::format!(
                "grid length {length:e} m differs from contracted sample length {expected_length:e} m"
            )));
        }
        let theta = setup.sample.tipping_angle;
        let sin_theta = libm::sin(theta);

        let coupling =
            2.0 * d * d * n0 * field_prefactor(setup.transition.omega0_rest, frame) * length * tr
                / HBAR;

        let mut channels = Vec::with_capacity(setup.channels.len());
        for ch in &setup.channels {
            if !(ch.inversion_density_rest >= 0.0 && ch.inversion_density_rest.is_finite()) {
                return Err(Error::Config(alloc::format!(
                    "channel density {:e} must be >= 0",
                    ch.inversion_density_rest
                )));
            }
            let weight = ch.inversion_density_rest / n_ref;
            let detuning =
                channel_detuning(ch.dv_rest, setup.transition.omega0_rest, frame.beta())? * tr;
            let n0_channel = 0.5 * ch.inversion_density_rest;
            let lambda_n = setup.pumps.lambda_n.unwrap_or(n0_channel / t1);
            let lambda_p = setup
                .pumps
                .lambda_p
                .unwrap_or(n0_channel * d * sin_theta / t2);
            channels.push(ChannelCoefficients {
                weight,
                detuning,
                pump_n: lambda_n * tr / n0,
                pump_p: lambda_p * tr / (d * n0),
            });
        }

        let dtau = setup.grid.dtau() / tr;
        let dz = 1.0 / (setup.grid.n_z - 1) as f64;
        let inv_t1 = tr / t1;
        let inv_t2 = tr / t2;

        // Step-size rule: resolve T_R, T₂ and the fastest channel beat.
        if dtau > 1.0 / 50.0 * (1.0 + 1e-12) {
            return Err(Error::Config(alloc::format!(
                "dtau = {:e} s exceeds T_R/50 = {:e} s",
                setup.grid.dtau(),
                tr / 50.0
            )));
        }
        if dtau * inv_t2 > 1.0 / 50.0 * (1.0 + 1e-12) {
            return Err(Error::Config(alloc::format!(
                "dtau = {:e} s exceeds T2/50 = {:e} s",
                setup.grid.dtau(),
                t2 / 50.0
            )));
        }
        let max_detuning = channels
            .iter()
            .map(|c| c.detuning.abs())
            .fold(0.0, f64::max);
        if dtau * max_detuning > 0.1 * (1.0 + 1e-12) {
            return Err(Error::Config(alloc::format!(
                "dtau * k * max|dv| = {:e} exceeds 0.1",
                dtau * max_detuning
            )));
        }

        Ok(Model {
            tr,
            length,
            n0,
            dipole: d,
            inv_t1,
            inv_t2,
            coupling,
            seed: sin_theta,
            channels,
            n_z: setup.grid.n_z,
            dtau,
            dz,
            field_unit: HBAR / (2.0 * d * tr),
            boundary: setup.boundary.clone(),
        })
    }

    /// Polarization pump of channel `c` at dimensionless time: the channel's
    /// seed co-rotates with its own detuning, λₚ e^{iδτ̃}.
    pub fn polarization_pump(&self, c: usize, tau: f64) -> Complex64 {
        let ch = &self.channels[c];
        if ch.detuning == 0.0 {
            Complex64::new(ch.pump_p, 0.0)
        } else {
            let (s, co) = libm::sincos(ch.detuning * tau);
            Complex64::new(ch.pump_p * co, ch.pump_p * s)
        }
    }

    /// Dimensionless boundary field at dimensionless time.
    pub fn boundary_at(&self, tau: f64) -> Complex64 {
        self.boundary.at(tau * self.tr) / self.field_unit
    }
}
