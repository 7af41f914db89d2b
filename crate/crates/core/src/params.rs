//! Physical constants, rest-frame transition and sample descriptions, and the
//! quantities derived from them. Everything here is in SI units.

use core::f64::consts::PI;

use crate::error::{positive, Error};
use crate::Result;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity (F/m), CODATA 2018.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Reduced Planck constant (J s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;

/// The three constants entering the field equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub c: f64,
    pub eps0: f64,
    pub hbar: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        c: SPEED_OF_LIGHT,
        eps0: VACUUM_PERMITTIVITY,
        hbar: HBAR,
    };
}

/// Rest-frame data of the radiating transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSpec {
    /// Wavelength λ′ (m).
    pub lambda_rest: f64,
    /// Einstein A coefficient Γ′ (1/s).
    pub gamma_sp_rest: f64,
    /// Angular Bohr frequency ω₀′ = 2πc/λ′ (rad/s).
    pub omega0_rest: f64,
    /// Dipole moment magnitude d′ (C m), derived from Γ′ and ω₀′.
    pub dipole_rest: f64,
}

impl TransitionSpec {
    pub fn new(lambda_rest: f64, gamma_sp_rest: f64) -> Result<Self> {
        positive("lambda_rest", lambda_rest)?;
        let omega0_rest = 2.0 * PI * SPEED_OF_LIGHT / lambda_rest;
        let dipole_rest = derive_dipole(gamma_sp_rest, omega0_rest)?;
        Ok(TransitionSpec {
            lambda_rest,
            gamma_sp_rest,
            omega0_rest,
            dipole_rest,
        })
    }

    /// The OH ground-state satellite line at 1612 MHz.
    pub fn oh_1612() -> Self {
        TransitionSpec::new(0.186, 1.282e-11).expect("OH preset is valid")
    }

    /// Rest-frame wavenumber k′ = ω₀′/c.
    pub fn wavenumber_rest(&self) -> f64 {
        self.omega0_rest / SPEED_OF_LIGHT
    }
}

/// A Fresnel-number-one cylinder of inverted emitters, described in its rest
/// frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    /// L′ (m).
    pub length_rest: f64,
    /// Total population density difference n′ₜ = 2n′₀ (1/m³).
    pub inversion_density_rest: f64,
    /// A′ = λ′L′ (m²).
    pub cross_section_rest: f64,
    /// N = n′ₜ A′ L′ (unrounded).
    pub particle_count: f64,
    /// θ₀ = 2/√N (rad).
    pub tipping_angle: f64,
}

impl SampleSpec {
    pub fn new(
        transition: &TransitionSpec,
        length_rest: f64,
        inversion_density_rest: f64,
    ) -> Result<Self> {
        positive("length_rest", length_rest)?;
        positive("inversion_density_rest", inversion_density_rest)?;
        let particle_count =
            particle_number(inversion_density_rest, transition.lambda_rest, length_rest)?;
        Ok(SampleSpec {
            length_rest,
            inversion_density_rest,
            cross_section_rest: transition.lambda_rest * length_rest,
            particle_count,
            tipping_angle: tipping_angle(particle_count)?,
        })
    }

    /// n′₀ = n′ₜ/2.
    pub fn half_inversion(&self) -> f64 {
        0.5 * self.inversion_density_rest
    }

    /// N rounded for reporting only.
    pub fn particle_count_rounded(&self) -> f64 {
        libm::round(self.particle_count)
    }
}

/// Rest-frame relaxation, dephasing and superradiance timescales.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimescaleSpec {
    pub t1_rest: f64,
    pub t2_rest: f64,
    pub tr_rest: f64,
}

impl TimescaleSpec {
    pub fn new(
        transition: &TransitionSpec,
        sample: &SampleSpec,
        t1_rest: f64,
        t2_rest: f64,
    ) -> Result<Self> {
        positive("t2_rest", t2_rest)?;
        positive("t1_rest", t1_rest)?;
        if t1_rest < t2_rest {
            return Err(Error::domain("t1_rest", ">= t2_rest", t1_rest));
        }
        let tr_rest = superradiance_time_rest(
            transition.lambda_rest,
            sample.inversion_density_rest,
            sample.length_rest,
            transition.gamma_sp_rest,
        )?;
        Ok(TimescaleSpec {
            t1_rest,
            t2_rest,
            tr_rest,
        })
    }

    /// True when dephasing is slower than the superradiance timescale.
    pub fn is_superradiant(&self) -> bool {
        self.t2_rest > self.tr_rest
    }
}

/// Dipole moment from the Einstein A coefficient: d′² = 3πε₀ħc³Γ′/ω₀′³.
pub fn derive_dipole(gamma_sp_rest: f64, omega0_rest: f64) -> Result<f64> {
    positive("gamma_sp_rest", gamma_sp_rest)?;
    positive("omega0_rest", omega0_rest)?;
    let c3 = SPEED_OF_LIGHT * SPEED_OF_LIGHT * SPEED_OF_LIGHT;
    let w3 = omega0_rest * omega0_rest * omega0_rest;
    Ok(libm::sqrt(
        3.0 * PI * VACUUM_PERMITTIVITY * HBAR * c3 * gamma_sp_rest / w3,
    ))
}

/// Characteristic superradiance time T_R′ = 8π / (3λ′² n′ₜ L′ Γ′).
pub fn superradiance_time_rest(
    lambda_rest: f64,
    inversion_density_rest: f64,
    length_rest: f64,
    gamma_sp_rest: f64,
) -> Result<f64> {
    positive("lambda_rest", lambda_rest)?;
    positive("inversion_density_rest", inversion_density_rest)?;
    positive("length_rest", length_rest)?;
    positive("gamma_sp_rest", gamma_sp_rest)?;
    Ok(8.0 * PI
        / (3.0 * lambda_rest * lambda_rest * inversion_density_rest * length_rest * gamma_sp_rest))
}

/// Emitters in a Fresnel-one cylinder: N = n′ₜ λ′ L′².
pub fn particle_number(
    inversion_density_rest: f64,
    lambda_rest: f64,
    length_rest: f64,
) -> Result<f64> {
    for (q, v) in [
        ("inversion_density_rest", inversion_density_rest),
        ("lambda_rest", lambda_rest),
        ("length_rest", length_rest),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::domain(q, ">= 0", v));
        }
    }
    Ok(inversion_density_rest * lambda_rest * length_rest * length_rest)
}

/// Initial Bloch angle θ₀ = 2/√N.
pub fn tipping_angle(particle_count: f64) -> Result<f64> {
    positive("particle_count", particle_count)?;
    Ok(2.0 / libm::sqrt(particle_count))
}

/// I_sat = cε₀ħ² / (8d′²T₁T₂). Rest-frame timescales give the rest-frame
/// value, observer-frame timescales the observer-frame value.
pub fn saturation_intensity(dipole_rest: f64, t1: f64, t2: f64) -> Result<f64> {
    positive("dipole_rest", dipole_rest)?;
    positive("t1", t1)?;
    positive("t2", t2)?;
    Ok(SPEED_OF_LIGHT * VACUUM_PERMITTIVITY * HBAR * HBAR
        / (8.0 * dipole_rest * dipole_rest * t1 * t2))
}

/// Rest-frame unsaturated gain α′ = 2T₂′/(L′T_R′).
pub fn gain_coefficient_rest(t2_rest: f64, length_rest: f64, tr_rest: f64) -> Result<f64> {
    positive("t2_rest", t2_rest)?;
    positive("length_rest", length_rest)?;
    positive("tr_rest", tr_rest)?;
    Ok(2.0 * t2_rest / (length_rest * tr_rest))
}
