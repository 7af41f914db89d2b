//! Closed-form maser limits and the linear-regime growth solution.
//!
//! The maser formulas describe the quasi-steady state reached when both the
//! inversion and the polarization stop evolving; the Bessel solution
//! describes the early, undepleted transient with a uniform seed.

use num_complex::Complex64;

use crate::error::{positive, Error};
use crate::params::{saturation_intensity, SampleSpec, TimescaleSpec, TransitionSpec, HBAR};
use crate::relativity::FrameVelocity;
use crate::special::bessel_i0;
use crate::Result;

/// Intensity ratio above which the unsaturated formula is flagged invalid.
pub const UNSATURATED_LIMIT: f64 = 0.1;
/// Intensity ratio below which the saturated formula is flagged invalid.
pub const SATURATED_LIMIT: f64 = 10.0;

/// Inputs of the one-dimensional maser amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaserOperatingPoint {
    /// I₀ at z = 0, observer frame (W/m²).
    pub background_intensity: f64,
    /// α′ (1/m).
    pub gain_rest: f64,
    /// I_sat, observer frame (W/m²).
    pub saturation_intensity: f64,
    /// L′ (m); the observer-frame sample spans [0, L′/γ].
    pub length_rest: f64,
    pub frame: FrameVelocity,
}

impl MaserOperatingPoint {
    pub fn length_observer(&self) -> f64 {
        self.length_rest / self.frame.gamma()
    }

    /// Observer-frame gain α = γα′.
    pub fn gain_observer(&self) -> f64 {
        self.frame.gamma() * self.gain_rest
    }

    fn validate(&self) -> Result<()> {
        if !(self.background_intensity >= 0.0) {
            return Err(Error::domain(
                "background_intensity",
                ">= 0",
                self.background_intensity,
            ));
        }
        positive("gain_rest", self.gain_rest)?;
        positive("saturation_intensity", self.saturation_intensity)?;
        positive("length_rest", self.length_rest)?;
        Ok(())
    }

    fn check_z(&self, z: f64) -> Result<()> {
        let l = self.length_observer();
        if z >= 0.0 && z <= l * (1.0 + 1e-12) {
            Ok(())
        } else {
            Err(Error::domain("z", "0 <= z <= L", z))
        }
    }
}

/// An intensity together with whether the regime assumption behind the
/// formula holds at that point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValue {
    pub intensity: f64,
    pub regime_valid: bool,
}

/// Quasi-steady inversion n′ = n′₀ / (1 + I/I_sat).
pub fn steady_inversion(n0_rest: f64, intensity_ratio: f64) -> Result<f64> {
    if !(intensity_ratio >= 0.0) {
        return Err(Error::domain("intensity_ratio", ">= 0", intensity_ratio));
    }
    Ok(n0_rest / (1.0 + intensity_ratio))
}

/// Unsaturated maser: I(z) = I₀ e^{γα′z}.
pub fn unsaturated_profile(z: f64, point: &MaserOperatingPoint) -> Result<ProfileValue> {
    point.validate()?;
    point.check_z(z)?;
    let intensity = point.background_intensity * libm::exp(point.gain_observer() * z);
    Ok(ProfileValue {
        intensity,
        regime_valid: intensity <= UNSATURATED_LIMIT * point.saturation_intensity,
    })
}

/// Saturated maser: I(z) = [(1+β)/(1−β)] ħω₀′n′ₜ/(8T₁′) γz.
pub fn saturated_profile(
    z: f64,
    transition: &TransitionSpec,
    sample: &SampleSpec,
    timescales: &TimescaleSpec,
    frame: FrameVelocity,
) -> Result<ProfileValue> {
    let length = sample.length_rest / frame.gamma();
    if !(z >= 0.0 && z <= length * (1.0 + 1e-12)) {
        return Err(Error::domain("z", "0 <= z <= L", z));
    }
    let slope_rest =
        HBAR * transition.omega0_rest * sample.inversion_density_rest / (8.0 * timescales.t1_rest);
    let intensity = frame.intensity_factor() * slope_rest * frame.gamma() * z;
    let i_sat = saturation_intensity(
        transition.dipole_rest,
        timescales.t1_rest * frame.time_factor(),
        timescales.t2_rest * frame.time_factor(),
    )?;
    Ok(ProfileValue {
        intensity,
        regime_valid: intensity >= SATURATED_LIMIT * i_sat,
    })
}

/// Integrates the saturable amplifier dI/dz = γα′ I / (1 + I/I_sat) from
/// z = 0 to `z`, bridging the exponential and linear limits.
///
/// Classical RK4 on ln I with `steps` uniform steps.
pub fn saturable_profile(z: f64, point: &MaserOperatingPoint, steps: usize) -> Result<f64> {
    point.validate()?;
    point.check_z(z)?;
    positive("background_intensity", point.background_intensity)?;
    if steps == 0 {
        return Err(Error::domain("steps", ">= 1", 0.0));
    }
    let alpha = point.gain_observer();
    let i_sat = point.saturation_intensity;
    let rate = |u: f64| alpha / (1.0 + libm::exp(u) / i_sat);
    let h = z / steps as f64;
    let mut u = libm::log(point.background_intensity);
    for _ in 0..steps {
        let k1 = rate(u);
        let k2 = rate(u + 0.5 * h * k1);
        let k3 = rate(u + 0.5 * h * k2);
        let k4 = rate(u + h * k3);
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(libm::exp(u))
}

/// Undepleted-growth solution P₀ I₀(2√(τz/(LT_R))) for a seed P₀ uniform in
/// both z and τ, zero input field and negligible dephasing.
pub fn linear_regime_polarization(
    z: f64,
    tau: f64,
    seed_polarization: Complex64,
    length_observer: f64,
    tr_observer: f64,
) -> Complex64 {
    let arg = 2.0 * libm::sqrt((tau * z / (length_observer * tr_observer)).max(0.0));
    seed_polarization * bessel_i0(arg)
}

/// Heuristic superradiance delay τ_D ≈ (T_R/4) [ln(θ₀/2π)]².
///
/// Order-of-magnitude only; it ignores dephasing and continuous seeding.
pub fn delay_time_estimate(tr_observer: f64, tipping_angle: f64) -> Result<f64> {
    positive("tr_observer", tr_observer)?;
    if !(tipping_angle > 0.0 && tipping_angle < 1.0) {
        return Err(Error::domain(
            "tipping_angle",
            "0 < theta0 < 1",
            tipping_angle,
        ));
    }
    let l = libm::log(tipping_angle / (2.0 * core::f64::consts::PI));
    Ok(0.25 * tr_observer * l * l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(beta: f64) -> MaserOperatingPoint {
        MaserOperatingPoint {
            background_intensity: 1e-20,
            gain_rest: 2.0e-12,
            saturation_intensity: 1e-8,
            length_rest: 4.2e13,
            frame: FrameVelocity::new(beta).unwrap(),
        }
    }

    #[test]
    fn inversion_values() {
        assert_eq!(steady_inversion(1e4, 0.0).unwrap(), 1e4);
        assert_eq!(steady_inversion(1e4, 1.0).unwrap(), 5e3);
        assert!((steady_inversion(1.0, 1e3).unwrap() - 9.990_009_990_009_99e-4).abs() < 1e-18);
        assert!(steady_inversion(1.0, -0.1).is_err());
    }

    #[test]
    fn unsaturated_boundary_and_exponent() {
        let p = point(0.0);
        assert_eq!(unsaturated_profile(0.0, &p).unwrap().intensity, 1e-20);
        let z = core::f64::consts::LN_10 / p.gain_rest;
        let v = unsaturated_profile(z, &p).unwrap();
        assert!((v.intensity / 1e-19 - 1.0).abs() < 1e-13);
        assert!(v.regime_valid);
        assert!(unsaturated_profile(-1.0, &p).is_err());
        assert!(unsaturated_profile(5e13, &p).is_err());
    }

    #[test]
    fn exponent_is_frame_invariant() {
        for b in [-0.9, -0.5, 0.0, 0.3, 0.5, 0.9] {
            let p = point(b);
            let z_rest = 1.3e13;
            let z = z_rest / p.frame.gamma();
            let obs = p.gain_observer() * z;
            let rest = p.gain_rest * z_rest;
            assert!(((obs - rest) / rest).abs() < 1e-12);
        }
    }

    #[test]
    fn saturable_profile_bridges_limits() {
        let p = point(0.0);
        // far below saturation: pure exponential
        let small = MaserOperatingPoint {
            gain_rest: 1e-14,
            ..p
        };
        let z = 4.0e13;
        let i = saturable_profile(z, &small, 2000).unwrap();
        let e = unsaturated_profile(z, &small).unwrap().intensity;
        assert!((i / e - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bessel_solution_edges() {
        let p0 = Complex64::new(1e-9, 0.0);
        assert_eq!(linear_regime_polarization(0.0, 3.0, p0, 1.0, 1.0), p0);
        assert_eq!(linear_regime_polarization(0.7, 0.0, p0, 1.0, 1.0), p0);
        let v = linear_regime_polarization(1.0, 1.0, p0, 1.0, 1.0);
        assert!((v.re / 1e-9 - 2.279_585_302_336_067).abs() < 1e-12);
        let a = linear_regime_polarization(2.0, 0.5, p0, 1.0, 1.0);
        let b = linear_regime_polarization(0.5, 2.0, p0, 1.0, 1.0);
        assert_eq!(a, b);
    }

    #[test]
    fn delay_estimate() {
        let d = delay_time_estimate(37.5e-6, 7.8e-16).unwrap();
        // (T_R/4)(ln(θ₀/2π))² evaluated directly: 0.012575615958970226 s
        assert!((d / 0.012_575_615_958_970_226 - 1.0).abs() < 1e-12, "{d}");
        let d2 = delay_time_estimate(37.5e-6, 1e-10).unwrap();
        assert!(d2 < d);
        assert!(delay_time_estimate(37.5e-6, 1.5).is_err());
        assert!(delay_time_estimate(0.0, 0.1).is_err());
    }
}
