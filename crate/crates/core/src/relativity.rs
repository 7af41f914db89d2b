//! Lorentz kinematics for a source moving along the line of sight.
//!
//! β is signed: positive for a source approaching the observer, negative for
//! a receding one. Every formula takes the signed value.

use crate::error::Error;
use crate::params::SPEED_OF_LIGHT;
use crate::Result;

/// Largest rest-frame velocity offset accepted by the linearised offset
/// transform, as a fraction of c.
pub const MAX_OFFSET_FRACTION: f64 = 0.01;

/// Dimensionless source velocity β = v₀/c, |β| < 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct FrameVelocity(f64);

impl FrameVelocity {
    pub const REST: FrameVelocity = FrameVelocity(0.0);

    pub fn new(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(FrameVelocity(beta))
    }

    pub fn beta(self) -> f64 {
        self.0
    }

    pub fn gamma(self) -> f64 {
        1.0 / libm::sqrt(1.0 - self.0 * self.0)
    }

    /// γ(1+β) = √((1+β)/(1−β)): observed over emitted frequency.
    pub fn doppler_factor(self) -> f64 {
        libm::sqrt((1.0 + self.0) / (1.0 - self.0))
    }

    /// √((1−β)/(1+β)): observed over proper duration.
    pub fn time_factor(self) -> f64 {
        libm::sqrt((1.0 - self.0) / (1.0 + self.0))
    }

    /// (1+β)/(1−β).
    pub fn intensity_factor(self) -> f64 {
        (1.0 + self.0) / (1.0 - self.0)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("beta", "|beta| < 1", beta))
    }
}

pub fn lorentz_gamma(beta: f64) -> Result<f64> {
    Ok(FrameVelocity::new(beta)?.gamma())
}

/// Observed carrier frequency ω = γω₀′(1+β).
pub fn doppler_frequency(omega0_rest: f64, beta: f64) -> Result<f64> {
    let frame = FrameVelocity::new(beta)?;
    crate::error::positive("omega0_rest", omega0_rest)?;
    Ok(omega0_rest * frame.doppler_factor())
}

/// Observer-frame duration of a rest-frame interval, t √((1−β)/(1+β)).
pub fn timescale_to_observer(t_rest: f64, beta: f64) -> Result<f64> {
    let frame = FrameVelocity::new(beta)?;
    crate::error::positive("t_rest", t_rest)?;
    Ok(t_rest * frame.time_factor())
}

/// Intensity transformation factor (1+β)/(1−β).
pub fn intensity_boost(beta: f64) -> Result<f64> {
    Ok(FrameVelocity::new(beta)?.intensity_factor())
}

/// Contracted length L = L′/γ.
pub fn length_to_observer(length_rest: f64, beta: f64) -> Result<f64> {
    let frame = FrameVelocity::new(beta)?;
    crate::error::positive("length_rest", length_rest)?;
    Ok(length_rest / frame.gamma())
}

/// Linearised velocity-offset transform Δv = Δv′(1 − β²), valid for
/// |Δv′| < 0.01 c.
pub fn velocity_offset_to_observer(dv_rest: f64, beta: f64) -> Result<f64> {
    let frame = FrameVelocity::new(beta)?;
    if !(dv_rest.abs() < MAX_OFFSET_FRACTION * SPEED_OF_LIGHT) {
        return Err(Error::Precondition {
            quantity: "dv_rest",
            constraint: "|dv_rest| < 0.01 c",
            value: dv_rest,
        });
    }
    let b = frame.beta();
    Ok(dv_rest * (1.0 - b * b))
}

/// Observer-frame angular detuning of a velocity channel offset by Δv′ in the
/// rest frame.
///
/// The channel's carrier is ω(β + Δβ); differentiating the Doppler factor
/// gives dω = ωγ² dβ, so the detuning is kΔv γ² with k = ω/c and Δv the
/// observer-frame offset. This equals the Doppler-shifted rest-frame detuning
/// γ(1+β) k′Δv′, which keeps the detuning to carrier ratio frame invariant.
pub fn channel_detuning(dv_rest: f64, omega0_rest: f64, beta: f64) -> Result<f64> {
    let omega = doppler_frequency(omega0_rest, beta)?;
    let dv = velocity_offset_to_observer(dv_rest, beta)?;
    let gamma = lorentz_gamma(beta)?;
    Ok(omega / SPEED_OF_LIGHT * dv * gamma * gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert_eq!(lorentz_gamma(0.0).unwrap(), 1.0);
        // 1/sqrt(0.75)
        let g = lorentz_gamma(0.5).unwrap();
        assert!((g - 1.154_700_538_379_251_5).abs() < 1e-15);
        assert_eq!(lorentz_gamma(-0.5).unwrap(), g);
        assert!(lorentz_gamma(1.0).is_err());
        assert!(lorentz_gamma(-1.2).is_err());
        assert!(lorentz_gamma(f64::NAN).is_err());
    }

    #[test]
    fn doppler_frequency_values() {
        let w0 = 1.0e10;
        assert_eq!(doppler_frequency(w0, 0.0).unwrap(), w0);
        let up = doppler_frequency(w0, 0.5).unwrap();
        assert!((up / w0 - 3f64.sqrt()).abs() < 1e-15);
        let down = doppler_frequency(w0, -0.5).unwrap();
        assert!((down / w0 - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(doppler_frequency(0.0, 0.1).is_err());
    }

    #[test]
    fn timescale_transform() {
        let tr = 22.5e-6;
        assert_eq!(timescale_to_observer(tr, 0.0).unwrap(), tr);
        assert!((timescale_to_observer(tr, 0.5).unwrap() - 12.990_381_056_766_58e-6).abs() < 1e-15);
        assert!(
            (timescale_to_observer(tr, -0.5).unwrap() - 38.971_143_170_299_74e-6).abs() < 1e-14
        );
        assert!(timescale_to_observer(-1.0, 0.0).is_err());
    }

    #[test]
    fn intensity_boost_values() {
        assert!((intensity_boost(0.5).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(intensity_boost(0.0).unwrap(), 1.0);
        assert!((intensity_boost(-0.5).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn length_contraction() {
        let l = 4.2e13;
        assert_eq!(length_to_observer(l, 0.0).unwrap(), l);
        let lc = length_to_observer(l, 0.5).unwrap();
        assert!((lc - 3.637_306_695_894_642e13).abs() / lc < 1e-14);
        assert_eq!(length_to_observer(l, -0.5).unwrap(), lc);
    }

    #[test]
    fn velocity_offset_transform() {
        assert_eq!(velocity_offset_to_observer(74.4, 0.0).unwrap(), 74.4);
        assert!((velocity_offset_to_observer(74.4, 0.5).unwrap() - 55.8).abs() < 1e-12);
        for b in [-0.9, 0.0, 0.7] {
            assert_eq!(velocity_offset_to_observer(0.0, b).unwrap(), 0.0);
        }
        let err = velocity_offset_to_observer(0.02 * SPEED_OF_LIGHT, 0.0).unwrap_err();
        assert_eq!(err.category(), "precondition");
    }

    #[test]
    fn detuning_over_carrier_is_frame_invariant() {
        let w0 = 1.0127e10;
        let dv = 74.4;
        let rest = channel_detuning(dv, w0, 0.0).unwrap() / w0;
        for b in [-0.9, -0.5, 0.5, 0.9] {
            let r = channel_detuning(dv, w0, b).unwrap() / doppler_frequency(w0, b).unwrap();
            assert!(((r - rest) / rest).abs() < 1e-12, "beta {b}");
        }
    }
}
