use num_complex::Complex64;

use super::types::{PumpSpec, VelocityChannel};
use crate::params::{SampleSpec, TimescaleSpec, TransitionSpec, HBAR};
use crate::relativity::{channel_detuning, FrameVelocity};
use crate::Result;

/// Observer-frame coefficients of the Bloch equations for one channel (SI).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochCoefficients {
    /// d′ (C m).
    pub dipole: f64,
    /// Channel detuning (rad/s).
    pub detuning: f64,
    /// 1/T₁ (1/s), observer frame; zero for no relaxation.
    pub inv_t1: f64,
    /// 1/T₂ (1/s), observer frame.
    pub inv_t2: f64,
    /// Λ_n′ (1/(m³ s)).
    pub pump_n: f64,
    /// Λ_P′ amplitude (C/(m² s)); the pump co-rotates with the channel
    /// detuning, Λ_P′ e^{ikΔv τ}.
    pub pump_p: f64,
}

impl BlochCoefficients {
    pub fn new(
        transition: &TransitionSpec,
        channel: &VelocityChannel,
        sample: &SampleSpec,
        timescales: &TimescaleSpec,
        pumps: &PumpSpec,
        frame: FrameVelocity,
    ) -> Result<Self> {
        let s = frame.time_factor();
        let t1 = timescales.t1_rest * s;
        let t2 = timescales.t2_rest * s;
        let n0 = 0.5 * channel.inversion_density_rest;
        let d = transition.dipole_rest;
        Ok(BlochCoefficients {
            dipole: d,
            detuning: channel_detuning(channel.dv_rest, transition.omega0_rest, frame.beta())?,
            inv_t1: 1.0 / t1,
            inv_t2: 1.0 / t2,
            pump_n: pumps.lambda_n.unwrap_or(n0 / t1),
            pump_p: pumps
                .lambda_p
                .unwrap_or(n0 * d * libm::sin(sample.tipping_angle) / t2),
        })
    }
}

impl BlochCoefficients {
    /// Polarization pump at retarded time `tau` (s).
    pub fn polarization_pump(&self, tau: f64) -> Complex64 {
        if self.detuning == 0.0 {
            Complex64::new(self.pump_p, 0.0)
        } else {
            let (s, c) = libm::sincos(self.detuning * tau);
            Complex64::new(self.pump_p * c, self.pump_p * s)
        }
    }
}

/// Time derivatives (dn′/dτ, dP′⁺/dτ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDerivative {
    pub inversion: f64,
    pub polarization: Complex64,
}

/// Right-hand side of the Bloch equations at one point, SI units:
///
/// ```text
/// dn′/dτ  = −(1/iħ)(P′⁺E⁺ − P′⁻E⁻) − n′/T₁ + Λ_n′
/// dP′⁺/dτ = i kΔv P′⁺ + (2i d′²/ħ) n′ E⁻ − P′⁺/T₂ + Λ_P′ e^{ikΔv τ}
/// ```
pub fn bloch_rhs(
    tau: f64,
    inversion: f64,
    polarization: Complex64,
    field: Complex64,
    coeffs: &BlochCoefficients,
) -> BlochDerivative {
    let i = Complex64::new(0.0, 1.0);
    let exchange = polarization * field - polarization.conj() * field.conj();
    let dn = -(exchange / (i * HBAR)).re - inversion * coeffs.inv_t1 + coeffs.pump_n;
    let dp = i * coeffs.detuning * polarization
        + i * (2.0 * coeffs.dipole * coeffs.dipole / HBAR) * inversion * field.conj()
        - polarization * coeffs.inv_t2
        + coeffs.polarization_pump(tau);
    BlochDerivative {
        inversion: dn,
        polarization: dp,
    }
}
