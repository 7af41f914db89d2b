//! Closed-form quantities evaluated from command-line parameters.

use clap::{Args, ValueEnum};

use relmaser_core::params::{
    derive_dipole, gain_coefficient_rest, particle_number, saturation_intensity,
    superradiance_time_rest, tipping_angle, SampleSpec, TimescaleSpec, TransitionSpec,
};
use relmaser_core::relativity::FrameVelocity;
use relmaser_core::special::bessel_i0;
use relmaser_core::steady_state::{
    delay_time_estimate, saturable_profile, saturated_profile, steady_inversion,
    unsaturated_profile, MaserOperatingPoint,
};

use crate::error::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Superradiance time T_R (needs --ntot, --length).
    Tr,
    /// Particle number N = n't λ' L'^2 (needs --ntot, --length).
    N,
    /// Initial tipping angle 2/√N (needs --ntot, --length).
    Theta,
    /// Transition dipole from Γ' and λ'.
    Dipole,
    /// Saturation intensity (needs --t1, --t2).
    Isat,
    /// Unsaturated gain α' = 2T2'/(L'T_R') (needs --ntot, --length, --t2).
    Gain,
    /// Saturated-maser intensity at --z (needs --ntot, --length, --t1, --t2).
    Saturated,
    /// Unsaturated-maser intensity at --z from --i0 (needs --ntot, --length, --t1, --t2).
    Unsaturated,
    /// Saturable amplifier I(z) from --i0 (needs --ntot, --length, --t1, --t2).
    Saturable,
    /// Steady inversion n'0/(1 + I/I_sat) (needs --ntot, --ratio).
    Inversion,
    /// Modified Bessel function I0 at --x.
    Bessel,
    /// Superradiance delay estimate (needs --ntot, --length).
    Delay,
    /// Lorentz and Doppler factors of --beta.
    Frame,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    /// Quantity to evaluate.
    #[arg(value_enum)]
    pub quantity: Quantity,
    /// Transition preset supplying λ' and Γ'.
    #[arg(long, default_value = "oh1612")]
    pub preset: String,
    /// Rest-frame wavelength λ' (m); overrides the preset.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Rest-frame spontaneous decay rate Γ' (1/s); overrides the preset.
    #[arg(long)]
    pub gamma_sp: Option<f64>,
    /// Rest-frame inversion density n't (1/m^3).
    #[arg(long)]
    pub ntot: Option<f64>,
    /// Rest-frame sample length L' (m).
    #[arg(long)]
    pub length: Option<f64>,
    /// Rest-frame T1' (s).
    #[arg(long)]
    pub t1: Option<f64>,
    /// Rest-frame T2' (s).
    #[arg(long)]
    pub t2: Option<f64>,
    /// Frame velocity β = v/c.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub beta: f64,
    /// Observer-frame position (m).
    #[arg(long)]
    pub z: Option<f64>,
    /// Observer-frame background intensity at z = 0 (W/m^2).
    #[arg(long)]
    pub i0: Option<f64>,
    /// Intensity ratio I/I_sat.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Argument of I0.
    #[arg(long)]
    pub x: Option<f64>,
}

fn need(v: Option<f64>, flag: &str, q: Quantity) -> Result<f64, AppError> {
    v.ok_or_else(|| {
        AppError::Usage(format!(
            "--{flag} is required for `{}`",
            q.to_possible_value().expect("named").get_name()
        ))
    })
}

fn line(out: &mut Vec<String>, key: &str, value: f64, unit: &str) {
    out.push(
        format!("{key} = {value:.16e} {unit}")
            .trim_end()
            .to_string(),
    );
}

/// Evaluates the requested quantity, returning the printed lines.
pub fn evaluate(a: &AnalyticArgs) -> Result<Vec<String>, AppError> {
    let base = match a.preset.as_str() {
        "oh1612" => TransitionSpec::oh_1612(),
        other => {
            return Err(AppError::Usage(format!(
                "unknown transition preset `{other}`; known: oh1612"
            )))
        }
    };
    let transition = TransitionSpec::new(
        a.lambda.unwrap_or(base.lambda_rest),
        a.gamma_sp.unwrap_or(base.gamma_sp_rest),
    )?;
    let frame = FrameVelocity::new(a.beta)?;
    let q = a.quantity;
    let sample = || -> Result<SampleSpec, AppError> {
        Ok(SampleSpec::new(
            &transition,
            need(a.length, "length", q)?,
            need(a.ntot, "ntot", q)?,
        )?)
    };
    let timescales = |s: &SampleSpec| -> Result<TimescaleSpec, AppError> {
        Ok(TimescaleSpec::new(
            &transition,
            s,
            need(a.t1, "t1", q)?,
            need(a.t2, "t2", q)?,
        )?)
    };
    let operating_point =
        || -> Result<(SampleSpec, TimescaleSpec, MaserOperatingPoint), AppError> {
            let s = sample()?;
            let t = timescales(&s)?;
            let point = MaserOperatingPoint {
                background_intensity: a.i0.unwrap_or(0.0),
                gain_rest: gain_coefficient_rest(t.t2_rest, s.length_rest, t.tr_rest)?,
                saturation_intensity: saturation_intensity(
                    transition.dipole_rest,
                    t.t1_rest * frame.time_factor(),
                    t.t2_rest * frame.time_factor(),
                )?,
                length_rest: s.length_rest,
                frame,
            };
            Ok((s, t, point))
        };
    let mut out = Vec::new();
    let s_factor = frame.time_factor();
    match q {
        Quantity::Tr => {
            let tr = superradiance_time_rest(
                transition.lambda_rest,
                need(a.ntot, "ntot", q)?,
                need(a.length, "length", q)?,
                transition.gamma_sp_rest,
            )?;
            line(&mut out, "tr_rest", tr, "s");
            line(&mut out, "tr_observer", tr * s_factor, "s");
        }
        Quantity::N => {
            let n = particle_number(
                need(a.ntot, "ntot", q)?,
                transition.lambda_rest,
                need(a.length, "length", q)?,
            )?;
            line(&mut out, "particle_count", n, "");
        }
        Quantity::Theta => {
            let n = particle_number(
                need(a.ntot, "ntot", q)?,
                transition.lambda_rest,
                need(a.length, "length", q)?,
            )?;
            line(&mut out, "tipping_angle", tipping_angle(n)?, "rad");
        }
        Quantity::Dipole => {
            line(
                &mut out,
                "dipole",
                derive_dipole(transition.gamma_sp_rest, transition.omega0_rest)?,
                "C m",
            );
        }
        Quantity::Isat => {
            let (t1, t2) = (need(a.t1, "t1", q)?, need(a.t2, "t2", q)?);
            line(
                &mut out,
                "saturation_intensity_rest",
                saturation_intensity(transition.dipole_rest, t1, t2)?,
                "W/m^2",
            );
            line(
                &mut out,
                "saturation_intensity_observer",
                saturation_intensity(transition.dipole_rest, t1 * s_factor, t2 * s_factor)?,
                "W/m^2",
            );
        }
        Quantity::Gain => {
            let s = sample()?;
            let tr = superradiance_time_rest(
                transition.lambda_rest,
                s.inversion_density_rest,
                s.length_rest,
                transition.gamma_sp_rest,
            )?;
            let alpha = gain_coefficient_rest(need(a.t2, "t2", q)?, s.length_rest, tr)?;
            line(&mut out, "alpha_rest", alpha, "1/m");
            line(&mut out, "alpha_observer", alpha * frame.gamma(), "1/m");
        }
        Quantity::Saturated => {
            let s = sample()?;
            let t = timescales(&s)?;
            let z = a.z.unwrap_or(s.length_rest / frame.gamma());
            let v = saturated_profile(z, &transition, &s, &t, frame)?;
            line(&mut out, "intensity", v.intensity, "W/m^2");
            out.push(format!("regime_valid = {}", v.regime_valid));
        }
        Quantity::Unsaturated => {
            let (_, _, point) = operating_point()?;
            need(a.i0, "i0", q)?;
            let z = a.z.unwrap_or(point.length_observer());
            let v = unsaturated_profile(z, &point)?;
            line(&mut out, "intensity", v.intensity, "W/m^2");
            out.push(format!("regime_valid = {}", v.regime_valid));
        }
        Quantity::Saturable => {
            let (_, _, point) = operating_point()?;
            need(a.i0, "i0", q)?;
            let z = a.z.unwrap_or(point.length_observer());
            line(
                &mut out,
                "intensity",
                saturable_profile(z, &point, 20_000)?,
                "W/m^2",
            );
        }
        Quantity::Inversion => {
            let n0 = 0.5 * need(a.ntot, "ntot", q)?;
            line(
                &mut out,
                "inversion",
                steady_inversion(n0, need(a.ratio, "ratio", q)?)?,
                "1/m^3",
            );
        }
        Quantity::Bessel => {
            line(&mut out, "i0", bessel_i0(need(a.x, "x", q)?), "");
        }
        Quantity::Delay => {
            let s = sample()?;
            let tr = superradiance_time_rest(
                transition.lambda_rest,
                s.inversion_density_rest,
                s.length_rest,
                transition.gamma_sp_rest,
            )?;
            line(
                &mut out,
                "delay_observer",
                delay_time_estimate(tr * s_factor, s.tipping_angle)?,
                "s",
            );
        }
        Quantity::Frame => {
            line(&mut out, "gamma", frame.gamma(), "");
            line(&mut out, "doppler_factor", frame.doppler_factor(), "");
            line(&mut out, "time_factor", frame.time_factor(), "");
            line(&mut out, "intensity_factor", frame.intensity_factor(), "");
        }
    }
    Ok(out)
}
