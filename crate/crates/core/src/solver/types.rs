use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::Error;
use crate::params::{SampleSpec, TimescaleSpec, TransitionSpec};
use crate::relativity::FrameVelocity;
use crate::Result;

/// Uniform observer-frame grid in retarded time and position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_z: usize,
    pub n_tau: usize,
    /// Total retarded time (s), observer frame.
    pub tau_max: f64,
    /// L = L′/γ (m).
    pub length_observer: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_z < 2 {
            return Err(Error::Config(alloc::format!(
                "n_z = {} must be >= 2",
                self.n_z
            )));
        }
        if self.n_tau < 2 {
            return Err(Error::Config(alloc::format!(
                "n_tau = {} must be >= 2",
                self.n_tau
            )));
        }
        if !(self.tau_max > 0.0 && self.tau_max.is_finite()) {
            return Err(Error::Config(alloc::format!(
                "tau_max = {:e} must be > 0",
                self.tau_max
            )));
        }
        if !(self.length_observer > 0.0 && self.length_observer.is_finite()) {
            return Err(Error::Config(alloc::format!(
                "length_observer = {:e} must be > 0",
                self.length_observer
            )));
        }
        Ok(())
    }

    pub fn dtau(&self) -> f64 {
        self.tau_max / (self.n_tau - 1) as f64
    }

    pub fn dz(&self) -> f64 {
        self.length_observer / (self.n_z - 1) as f64
    }

    pub fn tau_at(&self, i: usize) -> f64 {
        self.tau_max * i as f64 / (self.n_tau - 1) as f64
    }

    pub fn z_at(&self, j: usize) -> f64 {
        self.length_observer * j as f64 / (self.n_z - 1) as f64
    }
}

/// Fundamental rest-frame velocity step dv′ = λ′/τ_max′ resolvable over a
/// run of rest-frame duration τ_max′.
pub fn fundamental_velocity_step(lambda_rest: f64, tau_max_rest: f64) -> f64 {
    lambda_rest / tau_max_rest
}

/// A group of emitters offset by Δv′ from the central velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityChannel {
    /// Δv′ (m/s), rest frame.
    pub dv_rest: f64,
    /// n′ₜ of this channel (1/m³).
    pub inversion_density_rest: f64,
}

impl VelocityChannel {
    /// Channel at Δv′ = k dv′.
    pub fn at_step(k: i64, dv_step: f64, inversion_density_rest: f64) -> Self {
        VelocityChannel {
            dv_rest: k as f64 * dv_step,
            inversion_density_rest,
        }
    }
}

/// Inversion n′ᵥ(z) (1/m³) and polarization P′ᵥ⁺(z) (C/m²) of one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    pub inversion: Vec<f64>,
    pub polarization_plus: Vec<Complex64>,
}

/// Field envelope at z = 0 as a function of retarded time (V/m).
#[derive(Clone)]
pub struct BoundaryInput(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>);

impl BoundaryInput {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        BoundaryInput(Arc::new(f))
    }

    pub fn constant(value: Complex64) -> Self {
        BoundaryInput::new(move |_| value)
    }

    pub fn zero() -> Self {
        BoundaryInput::constant(Complex64::new(0.0, 0.0))
    }

    pub fn at(&self, tau: f64) -> Complex64 {
        (self.0)(tau)
    }
}

impl Default for BoundaryInput {
    fn default() -> Self {
        BoundaryInput::zero()
    }
}

impl fmt::Debug for BoundaryInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BoundaryInput(E(0) = {})", self.at(0.0))
    }
}

/// Observer-frame field envelope E⁺(z) (V/m). E⁻ is its conjugate.
#[derive(Debug, Clone)]
pub struct FieldState {
    pub envelope_plus: Vec<Complex64>,
    pub boundary_input: BoundaryInput,
}

/// Inversion and polarization pump rates. `None` selects the default
/// Λ_n′ = n′₀ᵥ/T₁ and Λ_P′ = n′₀ᵥ d′ sin θ₀ / T₂ per channel (observer-frame
/// T₁, T₂); a value is applied uniformly to every channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PumpSpec {
    /// Λ_n′ (1/(m³ s)).
    pub lambda_n: Option<f64>,
    /// Λ_P′ (C/(m² s)).
    pub lambda_p: Option<f64>,
}

impl PumpSpec {
    pub fn off() -> Self {
        PumpSpec {
            lambda_n: Some(0.0),
            lambda_p: Some(0.0),
        }
    }
}

/// Fully specified physical run over an explicit grid.
#[derive(Debug, Clone)]
pub struct RunSetup {
    pub transition: TransitionSpec,
    /// Reference sample: its density sets T_R, N and θ₀.
    pub sample: SampleSpec,
    pub timescales: TimescaleSpec,
    pub frame: FrameVelocity,
    pub grid: GridSpec,
    pub channels: Vec<VelocityChannel>,
    pub pumps: PumpSpec,
    pub boundary: BoundaryInput,
    /// Endfire samples are kept every `record_stride` steps.
    pub record_stride: usize,
    /// Observer-frame retarded times (s) at which full-grid snapshots are
    /// taken.
    pub snapshot_times: Vec<f64>,
    /// Worker threads for the Bloch update (needs the `parallel` feature).
    pub threads: usize,
}

/// A channel in the scenario description: offset k dv′ and density n′ₜ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub k: i64,
    pub inversion_density_rest: f64,
}

/// Rest-frame description of a run; [`Scenario::resolve`] turns it into a
/// [`RunSetup`].
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub transition: TransitionSpec,
    pub length_rest: f64,
    pub t1_rest: f64,
    pub t2_rest: f64,
    pub frame: FrameVelocity,
    pub n_z: usize,
    pub n_tau: usize,
    /// Duration in the source rest frame; the observer-frame span is
    /// τ_max′ √((1−β)/(1+β)) and dv′ = λ′/τ_max′.
    pub tau_max_rest: f64,
    pub channels: Vec<ChannelSpec>,
    pub pumps: PumpSpec,
    /// Observer-frame background intensity at z = 0 (W/m²).
    pub boundary_intensity: f64,
    pub record_stride: usize,
    pub snapshot_times: Vec<f64>,
    pub threads: usize,
}

impl Scenario {
    pub fn dv_step(&self) -> f64 {
        fundamental_velocity_step(self.transition.lambda_rest, self.tau_max_rest)
    }

    pub fn total_density(&self) -> f64 {
        self.channels.iter().map(|c| c.inversion_density_rest).sum()
    }

    pub fn resolve(&self) -> Result<RunSetup> {
        if self.channels.is_empty() {
            return Err(Error::Config(
                "at least one velocity channel is required".into(),
            ));
        }
        if !(self.tau_max_rest > 0.0 && self.tau_max_rest.is_finite()) {
            return Err(Error::Config(alloc::format!(
                "tau_max_rest = {:e} must be > 0",
                self.tau_max_rest
            )));
        }
        if !(self.boundary_intensity >= 0.0 && self.boundary_intensity.is_finite()) {
            return Err(Error::Config(alloc::format!(
                "boundary intensity = {:e} must be >= 0",
                self.boundary_intensity
            )));
        }
        let sample = SampleSpec::new(&self.transition, self.length_rest, self.total_density())?;
        let timescales = TimescaleSpec::new(&self.transition, &sample, self.t1_rest, self.t2_rest)?;
        let dv = self.dv_step();
        let channels = self
            .channels
            .iter()
            .map(|c| VelocityChannel::at_step(c.k, dv, c.inversion_density_rest))
            .collect();
        let grid = GridSpec {
            n_z: self.n_z,
            n_tau: self.n_tau,
            tau_max: self.tau_max_rest * self.frame.time_factor(),
            length_observer: self.length_rest / self.frame.gamma(),
        };
        let e0 = libm::sqrt(
            2.0 * self.boundary_intensity
                / (crate::params::SPEED_OF_LIGHT * crate::params::VACUUM_PERMITTIVITY),
        );
        Ok(RunSetup {
            transition: self.transition,
            sample,
            timescales,
            frame: self.frame,
            grid,
            channels,
            pumps: self.pumps,
            boundary: BoundaryInput::constant(Complex64::new(e0, 0.0)),
            record_stride: self.record_stride.max(1),
            snapshot_times: self.snapshot_times.clone(),
            threads: self.threads.max(1),
        })
    }
}

/// One endfire sample at z = L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndfireSample {
    /// Retarded time (s).
    pub tau: f64,
    /// I = (cε₀/2)|E⁺|² (W/m²).
    pub intensity: f64,
    /// E⁺(L, τ) (V/m).
    pub field: Complex64,
}

/// Per-channel summary at one retarded time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSample {
    pub tau: f64,
    /// Spatial mean of n′ᵥ (1/m³).
    pub mean_inversion: f64,
    /// max over z of |P′ᵥ⁺| (C/m²).
    pub max_polarization: f64,
}

/// Full-grid state at one retarded time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub tau: f64,
    /// z grid (m).
    pub z: Vec<f64>,
    /// n′ᵥ(z) per channel.
    pub inversion: Vec<Vec<f64>>,
    /// |P′ᵥ⁺(z)| per channel.
    pub polarization_abs: Vec<Vec<f64>>,
    /// |E⁺(z)|.
    pub field_abs: Vec<f64>,
}

/// Every derived quantity of a run, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParameters {
    pub beta: f64,
    pub gamma: f64,
    pub omega_rest: f64,
    pub omega_observer: f64,
    pub dipole: f64,
    pub length_rest: f64,
    pub length_observer: f64,
    pub inversion_density_rest: f64,
    pub particle_count: f64,
    pub tipping_angle: f64,
    pub tr_rest: f64,
    pub tr_observer: f64,
    pub t1_observer: f64,
    pub t2_observer: f64,
    pub alpha_rest: f64,
    pub alpha_observer: f64,
    pub saturation_intensity_rest: f64,
    pub saturation_intensity_observer: f64,
    pub superradiant: bool,
    pub dtau: f64,
    pub dz: f64,
    /// Dimensionless field coupling; 1 for an Einstein-A dipole.
    pub coupling: f64,
}

/// Output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub endfire: Vec<EndfireSample>,
    /// Indexed by channel, then by record.
    pub channel_summaries: Vec<Vec<ChannelSample>>,
    pub snapshots: Vec<Snapshot>,
    pub metadata: DerivedParameters,
    /// max over z of |∂E/∂z| / (k|E|) at the end of the run.
    pub svea_ratio: f64,
}

impl SimulationResult {
    /// SVEA diagnostic threshold above which a run is flagged.
    pub const SVEA_WARNING: f64 = 0.1;

    pub fn svea_warning(&self) -> bool {
        self.svea_ratio > Self::SVEA_WARNING
    }

    /// Index and value of the largest endfire intensity.
    pub fn peak(&self) -> Option<(usize, EndfireSample)> {
        self.endfire
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best, (i, s)| match best {
                Some((_, b)) if b.intensity >= s.intensity => best,
                _ => Some((i, s)),
            })
    }
}
