use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::field::field_scan;
use super::model::Model;
use super::types::*;
use crate::error::Error;
use crate::params::{
    gain_coefficient_rest, saturation_intensity, SPEED_OF_LIGHT, VACUUM_PERMITTIVITY,
};
use crate::Result;

/// Initial state: every channel at its pump fixed point n′ᵥ = n′ₜᵥ/2 with a
/// uniform real polarization seed d′n′₀ᵥ sin θ₀; the field is the one the
/// seed polarization produces from the boundary value at τ = 0.
pub fn init_state(setup: &RunSetup) -> Result<(Vec<ChannelState>, FieldState)> {
    let solver = Solver::new(setup.clone())?;
    Ok((solver.channel_states(), solver.field_state()))
}

/// Integrates a [`Scenario`] over its full grid.
pub fn run(scenario: &Scenario) -> Result<SimulationResult> {
    Solver::new(scenario.resolve()?)?.run()
}

/// Exclusive owner of one integration.
pub struct Solver {
    setup: RunSetup,
    model: Model,
    n: Vec<f64>,
    p: Vec<Complex64>,
    step_index: usize,
    field: Vec<Complex64>,
    pumps: Vec<Complex64>,
    dn: Vec<f64>,
    dp: Vec<Complex64>,
    acc_n: Vec<f64>,
    acc_p: Vec<Complex64>,
    tmp_n: Vec<f64>,
    tmp_p: Vec<Complex64>,
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl core::fmt::Debug for Solver {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Solver")
            .field("step_index", &self.step_index)
            .field("channels", &self.model.channels.len())
            .field("n_z", &self.model.n_z)
            .finish()
    }
}

impl Solver {
    pub fn new(setup: RunSetup) -> Result<Self> {
        let model = Model::new(&setup)?;
        let n_z = model.n_z;
        let len = n_z * model.channels.len();
        let mut n = Vec::with_capacity(len);
        let mut p = Vec::with_capacity(len);
        for ch in &model.channels {
            n.extend(std::iter::repeat_n(ch.weight, n_z));
            p.extend(std::iter::repeat_n(
                Complex64::new(ch.weight * model.seed, 0.0),
                n_z,
            ));
        }
        #[cfg(feature = "parallel")]
        let pool = if setup.threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(setup.threads)
                    .build()
                    .map_err(|e| Error::Config(alloc::format!("thread pool: {e}")))?,
            )
        } else {
            None
        };
        let zero = Complex64::new(0.0, 0.0);
        let n_channels = model.channels.len();
        Ok(Solver {
            setup,
            model,
            n,
            p,
            step_index: 0,
            field: vec![zero; n_z],
            pumps: Vec::with_capacity(n_channels),
            dn: vec![0.0; len],
            dp: vec![zero; len],
            acc_n: vec![0.0; len],
            acc_p: vec![zero; len],
            tmp_n: vec![0.0; len],
            tmp_p: vec![zero; len],
            #[cfg(feature = "parallel")]
            pool,
        })
    }

    pub fn setup(&self) -> &RunSetup {
        &self.setup
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    /// Current retarded time (s).
    pub fn tau(&self) -> f64 {
        self.setup.grid.tau_at(self.step_index)
    }

    pub fn is_finished(&self) -> bool {
        self.step_index + 1 >= self.setup.grid.n_tau
    }

    /// Channel states in SI units.
    pub fn channel_states(&self) -> Vec<ChannelState> {
        let n_z = self.model.n_z;
        let pu = self.model.dipole * self.model.n0;
        (0..self.model.channels.len())
            .map(|c| ChannelState {
                inversion: self.n[c * n_z..(c + 1) * n_z]
                    .iter()
                    .map(|v| v * self.model.n0)
                    .collect(),
                polarization_plus: self.p[c * n_z..(c + 1) * n_z]
                    .iter()
                    .map(|v| v * pu)
                    .collect(),
            })
            .collect()
    }

    /// Field of the current state, SI units.
    pub fn field_state(&self) -> FieldState {
        let e = self.dimensionless_field();
        FieldState {
            envelope_plus: e.iter().map(|v| v * self.model.field_unit).collect(),
            boundary_input: self.setup.boundary.clone(),
        }
    }

    fn dimensionless_field(&self) -> Vec<Complex64> {
        let mut e = vec![Complex64::new(0.0, 0.0); self.model.n_z];
        let tau = self.step_index as f64 * self.model.dtau;
        field_scan(
            &self.p,
            self.model.n_z,
            self.model.coupling,
            self.model.dz,
            self.model.boundary_at(tau),
            &mut e,
        );
        e
    }

    fn evaluate(&mut self, tau: f64, from_tmp: bool) -> Result<()> {
        let m = &self.model;
        let (n, p) = if from_tmp {
            (&self.tmp_n, &self.tmp_p)
        } else {
            (&self.n, &self.p)
        };
        field_scan(
            p,
            m.n_z,
            m.coupling,
            m.dz,
            m.boundary_at(tau),
            &mut self.field,
        );
        self.pumps.clear();
        self.pumps
            .extend((0..m.channels.len()).map(|c| m.polarization_pump(c, tau)));
        if !self.field[m.n_z - 1].is_finite() {
            let j = self
                .field
                .iter()
                .position(|e| !e.is_finite())
                .unwrap_or(m.n_z - 1);
            return Err(Error::NonFinite {
                tau: tau * m.tr,
                z: j as f64 * m.dz * m.length,
                what: "field envelope",
            });
        }
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            let chunk = n.len().div_ceil(pool.current_num_threads());
            let field = &self.field;
            let pumps = &self.pumps;
            pool.install(|| {
                self.dn
                    .par_chunks_mut(chunk)
                    .zip(self.dp.par_chunks_mut(chunk))
                    .enumerate()
                    .for_each(|(i, (dn, dp))| {
                        let start = i * chunk;
                        let end = start + dn.len();
                        bloch_block(
                            m,
                            field,
                            pumps,
                            &n[start..end],
                            &p[start..end],
                            dn,
                            dp,
                            start,
                        );
                    });
            });
            return Ok(());
        }
        bloch_block(
            m,
            &self.field,
            &self.pumps,
            n,
            p,
            &mut self.dn,
            &mut self.dp,
            0,
        );
        Ok(())
    }

    /// Advances the state by one retarded-time step with classical RK4. The
    /// field is re-derived from each substage's polarization.
    pub fn step(&mut self) -> Result<()> {
        if self.is_finished() {
            return Err(Error::Config("grid exhausted: no steps left".into()));
        }
        let h = self.model.dtau;
        let t = self.step_index as f64 * h;

        self.evaluate(t, false)?;
        self.acc_n.copy_from_slice(&self.dn);
        self.acc_p.copy_from_slice(&self.dp);
        axpy_into(
            &mut self.tmp_n,
            &mut self.tmp_p,
            &self.n,
            &self.p,
            0.5 * h,
            &self.dn,
            &self.dp,
        );

        self.evaluate(t + 0.5 * h, true)?;
        accumulate(&mut self.acc_n, &mut self.acc_p, 2.0, &self.dn, &self.dp);
        axpy_into(
            &mut self.tmp_n,
            &mut self.tmp_p,
            &self.n,
            &self.p,
            0.5 * h,
            &self.dn,
            &self.dp,
        );

        self.evaluate(t + 0.5 * h, true)?;
        accumulate(&mut self.acc_n, &mut self.acc_p, 2.0, &self.dn, &self.dp);
        axpy_into(
            &mut self.tmp_n,
            &mut self.tmp_p,
            &self.n,
            &self.p,
            h,
            &self.dn,
            &self.dp,
        );

        self.evaluate(t + h, true)?;
        accumulate(&mut self.acc_n, &mut self.acc_p, 1.0, &self.dn, &self.dp);

        let w = h / 6.0;
        for (y, a) in self.n.iter_mut().zip(&self.acc_n) {
            *y += w * a;
        }
        for (y, a) in self.p.iter_mut().zip(&self.acc_p) {
            *y += a * w;
        }
        self.step_index += 1;
        Ok(())
    }

    fn endfire(&self, e: &[Complex64]) -> EndfireSample {
        let field = e[self.model.n_z - 1] * self.model.field_unit;
        EndfireSample {
            tau: self.tau(),
            intensity: 0.5 * SPEED_OF_LIGHT * VACUUM_PERMITTIVITY * field.norm_sqr(),
            field,
        }
    }

    fn channel_samples(&self) -> impl Iterator<Item = ChannelSample> + '_ {
        let n_z = self.model.n_z;
        let tau = self.tau();
        (0..self.model.channels.len()).map(move |c| {
            let ns = &self.n[c * n_z..(c + 1) * n_z];
            let ps = &self.p[c * n_z..(c + 1) * n_z];
            let mean = ns.iter().sum::<f64>() / n_z as f64;
            let pmax = ps.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
            ChannelSample {
                tau,
                mean_inversion: mean * self.model.n0,
                max_polarization: libm::sqrt(pmax) * self.model.dipole * self.model.n0,
            }
        })
    }

    fn snapshot(&self, e: &[Complex64]) -> Snapshot {
        let states = self.channel_states();
        Snapshot {
            tau: self.tau(),
            z: (0..self.model.n_z)
                .map(|j| self.setup.grid.z_at(j))
                .collect(),
            inversion: states.iter().map(|s| s.inversion.clone()).collect(),
            polarization_abs: states
                .iter()
                .map(|s| s.polarization_plus.iter().map(|v| v.norm()).collect())
                .collect(),
            field_abs: e
                .iter()
                .map(|v| (v * self.model.field_unit).norm())
                .collect(),
        }
    }

    /// Derived parameters of the configured run.
    pub fn metadata(&self) -> DerivedParameters {
        let s = &self.setup;
        let frame = s.frame;
        let tf = frame.time_factor();
        let ts = &s.timescales;
        let alpha_rest =
            gain_coefficient_rest(ts.t2_rest, s.sample.length_rest, ts.tr_rest).unwrap_or(f64::NAN);
        let d = s.transition.dipole_rest;
        DerivedParameters {
            beta: frame.beta(),
            gamma: frame.gamma(),
            omega_rest: s.transition.omega0_rest,
            omega_observer: s.transition.omega0_rest * frame.doppler_factor(),
            dipole: d,
            length_rest: s.sample.length_rest,
            length_observer: s.grid.length_observer,
            inversion_density_rest: s.sample.inversion_density_rest,
            particle_count: s.sample.particle_count,
            tipping_angle: s.sample.tipping_angle,
            tr_rest: ts.tr_rest,
            tr_observer: ts.tr_rest * tf,
            t1_observer: ts.t1_rest * tf,
            t2_observer: ts.t2_rest * tf,
            alpha_rest,
            alpha_observer: alpha_rest * frame.gamma(),
            saturation_intensity_rest: saturation_intensity(d, ts.t1_rest, ts.t2_rest)
                .unwrap_or(f64::NAN),
            saturation_intensity_observer: saturation_intensity(
                d,
                ts.t1_rest * tf,
                ts.t2_rest * tf,
            )
            .unwrap_or(f64::NAN),
            superradiant: ts.is_superradiant(),
            dtau: s.grid.dtau(),
            dz: s.grid.dz(),
            coupling: self.model.coupling,
        }
    }

    fn svea_ratio(&self, e: &[Complex64]) -> f64 {
        let m = &self.model;
        let k = self.metadata().omega_observer / SPEED_OF_LIGHT;
        let mut worst: f64 = 0.0;
        for (j, ej) in e.iter().enumerate() {
            let mag = ej.norm();
            if mag == 0.0 {
                continue;
            }
            let mut src = Complex64::new(0.0, 0.0);
            for c in 0..m.channels.len() {
                src += self.p[c * m.n_z + j].conj();
            }
            // |∂ẽ/∂z̃| / |ẽ| per unit z̃, converted to per metre.
            let rate = m.coupling * src.norm() / mag / m.length;
            worst = worst.max(rate / k);
        }
        worst
    }

    /// Integrates to the end of the grid, recording the endfire series,
    /// per-channel summaries and requested snapshots.
    pub fn run(mut self) -> Result<SimulationResult> {
        let grid = self.setup.grid;
        let stride = self.setup.record_stride.max(1);
        let last = grid.n_tau - 1;
        let mut snap_steps: Vec<usize> = self
            .setup
            .snapshot_times
            .iter()
            .map(|&t| {
                let idx = libm::round(t / grid.dtau());
                if idx <= 0.0 {
                    0
                } else {
                    (idx as usize).min(last)
                }
            })
            .collect();
        snap_steps.sort_unstable();
        snap_steps.dedup();

        let n_records = last / stride + 2;
        let mut endfire = Vec::with_capacity(n_records);
        let mut summaries: Vec<Vec<ChannelSample>> = (0..self.model.channels.len())
            .map(|_| Vec::with_capacity(n_records))
            .collect();
        let mut snapshots = Vec::with_capacity(snap_steps.len());
        let mut next_snap = 0;

        loop {
            let i = self.step_index;
            let record = i.is_multiple_of(stride) || i == last;
            let snap = next_snap < snap_steps.len() && snap_steps[next_snap] == i;
            if record || snap {
                let e = self.dimensionless_field();
                if record {
                    endfire.push(self.endfire(&e));
                    for (c, sample) in self.channel_samples().enumerate() {
                        summaries[c].push(sample);
                    }
                }
                if snap {
                    snapshots.push(self.snapshot(&e));
                    next_snap += 1;
                }
            }
            if i == last {
                break;
            }
            self.step()?;
        }

        let e = self.dimensionless_field();
        if let Some(j) = self.n.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                tau: self.tau(),
                z: grid.z_at(j % self.model.n_z),
                what: "inversion",
            });
        }
        Ok(SimulationResult {
            svea_ratio: self.svea_ratio(&e),
            metadata: self.metadata(),
            endfire,
            channel_summaries: summaries,
            snapshots,
        })
    }
}

/// Dimensionless Bloch right-hand side over a contiguous block of the
/// channel-major state starting at global index `offset`.
#[allow(clippy::too_many_arguments)]
fn bloch_block(
    m: &Model,
    field: &[Complex64],
    pumps: &[Complex64],
    n: &[f64],
    p: &[Complex64],
    dn: &mut [f64],
    dp: &mut [Complex64],
    offset: usize,
) {
    let n_z = m.n_z;
    for (k, ((&nv, &pv), (dnv, dpv))) in n
        .iter()
        .zip(p)
        .zip(dn.iter_mut().zip(dp.iter_mut()))
        .enumerate()
    {
        let g = offset + k;
        let c = g / n_z;
        let ch = &m.channels[c];
        let e = field[g % n_z];
        // i·conj(e)
        let ie_conj = Complex64::new(e.im, e.re);
        *dnv = -(pv * e).im - nv * m.inv_t1 + ch.pump_n;
        *dpv = Complex64::new(-ch.detuning * pv.im, ch.detuning * pv.re) + ie_conj * nv
            - pv * m.inv_t2
            + pumps[c];
    }
}

fn axpy_into(
    out_n: &mut [f64],
    out_p: &mut [Complex64],
    n: &[f64],
    p: &[Complex64],
    a: f64,
    dn: &[f64],
    dp: &[Complex64],
) {
    for ((o, y), d) in out_n.iter_mut().zip(n).zip(dn) {
        *o = y + a * d;
    }
    for ((o, y), d) in out_p.iter_mut().zip(p).zip(dp) {
        *o = y + d * a;
    }
}

fn accumulate(acc_n: &mut [f64], acc_p: &mut [Complex64], w: f64, dn: &[f64], dp: &[Complex64]) {
    for (a, d) in acc_n.iter_mut().zip(dn) {
        *a += w * d;
    }
    for (a, d) in acc_p.iter_mut().zip(dp) {
        *a += d * w;
    }
}
