//! Reduced-scale invariant and oracle checks behind the `check` subcommand.

use relmaser_core::params::{particle_number, superradiance_time_rest, SampleSpec, TransitionSpec};
use relmaser_core::relativity::FrameVelocity;
use relmaser_core::solver::{run, ChannelSpec, PumpSpec, Scenario, Solver};
use relmaser_core::special::bessel_i0;

use crate::presets;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckOutcome {
            name,
            passed,
            detail,
        }
    }

    fn failed(name: &'static str, err: impl std::fmt::Display) -> Self {
        CheckOutcome {
            name,
            passed: false,
            detail: format!("error: {err}"),
        }
    }
}

/// A single-channel OH scenario at reduced size.
pub fn small_scenario(
    ntot: f64,
    beta: f64,
    n_z: usize,
    tau_max_rest: f64,
    steps_per_tr: f64,
) -> Scenario {
    let transition = TransitionSpec::oh_1612();
    let tr = superradiance_time_rest(
        transition.lambda_rest,
        ntot,
        presets::LENGTH,
        transition.gamma_sp_rest,
    )
    .expect("positive inputs");
    Scenario {
        name: "check".into(),
        transition,
        length_rest: presets::LENGTH,
        t1_rest: presets::T1,
        t2_rest: presets::T2,
        frame: FrameVelocity::new(beta).expect("|beta| < 1"),
        n_z,
        n_tau: (tau_max_rest / tr * steps_per_tr).ceil() as usize + 1,
        tau_max_rest,
        channels: vec![ChannelSpec {
            k: 0,
            inversion_density_rest: ntot,
        }],
        pumps: PumpSpec::default(),
        boundary_intensity: 0.0,
        record_stride: 1,
        snapshot_times: Vec::new(),
        threads: 1,
    }
}

fn derived() -> CheckOutcome {
    let t = TransitionSpec::oh_1612();
    let s = match SampleSpec::new(&t, presets::LENGTH, 2e4) {
        Ok(s) => s,
        Err(e) => return CheckOutcome::failed("derived parameters", e),
    };
    let tr = superradiance_time_rest(t.lambda_rest, 2e4, presets::LENGTH, t.gamma_sp_rest)
        .unwrap_or(f64::NAN);
    let n = particle_number(2e4, t.lambda_rest, presets::LENGTH).unwrap_or(f64::NAN);
    let ok = (tr / 22e-6 - 1.0).abs() < 0.05 && (n / 7e30 - 1.0).abs() < 0.10;
    CheckOutcome::new(
        "derived parameters",
        ok && s.particle_count == n,
        format!(
            "T_R' = {tr:.4e} s, N = {n:.4e}, theta0 = {:.4e}",
            s.tipping_angle
        ),
    )
}

/// Undepleted growth from a uniform seed against P₀ I₀(2√(τz/(L T_R))).
pub fn bessel_oracle(
    n_z: usize,
    n_tau: usize,
    max_argument: f64,
) -> Result<f64, relmaser_core::Error> {
    let ntot = 2e4;
    let mut sc = small_scenario(ntot, 0.0, n_z, 1.0, 50.0);
    let tr = superradiance_time_rest(0.186, ntot, presets::LENGTH, 1.282e-11)?;
    // Dephasing and pumping negligible on the simulated span.
    sc.t1_rest = 1e9 * tr;
    sc.t2_rest = 1e9 * tr;
    sc.pumps = PumpSpec::off();
    sc.tau_max_rest = max_argument * max_argument / 4.0 * tr;
    sc.n_tau = n_tau;
    let setup = sc.resolve()?;
    let length = setup.grid.length_observer;
    let mut solver = Solver::new(setup)?;
    let p0 = solver.channel_states()[0].polarization_plus[0];
    let mut worst: f64 = 0.0;
    while !solver.is_finished() {
        solver.step()?;
        if solver.step_index() % (n_tau / 10).max(1) != 0 && !solver.is_finished() {
            continue;
        }
        let tau = solver.tau();
        let state = &solver.channel_states()[0];
        for (j, p) in state.polarization_plus.iter().enumerate() {
            let z = length * j as f64 / (n_z - 1) as f64;
            let expected = p0.re * bessel_i0(2.0 * (tau * z / (length * tr)).sqrt());
            worst = worst.max(((p.re - expected) / expected).abs());
        }
    }
    Ok(worst)
}

fn bessel() -> CheckOutcome {
    match bessel_oracle(200, 2000, 10.0) {
        Ok(err) => CheckOutcome::new(
            "linear-regime Bessel oracle",
            err < 0.01,
            format!("max relative error {err:.3e}"),
        ),
        Err(e) => CheckOutcome::failed("linear-regime Bessel oracle", e),
    }
}

/// Largest drift of n′² + |P′⁺/d′|² at any grid point when relaxation and
/// pumps are off.
pub fn bloch_drift(n_z: usize, tau_max_rest: f64) -> Result<f64, relmaser_core::Error> {
    let mut sc = small_scenario(2e4, 0.0, n_z, tau_max_rest, 100.0);
    sc.t1_rest = 1e12;
    sc.t2_rest = 1e12;
    sc.pumps = PumpSpec::off();
    let setup = sc.resolve()?;
    let d = setup.transition.dipole_rest;
    let n0 = 0.5 * setup.sample.inversion_density_rest;
    let mut solver = Solver::new(setup)?;
    let length = |s: &Solver| -> Vec<f64> {
        let st = &s.channel_states()[0];
        st.inversion
            .iter()
            .zip(&st.polarization_plus)
            .map(|(n, p)| ((n / n0).powi(2) + (p.norm() / (d * n0)).powi(2)).sqrt())
            .collect()
    };
    let start = length(&solver);
    let mut worst: f64 = 0.0;
    while !solver.is_finished() {
        solver.step()?;
        for (a, b) in length(&solver).iter().zip(&start) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

fn conservation() -> CheckOutcome {
    match bloch_drift(60, 0.02) {
        Ok(d) => CheckOutcome::new(
            "Bloch-vector conservation",
            d < 1e-5,
            format!("max drift {d:.3e}"),
        ),
        Err(e) => CheckOutcome::failed("Bloch-vector conservation", e),
    }
}

fn merge() -> CheckOutcome {
    let mut one = small_scenario(1.2e4, 0.0, 60, 0.03, 50.0);
    let mut two = one.clone();
    two.channels = vec![
        ChannelSpec {
            k: 0,
            inversion_density_rest: 6e3,
        },
        ChannelSpec {
            k: 0,
            inversion_density_rest: 6e3,
        },
    ];
    one.record_stride = 20;
    two.record_stride = 20;
    match (run(&one), run(&two)) {
        (Ok(a), Ok(b)) => {
            let peak = a.endfire.iter().map(|s| s.intensity).fold(0.0, f64::max);
            let dev = a
                .endfire
                .iter()
                .zip(&b.endfire)
                .map(|(x, y)| (x.intensity - y.intensity).abs())
                .fold(0.0, f64::max)
                / peak;
            CheckOutcome::new(
                "aligned-channel merge",
                dev < 1e-9,
                format!("max deviation {dev:.3e} of peak"),
            )
        }
        (Err(e), _) | (_, Err(e)) => CheckOutcome::failed("aligned-channel merge", e),
    }
}

fn frame_scaling() -> CheckOutcome {
    let results: Result<Vec<_>, _> = [0.0, 0.5, -0.5]
        .iter()
        .map(|&b| run(&small_scenario(2e4, b, 60, 0.03, 50.0)))
        .collect();
    let results = match results {
        Ok(r) => r,
        Err(e) => return CheckOutcome::failed("frame scaling", e),
    };
    let peak = |i: usize| results[i].peak().map(|(_, s)| s).expect("nonempty");
    let (p0, pp, pm) = (peak(0), peak(1), peak(2));
    let intensity_up = pp.intensity / p0.intensity;
    let intensity_down = p0.intensity / pm.intensity;
    let time_ratio = pp.tau / p0.tau;
    let ok = (intensity_up / 3.0 - 1.0).abs() < 0.02
        && (intensity_down / 3.0 - 1.0).abs() < 0.02
        && (time_ratio * 3f64.sqrt() - 1.0).abs() < 0.02;
    CheckOutcome::new(
        "frame scaling",
        ok,
        format!(
            "peak ratios {intensity_up:.5}, {intensity_down:.5}; peak-time ratio {time_ratio:.5}"
        ),
    )
}

fn determinism() -> CheckOutcome {
    let mut a = small_scenario(2e4, 0.0, 64, 0.02, 50.0);
    a.channels = vec![
        ChannelSpec {
            k: -3,
            inversion_density_rest: 1e4,
        },
        ChannelSpec {
            k: 3,
            inversion_density_rest: 1e4,
        },
    ];
    let mut b = a.clone();
    b.threads = 4;
    match (run(&a), run(&b)) {
        (Ok(x), Ok(y)) => CheckOutcome::new(
            "thread-count determinism",
            x == y,
            if x == y {
                "bitwise identical".into()
            } else {
                "results differ".into()
            },
        ),
        (Err(e), _) | (_, Err(e)) => CheckOutcome::failed("thread-count determinism", e),
    }
}

/// Runs the full reduced-scale suite.
pub fn run_checks() -> Vec<CheckOutcome> {
    vec![
        derived(),
        bessel(),
        conservation(),
        merge(),
        frame_scaling(),
        determinism(),
    ]
}
