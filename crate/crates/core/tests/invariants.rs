mod common;

use common::{scenario, tr_rest};
use relmaser_core::params::{SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};
use relmaser_core::solver::{
    bloch_rhs, init_state, integrate_field, run, BlochCoefficients, BoundaryInput, ChannelSpec,
    ChannelState, PumpSpec, Solver,
};
use relmaser_core::{Complex64, Error};

#[test]
fn bloch_vector_length_is_conserved_without_relaxation() {
    let mut sc = scenario(2e4, 0.0, 60, 0.02, 100.0);
    sc.t1_rest = 1e12;
    sc.t2_rest = 1e12;
    sc.pumps = PumpSpec::off();
    let setup = sc.resolve().unwrap();
    let d = setup.transition.dipole_rest;
    let n0 = 0.5 * setup.sample.inversion_density_rest;
    let mut solver = Solver::new(setup).unwrap();
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
    let mut min_inversion = f64::INFINITY;
    while !solver.is_finished() {
        solver.step().unwrap();
        for (a, b) in length(&solver).iter().zip(&start) {
            worst = worst.max((a - b).abs());
        }
        min_inversion = min_inversion.min(solver.channel_states()[0].inversion[59] / n0);
    }
    // The run must pass through the burst for the check to mean anything.
    assert!(
        min_inversion < 0.0,
        "no burst: min inversion {min_inversion}"
    );
    assert!(worst < 1e-5, "drift {worst}");
}

#[test]
fn aligned_channels_merge_into_one() {
    let one = scenario(1.2e4, 0.0, 80, 0.04, 50.0);
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
    let a = run(&one).unwrap();
    let b = run(&two).unwrap();
    let peak = a.peak().unwrap().1.intensity;
    assert!(peak > 0.0);
    for (x, y) in a.endfire.iter().zip(&b.endfire) {
        assert!((x.intensity - y.intensity).abs() <= 1e-9 * peak);
    }
    for (x, y) in b.channel_summaries[0].iter().zip(&b.channel_summaries[1]) {
        assert_eq!(x, y);
    }
}

#[test]
fn frame_changes_scale_time_and_intensity() {
    let base = run(&scenario(2e4, 0.0, 60, 0.03, 50.0)).unwrap();
    for beta in [0.5, -0.5, 0.9] {
        let r = run(&scenario(2e4, beta, 60, 0.03, 50.0)).unwrap();
        let boost = (1.0 + beta) / (1.0 - beta);
        let stretch = ((1.0 - beta) / (1.0 + beta)).sqrt();
        assert_eq!(r.endfire.len(), base.endfire.len());
        let peak = base.peak().unwrap().1.intensity;
        for (x, y) in base.endfire.iter().zip(&r.endfire) {
            assert!((y.tau / (x.tau * stretch) - 1.0).abs() < 1e-12 || x.tau == 0.0);
            assert!((y.intensity / boost - x.intensity).abs() < 1e-9 * peak);
        }
    }
}

#[test]
fn zero_seed_never_radiates() {
    let mut setup = scenario(2e4, 0.0, 40, 0.02, 50.0).resolve().unwrap();
    setup.sample.tipping_angle = 0.0;
    let n0 = 0.5 * setup.sample.inversion_density_rest;
    let r = Solver::new(setup).unwrap().run().unwrap();
    assert!(r.endfire.iter().all(|s| s.intensity == 0.0));
    for s in &r.channel_summaries[0] {
        assert!((s.mean_inversion / n0 - 1.0).abs() < 1e-12);
        assert_eq!(s.max_polarization, 0.0);
    }
}

#[test]
fn step_size_rules_are_enforced() {
    let tr = tr_rest(2e4);
    // dτ = T_R/40
    let mut sc = scenario(2e4, 0.0, 40, 0.01, 50.0);
    sc.n_tau = (0.01 / tr * 40.0) as usize;
    assert!(matches!(run(&sc), Err(Error::Config(_))));
    // dτ·|δ| = 2π·k·dτ/τ_max above 0.1
    let mut sc = scenario(2e4, 0.0, 40, 0.01, 50.0);
    sc.channels = vec![ChannelSpec {
        k: 20_000,
        inversion_density_rest: 2e4,
    }];
    assert!(matches!(run(&sc), Err(Error::Config(_))));
    // Offsets beyond 0.01 c are outside the linearised transform.
    sc.channels = vec![ChannelSpec {
        k: 20_000_000,
        inversion_density_rest: 2e4,
    }];
    assert!(matches!(run(&sc), Err(Error::Precondition { .. })));
    // Grid length must be the contracted sample length.
    let mut setup = scenario(2e4, 0.5, 40, 0.01, 50.0).resolve().unwrap();
    setup.grid.length_observer = common::LENGTH;
    assert!(matches!(Solver::new(setup), Err(Error::Config(_))));
}

#[test]
fn non_finite_boundary_is_reported() {
    let mut setup = scenario(2e4, 0.0, 30, 0.01, 50.0).resolve().unwrap();
    let t_bad = 0.005;
    setup.boundary = BoundaryInput::new(move |t| {
        if t >= t_bad {
            Complex64::new(f64::NAN, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    match Solver::new(setup).unwrap().run() {
        Err(Error::NonFinite { tau, z, what }) => {
            assert!((tau - t_bad).abs() < 2.0 * tr_rest(2e4) / 50.0, "tau {tau}");
            assert_eq!(z, 0.0);
            assert_eq!(what, "field envelope");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn initial_state() {
    let mut sc = scenario(2e4, 0.0, 11, 0.01, 50.0);
    sc.channels = vec![
        ChannelSpec {
            k: -1,
            inversion_density_rest: 5e3,
        },
        ChannelSpec {
            k: 1,
            inversion_density_rest: 1.5e4,
        },
    ];
    let setup = sc.resolve().unwrap();
    let (states, field) = init_state(&setup).unwrap();
    let d = setup.transition.dipole_rest;
    let theta = setup.sample.tipping_angle;
    for (state, n) in states.iter().zip([5e3, 1.5e4]) {
        for (inv, p) in state.inversion.iter().zip(&state.polarization_plus) {
            assert!((inv / (0.5 * n) - 1.0).abs() < 1e-15);
            assert!((p.re / (0.5 * n * d * theta.sin()) - 1.0).abs() < 1e-12);
            assert_eq!(p.im, 0.0);
        }
    }
    assert_eq!(field.envelope_plus[0], Complex64::new(0.0, 0.0));
    // Uniform real source: E⁺(L) = i (ω₀′/2cε₀) Σ P′ L.
    let total_p = 0.5 * 2e4 * d * theta.sin();
    let expected = setup.transition.omega0_rest / (2.0 * SPEED_OF_LIGHT * VACUUM_PERMITTIVITY)
        * total_p
        * setup.grid.length_observer;
    let e_end = field.envelope_plus[10];
    assert!(e_end.re.abs() < 1e-12 * expected);
    assert!((e_end.im / expected - 1.0).abs() < 1e-12);
}

/// One RK4 step assembled from the public SI building blocks.
#[test]
fn solver_step_matches_si_building_blocks() {
    let mut sc = scenario(2e4, 0.5, 25, 0.01, 50.0);
    sc.channels = vec![
        ChannelSpec {
            k: -20,
            inversion_density_rest: 1e4,
        },
        ChannelSpec {
            k: 20,
            inversion_density_rest: 1e4,
        },
    ];
    sc.boundary_intensity = 1e-20;
    let setup = sc.resolve().unwrap();
    let mut solver = Solver::new(setup.clone()).unwrap();
    // Take a few steps so the state is no longer uniform.
    for _ in 0..200 {
        solver.step().unwrap();
    }
    let t0 = solver.tau();
    let h = setup.grid.dtau();
    let y0 = solver.channel_states();
    let coeffs: Vec<BlochCoefficients> = setup
        .channels
        .iter()
        .map(|c| {
            BlochCoefficients::new(
                &setup.transition,
                c,
                &setup.sample,
                &setup.timescales,
                &setup.pumps,
                setup.frame,
            )
            .unwrap()
        })
        .collect();
    let deriv = |t: f64, y: &[ChannelState]| -> Vec<(Vec<f64>, Vec<Complex64>)> {
        let e = integrate_field(
            y,
            &setup.grid,
            setup.frame,
            &setup.transition,
            &setup.boundary,
            t,
        );
        y.iter()
            .zip(&coeffs)
            .map(|(s, c)| {
                let mut dn = Vec::new();
                let mut dp = Vec::new();
                for j in 0..s.inversion.len() {
                    let d = bloch_rhs(
                        t,
                        s.inversion[j],
                        s.polarization_plus[j],
                        e.envelope_plus[j],
                        c,
                    );
                    dn.push(d.inversion);
                    dp.push(d.polarization);
                }
                (dn, dp)
            })
            .collect()
    };
    let shift =
        |y: &[ChannelState], k: &[(Vec<f64>, Vec<Complex64>)], a: f64| -> Vec<ChannelState> {
            y.iter()
                .zip(k)
                .map(|(s, (dn, dp))| ChannelState {
                    inversion: s.inversion.iter().zip(dn).map(|(v, d)| v + a * d).collect(),
                    polarization_plus: s
                        .polarization_plus
                        .iter()
                        .zip(dp)
                        .map(|(v, d)| v + d * a)
                        .collect(),
                })
                .collect()
        };
    let k1 = deriv(t0, &y0);
    let k2 = deriv(t0 + h / 2.0, &shift(&y0, &k1, h / 2.0));
    let k3 = deriv(t0 + h / 2.0, &shift(&y0, &k2, h / 2.0));
    let k4 = deriv(t0 + h, &shift(&y0, &k3, h));
    solver.step().unwrap();
    let got = solver.channel_states();
    let n_scale = 0.5e4;
    let p_scale = n_scale * setup.transition.dipole_rest;
    for c in 0..2 {
        for j in 0..25 {
            let combine = |f: &dyn Fn(&(Vec<f64>, Vec<Complex64>)) -> Complex64| {
                (f(&k1[c]) + f(&k2[c]) * 2.0 + f(&k3[c]) * 2.0 + f(&k4[c])) * (h / 6.0)
            };
            let n = y0[c].inversion[j] + combine(&|k| Complex64::new(k.0[j], 0.0)).re;
            let p = y0[c].polarization_plus[j] + combine(&|k| k.1[j]);
            assert!(
                (got[c].inversion[j] - n).abs() < 1e-10 * n_scale,
                "n c{c} j{j}"
            );
            assert!(
                (got[c].polarization_plus[j] - p).norm() < 1e-10 * p_scale,
                "p c{c} j{j}"
            );
        }
    }
}

#[test]
fn halving_the_time_step_leaves_the_peak_unchanged() {
    let coarse = run(&scenario(2e4, 0.0, 60, 0.03, 50.0)).unwrap();
    let mut fine_sc = scenario(2e4, 0.0, 60, 0.03, 50.0);
    fine_sc.n_tau = 2 * (fine_sc.n_tau - 1) + 1;
    let fine = run(&fine_sc).unwrap();
    let (_, a) = coarse.peak().unwrap();
    let (_, b) = fine.peak().unwrap();
    assert!(
        (a.intensity / b.intensity - 1.0).abs() < 1e-3,
        "{:e} vs {:e}",
        a.intensity,
        b.intensity
    );
    // Same sample times: every other fine sample.
    for (x, y) in coarse.endfire.iter().zip(fine.endfire.iter().step_by(2)) {
        assert!((x.tau - y.tau).abs() < 1e-15);
    }
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_results() {
    let mut a = scenario(2.3e4, 0.3, 64, 0.02, 50.0);
    a.channels = vec![
        ChannelSpec {
            k: -3,
            inversion_density_rest: 1e4,
        },
        ChannelSpec {
            k: 3,
            inversion_density_rest: 1e4,
        },
        ChannelSpec {
            k: 7,
            inversion_density_rest: 3e3,
        },
    ];
    let base = run(&a).unwrap();
    for threads in [2, 3, 4] {
        let mut b = a.clone();
        b.threads = threads;
        assert_eq!(run(&b).unwrap(), base, "threads = {threads}");
    }
}
