#![allow(dead_code)]

use relmaser_core::params::TransitionSpec;
use relmaser_core::relativity::FrameVelocity;
use relmaser_core::solver::{ChannelSpec, PumpSpec, Scenario};

pub const LENGTH: f64 = 4.2e13;
pub const T1: f64 = 0.1;
pub const T2: f64 = 1.2e-3;

pub fn tr_rest(ntot: f64) -> f64 {
    8.0 * std::f64::consts::PI / (3.0 * 0.186 * 0.186 * ntot * LENGTH * 1.282e-11)
}

/// Single-channel OH scenario with `steps_per_tr` steps per T_R.
pub fn scenario(ntot: f64, beta: f64, n_z: usize, tau_max: f64, steps_per_tr: f64) -> Scenario {
    Scenario {
        name: "test".into(),
        transition: TransitionSpec::oh_1612(),
        length_rest: LENGTH,
        t1_rest: T1,
        t2_rest: T2,
        frame: FrameVelocity::new(beta).unwrap(),
        n_z,
        n_tau: (tau_max / tr_rest(ntot) * steps_per_tr).ceil() as usize + 1,
        tau_max_rest: tau_max,
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

/// Adaptive Dormand-Prince 5(4) for a scalar ODE y' = f(x, y) from x0 to x1.
pub fn dopri5(f: impl Fn(f64, f64) -> f64, x0: f64, y0: f64, x1: f64, rtol: f64) -> f64 {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    const B5: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let (mut x, mut y) = (x0, y0);
    let mut h = (x1 - x0) * 1e-4;
    while x < x1 {
        if x + h > x1 {
            h = x1 - x;
        }
        let mut k = [0.0; 7];
        for s in 0..7 {
            let ys = y + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
            k[s] = f(x + C[s] * h, ys);
        }
        let y5 = y + h * (0..7).map(|j| B5[j] * k[j]).sum::<f64>();
        let y4 = y + h * (0..7).map(|j| B4[j] * k[j]).sum::<f64>();
        let err = (y5 - y4).abs() / (rtol * y5.abs().max(y.abs()) + 1e-300);
        if err <= 1.0 {
            x += h;
            y = y5;
        }
        h *= (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
    }
    y
}
