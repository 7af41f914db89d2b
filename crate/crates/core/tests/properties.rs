use proptest::prelude::*;

use relmaser_core::params::{
    derive_dipole, gain_coefficient_rest, particle_number, saturation_intensity,
    superradiance_time_rest, tipping_angle, SPEED_OF_LIGHT,
};
use relmaser_core::relativity::{
    channel_detuning, doppler_frequency, intensity_boost, length_to_observer, lorentz_gamma,
    timescale_to_observer, velocity_offset_to_observer,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

proptest! {
    #[test]
    fn particle_number_times_angle_squared_is_four(
        n in 1e2..1e5f64, lambda in 1e-3..10.0f64, length in 1e10..1e15f64,
    ) {
        let count = particle_number(n, lambda, length).unwrap();
        let theta = tipping_angle(count).unwrap();
        prop_assert!(close(count * theta * theta, 4.0, 1e-14));
    }

    #[test]
    fn gain_length_product(t2 in 1e-5..1e-1f64, n in 1e2..1e5f64, length in 1e10..1e15f64) {
        let tr = superradiance_time_rest(0.186, n, length, 1.282e-11).unwrap();
        let alpha = gain_coefficient_rest(t2, length, tr).unwrap();
        prop_assert!(close(alpha * length * tr, 2.0 * t2, 1e-14));
    }

    #[test]
    fn saturation_intensity_boost(beta in -0.99..0.99f64, t1 in 1e-3..1.0f64, t2 in 1e-5..1e-3f64) {
        let d = derive_dipole(1.282e-11, 1.0127e10).unwrap();
        let rest = saturation_intensity(d, t1, t2).unwrap();
        let obs = saturation_intensity(
            d,
            timescale_to_observer(t1, beta).unwrap(),
            timescale_to_observer(t2, beta).unwrap(),
        )
        .unwrap();
        prop_assert!(close(obs / rest, (1.0 + beta) / (1.0 - beta), 1e-12));
        prop_assert!(close(intensity_boost(beta).unwrap(), (1.0 + beta) / (1.0 - beta), 1e-14));
    }

    #[test]
    fn doppler_reciprocity(beta in -0.99..0.99f64, omega in 1e6..1e12f64) {
        let there = doppler_frequency(omega, beta).unwrap();
        prop_assert!(close(doppler_frequency(there, -beta).unwrap(), omega, 1e-13));
        prop_assert!(close(intensity_boost(beta).unwrap() * intensity_boost(-beta).unwrap(), 1.0, 1e-13));
    }

    #[test]
    fn phase_accumulated_over_a_timescale_is_invariant(
        beta in -0.99..0.99f64, omega in 1e6..1e12f64, t in 1e-6..1.0f64,
    ) {
        let w = doppler_frequency(omega, beta).unwrap();
        let tt = timescale_to_observer(t, beta).unwrap();
        prop_assert!(close(w * tt, omega * t, 1e-13));
    }

    #[test]
    fn gain_exponent_is_invariant(beta in -0.99..0.99f64, alpha in 1e-15..1e-10f64, length in 1e10..1e15f64) {
        let gamma = lorentz_gamma(beta).unwrap();
        let l = length_to_observer(length, beta).unwrap();
        prop_assert!(close(gamma * alpha * l, alpha * length, 1e-13));
    }

    #[test]
    fn detuning_to_carrier_ratio_is_invariant(
        beta in -0.95..0.95f64, dv in -1e5..1e5f64, omega in 1e8..1e11f64,
    ) {
        prop_assume!(dv != 0.0);
        let rest = channel_detuning(dv, omega, 0.0).unwrap() / omega;
        let obs = channel_detuning(dv, omega, beta).unwrap() / doppler_frequency(omega, beta).unwrap();
        prop_assert!(close(obs, rest, 1e-12));
        prop_assert!(close(rest, dv / SPEED_OF_LIGHT, 1e-14));
    }

    #[test]
    fn offset_transform_rejects_large_offsets(beta in -0.9..0.9f64, frac in 0.01..0.5f64) {
        prop_assert!(velocity_offset_to_observer(frac * SPEED_OF_LIGHT, beta).is_err());
        let small = 0.5 * frac / 50.0 * SPEED_OF_LIGHT;
        let v = velocity_offset_to_observer(small, beta).unwrap();
        prop_assert!(close(v, small * (1.0 - beta * beta), 1e-15));
    }
}
