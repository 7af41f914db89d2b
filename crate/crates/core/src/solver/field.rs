use alloc::vec::Vec;

use num_complex::Complex64;

use super::model::field_prefactor;
use super::types::{BoundaryInput, ChannelState, FieldState, GridSpec};
use crate::params::TransitionSpec;
use crate::relativity::FrameVelocity;

/// Cumulative trapezoidal quadrature of ∂ẽ/∂z = i·`coupling`·Σᵥ conj(pᵥ)
/// from `boundary` at index 0. `polarization` is channel-major with `n_z`
/// points per channel; channels are summed in index order.
pub(crate) fn field_scan(
    polarization: &[Complex64],
    n_z: usize,
    coupling: f64,
    dz: f64,
    boundary: Complex64,
    out: &mut [Complex64],
) {
    let n_channels = polarization.len() / n_z;
    let source = |j: usize| {
        let mut s = Complex64::new(0.0, 0.0);
        for c in 0..n_channels {
            s += polarization[c * n_z + j].conj();
        }
        s
    };
    // i·coupling·dz/2
    let h = Complex64::new(0.0, 0.5 * coupling * dz);
    let mut prev = source(0);
    let mut e = boundary;
    out[0] = e;
    for j in 1..n_z {
        let cur = source(j);
        e += h * (prev + cur);
        out[j] = e;
        prev = cur;
    }
}

/// Observer-frame field envelope E⁺(z) at retarded time `tau` produced by
/// the given channel polarizations:
///
/// ∂E⁺/∂z = γ√((1+β)/(1−β)) (iω₀′/2cε₀) Σᵥ P′ᵥ⁻,
///
/// integrated from E⁺(0, τ) with the trapezoidal rule on the grid.
pub fn integrate_field(
    channels: &[ChannelState],
    grid: &GridSpec,
    frame: FrameVelocity,
    transition: &TransitionSpec,
    boundary: &BoundaryInput,
    tau: f64,
) -> FieldState {
    let n_z = grid.n_z;
    let flat: Vec<Complex64> = channels
        .iter()
        .flat_map(|c| {
            assert_eq!(
                c.polarization_plus.len(),
                n_z,
                "channel length differs from grid"
            );
            c.polarization_plus.iter().copied()
        })
        .collect();
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); n_z];
    field_scan(
        &flat,
        n_z,
        field_prefactor(transition.omega0_rest, frame),
        grid.dz(),
        boundary.at(tau),
        &mut out,
    );
    FieldState {
        envelope_plus: out,
        boundary_input: boundary.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{SPEED_OF_LIGHT, VACUUM_PERMITTIVITY};

    fn grid() -> GridSpec {
        GridSpec {
            n_z: 11,
            n_tau: 2,
            tau_max: 1.0,
            length_observer: 2.0e3,
        }
    }

    fn uniform(p: Complex64, n: usize) -> ChannelState {
        ChannelState {
            inversion: alloc::vec![0.0; n],
            polarization_plus: alloc::vec![p; n],
        }
    }

    #[test]
    fn no_polarization_keeps_boundary() {
        let t = TransitionSpec::oh_1612();
        let b = BoundaryInput::constant(Complex64::new(3.0, -1.0));
        let f = integrate_field(
            &[uniform(Complex64::new(0.0, 0.0), 11)],
            &grid(),
            FrameVelocity::REST,
            &t,
            &b,
            0.0,
        );
        assert!(f
            .envelope_plus
            .iter()
            .all(|e| *e == Complex64::new(3.0, -1.0)));
    }

    #[test]
    fn constant_source_grows_linearly() {
        let t = TransitionSpec::oh_1612();
        let p0 = Complex64::new(2.0e-20, 0.0);
        let g = grid();
        let f = integrate_field(
            &[uniform(p0, 11)],
            &g,
            FrameVelocity::REST,
            &t,
            &BoundaryInput::zero(),
            0.0,
        );
        let slope = t.omega0_rest / (2.0 * SPEED_OF_LIGHT * VACUUM_PERMITTIVITY);
        for (j, e) in f.envelope_plus.iter().enumerate() {
            let exact = Complex64::new(0.0, slope) * p0.conj() * g.z_at(j);
            assert!(
                (e - exact).norm() <= 1e-14 * exact.norm().max(1e-300),
                "{j}"
            );
        }
    }

    #[test]
    fn relativistic_prefactor_at_half_c() {
        let t = TransitionSpec::oh_1612();
        let p0 = Complex64::new(1.0e-20, 5.0e-21);
        let g = grid();
        let rest = integrate_field(
            &[uniform(p0, 11)],
            &g,
            FrameVelocity::REST,
            &t,
            &BoundaryInput::zero(),
            0.0,
        );
        let moving = integrate_field(
            &[uniform(p0, 11)],
            &g,
            FrameVelocity::new(0.5).unwrap(),
            &t,
            &BoundaryInput::zero(),
            0.0,
        );
        // γ√((1+β)/(1−β)) = 1/(1−β) = 2 at β = 1/2
        let ratio = moving.envelope_plus[10].im / rest.envelope_plus[10].im;
        assert!((ratio - 2.0).abs() < 1e-14);
    }

    #[test]
    fn channels_sum_in_field() {
        let t = TransitionSpec::oh_1612();
        let g = grid();
        let a = Complex64::new(1e-20, 0.0);
        let two = integrate_field(
            &[uniform(a, 11), uniform(a, 11)],
            &g,
            FrameVelocity::REST,
            &t,
            &BoundaryInput::zero(),
            0.0,
        );
        let one = integrate_field(
            &[uniform(a * 2.0, 11)],
            &g,
            FrameVelocity::REST,
            &t,
            &BoundaryInput::zero(),
            0.0,
        );
        assert_eq!(two.envelope_plus, one.envelope_plus);
    }
}
