//! Linear single-resonance metrics: transfer function, quality factors,
//! finesse and field-enhancement relations.

mod common;

use approx::assert_relative_eq;
use ndarray::Array1;
use proptest::prelude::*;
use squeezelab_ring::{gamma_from_sigma, linear_ring_metrics, spm_shift_per_photon, Resonance};

fn grid(center: f64, half_span: f64, n: usize) -> Array1<f64> {
    squeezelab_testkit::linspace(center - half_span, center + half_span, n)
}

#[test]
fn lossless_transfer_is_unimodular() {
    let res = Resonance { omega: common::OMEGA_0, gamma: 6.0765e8, gamma_ph: 0.0, velocity: 7.5e7 };
    let omega = grid(res.omega, 20.0 * res.gamma, 1001);
    let m = linear_ring_metrics(&res, 1.0e-4, &omega);
    for t in m.transfer.iter() {
        assert!((t.norm() - 1.0).abs() <= 1e-12, "|T| = {}", t.norm());
    }
    // all-pass: the phase still winds through 2 pi across the resonance
    let dphi = m.transfer[1000].arg() - m.transfer[0].arg();
    assert!(dphi.abs() < 1.0, "far-detuned phases should nearly agree, got {dphi}");
    // loaded quality factor of this resonance is one million
    assert_relative_eq!(m.q_loaded, 1.0e6, max_relative = 1e-4);
    assert!(m.q_intrinsic.is_infinite());
}

#[test]
fn critical_coupling_nulls_the_transmission() {
    let res = Resonance { omega: common::OMEGA_0, gamma: 5.0e8, gamma_ph: 5.0e8, velocity: 7.5e7 };
    let omega = Array1::from_elem(1, res.omega);
    let m = linear_ring_metrics(&res, 1.0e-4, &omega);
    assert!(m.transfer[0].norm() <= 1e-12, "on-resonance |T| = {}", m.transfer[0].norm());
    // quality factors combine harmonically
    assert_relative_eq!(
        1.0 / m.q_external + 1.0 / m.q_intrinsic,
        1.0 / m.q_loaded,
        max_relative = 1e-10
    );
}

#[test]
fn transmission_dip_has_the_loaded_linewidth() {
    let res = Resonance { omega: common::OMEGA_0, gamma: 4.0e8, gamma_ph: 1.0e8, velocity: 7.5e7 };
    let gb = res.gamma_bar();
    let omega = grid(res.omega, 6.0 * gb, 200001);
    let m = linear_ring_metrics(&res, 1.0e-4, &omega);
    let t2: Vec<f64> = m.transfer.iter().map(|t| t.norm_sqr()).collect();
    let depth = t2.iter().cloned().fold(f64::INFINITY, f64::min);
    let half = 0.5 * (1.0 + depth);
    // outermost crossings of the half-depth level
    let lo = omega.iter().zip(&t2).find(|(_, &v)| v < half).unwrap().0;
    let hi = omega.iter().zip(&t2).rev().find(|(_, &v)| v < half).unwrap().0;
    assert_relative_eq!(hi - lo, 2.0 * gb, max_relative = 1e-2);
}

#[test]
fn finesse_and_field_enhancement_are_consistent() {
    let length = 1.0e-4;
    let res = Resonance { omega: common::OMEGA_0, gamma: 6.0e8, gamma_ph: 0.0, velocity: 7.5e7 };
    let omega = Array1::from_elem(1, res.omega);
    let m = linear_ring_metrics(&res, length, &omega);
    let finesse = std::f64::consts::PI * res.velocity / (res.gamma_bar() * length);
    assert_relative_eq!(m.finesse, finesse, max_relative = 1e-10);
    assert_relative_eq!(m.fe_crit_sq, finesse / std::f64::consts::PI, max_relative = 1e-10);
    assert_relative_eq!(m.fe_over_sq, 2.0 * m.fe_crit_sq, max_relative = 1e-10);
}

#[test]
fn coupler_sigma_maps_to_the_channel_rate() {
    let v = 7.5e7;
    let l = 1.0e-4;
    assert_relative_eq!(gamma_from_sigma(1.0, v, l).unwrap(), 0.0);
    let g2 = gamma_from_sigma(0.98, v, l).unwrap();
    assert_relative_eq!(g2, 2.0 * v * v * 0.02 / l, max_relative = 1e-12);
    assert!(gamma_from_sigma(1.2, v, l).is_err());
    assert!(gamma_from_sigma(0.0, v, l).is_err());
}

#[test]
fn spm_shift_is_negative_and_scales_with_inverse_length_squared() {
    let s1 = spm_shift_per_photon(common::OMEGA_0, 1.0e-4, 1.0e20);
    let s2 = spm_shift_per_photon(common::OMEGA_0, 2.0e-4, 1.0e20);
    assert!(s1 < 0.0);
    assert_relative_eq!(s1 / s2, 4.0, max_relative = 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn transfer_magnitude_never_exceeds_one(
        gamma in 1.0e6f64..1.0e9,
        gamma_ph in 0.0f64..1.0e9,
        det in -30.0f64..30.0,
    ) {
        let res = Resonance { omega: common::OMEGA_0, gamma, gamma_ph, velocity: 7.5e7 };
        let omega = Array1::from_elem(1, res.omega + det * res.gamma_bar());
        let m = linear_ring_metrics(&res, 1.0e-4, &omega);
        prop_assert!(m.transfer[0].norm() <= 1.0 + 1e-12);
        if gamma_ph == 0.0 {
            prop_assert!((m.transfer[0].norm() - 1.0).abs() <= 1e-12);
        }
    }
}
