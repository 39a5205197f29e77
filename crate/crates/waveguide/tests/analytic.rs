//! Closed-form JSA, erfi and Magnus-3 oracles.

mod common;

use approx::assert_relative_eq;
use ndarray::Array1;
use num_complex::Complex64 as C64;
use squeezelab_waveguide::analytic::{
    analytic_lowgain_jsa, erfi, magnus1_pair_number, magnus3_angle, magnus3_schmidt,
    magnus3_values, phi0, phi1, separability_residual, walkoff_width, PmfSpec,
};

// erfi reference values, 17 digits
const ERFI_03: f64 = 0.34894933875893618;
const ERFI_10: f64 = 1.6504257587975429;
const ERFI_25: f64 = 130.39575501324693;

fn omega_grid(extent: f64, points: usize) -> Array1<f64> {
    Array1::from_iter(
        (0..points).map(|k| -extent + 2.0 * extent * k as f64 / (points - 1) as f64),
    )
}

fn trapezoid(vals: impl Iterator<Item = f64>, dx: f64) -> f64 {
    let v: Vec<f64> = vals.collect();
    let inner: f64 = v[1..v.len() - 1].iter().sum();
    dx * (inner + 0.5 * (v[0] + v[v.len() - 1]))
}

#[test]
fn erfi_matches_reference_values() {
    assert_relative_eq!(erfi(0.3), ERFI_03, max_relative = 1e-14);
    assert_relative_eq!(erfi(1.0), ERFI_10, max_relative = 1e-14);
    assert_relative_eq!(erfi(2.5), ERFI_25, max_relative = 1e-13);
    assert_relative_eq!(erfi(-1.0), -ERFI_10, max_relative = 1e-14);
    assert_eq!(erfi(0.0), 0.0);
}

#[test]
fn mode_functions_are_orthonormal_by_quadrature() {
    let tau = 0.7;
    let grid = omega_grid(12.0 / tau, 4801);
    let dx = grid[1] - grid[0];
    let n0 = trapezoid(grid.iter().map(|&w| phi0(tau, w).powi(2)), dx);
    let n1 = trapezoid(grid.iter().map(|&w| phi1(tau, w).powi(2)), dx);
    let cross = trapezoid(grid.iter().map(|&w| phi0(tau, w) * phi1(tau, w)), dx);
    assert_relative_eq!(n0, 1.0, max_relative = 1e-6);
    assert_relative_eq!(n1, 1.0, max_relative = 1e-6);
    assert!(cross.abs() < 1e-10, "phi0/phi1 overlap {cross:.3e}");
}

#[test]
fn engineered_velocities_give_equal_widths_and_separability() {
    let tau = common::pump_tau();
    let (v_s, v_i, v_p, l) = (
        1.0 / (1.0 / common::V_PUMP - common::D_WALKOFF),
        1.0 / (1.0 / common::V_PUMP + common::D_WALKOFF),
        common::V_PUMP,
        common::LENGTH,
    );
    assert_relative_eq!(walkoff_width(tau, v_s, v_p, l), tau, max_relative = 1e-12);
    assert_relative_eq!(walkoff_width(tau, v_i, v_p, l), tau, max_relative = 1e-12);
    let res = separability_residual(tau, v_s, v_i, v_p, l);
    assert!(res.abs() < 1e-12 * tau * tau, "residual {res:.3e}");
}

#[test]
fn lowgain_jsa_is_rank_one_with_xi0_phi_over_sqrt_2pi() {
    let tau = common::pump_tau();
    let grid = omega_grid(5.0 / tau, 41);
    let spec = PmfSpec::Widths { tau_s: tau, tau_i: tau };
    let out = analytic_lowgain_jsa(tau, &spec, 4.0, &grid, &grid, true).unwrap();
    assert!(out.separable);
    // Phi = 4 with tau_S = tau_I = tau gives xi_bar = Phi / (2 sqrt(2 pi))
    assert_relative_eq!(out.xi0, 0.79788456080286536, max_relative = 1e-14);
    for (a, &w1) in grid.iter().enumerate() {
        for (b, &w2) in grid.iter().enumerate() {
            let want = out.xi0 * phi0(tau, w1) * phi0(tau, w2);
            assert_relative_eq!(out.jsa[(a, b)].re, want, max_relative = 1e-12, epsilon = 1e-300);
            assert_eq!(out.jsa[(a, b)].im, 0.0);
        }
    }
}

#[test]
fn lowgain_jsa_vanishes_without_pump_strength() {
    let grid = omega_grid(3.0, 11);
    let spec = PmfSpec::Widths { tau_s: 1.0, tau_i: 1.0 };
    let out = analytic_lowgain_jsa(1.0, &spec, 0.0, &grid, &grid, true).unwrap();
    assert!(out.jsa.iter().all(|z| *z == C64::new(0.0, 0.0)));
    assert_eq!(out.xi0, 0.0);
}

#[test]
fn same_sign_walkoffs_refuse_the_separable_branch() {
    let grid = omega_grid(3.0, 11);
    let spec = PmfSpec::Velocities { v_s: 0.9, v_i: 0.95, v_p: 1.0, length: 1.0 };
    let err = analytic_lowgain_jsa(0.05, &spec, 1.0, &grid, &grid, true);
    assert!(err.is_err());
    // the general branch still samples the full Gaussian
    let out = analytic_lowgain_jsa(0.05, &spec, 1.0, &grid, &grid, false).unwrap();
    assert!(!out.separable);
    assert!(out.jsa[(5, 5)].re > 0.0);
}

#[test]
fn magnus3_values_match_reference_at_phi_four() {
    let xi_bar = 0.79788456080286536;
    let (xp, xm) = magnus3_values(xi_bar);
    assert_relative_eq!(xp, 0.84626283506497226, max_relative = 1e-14);
    assert_relative_eq!(xm, -0.048378274262106902, max_relative = 1e-12);
    let grid = omega_grid(8.0, 401);
    let m3 = magnus3_schmidt(xi_bar, 1.0, 1.0, &grid, &grid).unwrap();
    let [s0, s1] = m3.schmidt_values();
    assert!(s0 > 0.0 && s1 > 0.0 && s0 > s1);
    assert!(m3.schmidt_number() > 1.0);
}

#[test]
fn magnus3_reduces_to_magnus1_at_low_gain() {
    let (xp, xm) = magnus3_values(1e-9);
    assert_relative_eq!(xp, 1e-9, max_relative = 1e-12);
    assert!(xm.abs() < 1e-18);
    assert!(magnus3_angle(1e-9) < 1e-17);
    assert_relative_eq!(
        magnus1_pair_number(0.059841342060214902),
        0.0035852627484420881,
        max_relative = 1e-13
    );
}

#[test]
fn magnus3_schmidt_functions_are_orthonormal() {
    let tau = 0.7;
    let grid = omega_grid(12.0 / tau, 4801);
    let dx = grid[1] - grid[0];
    let m3 = magnus3_schmidt(0.8, tau, tau, &grid, &grid).unwrap();
    let inner = |a: &Array1<C64>, b: &Array1<C64>| -> C64 {
        let n = a.len();
        let mut s = C64::new(0.0, 0.0);
        for k in 0..n {
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            s += a[k].conj() * b[k] * w;
        }
        s * dx
    };
    assert_relative_eq!(inner(&m3.f0_s, &m3.f0_s).re, 1.0, max_relative = 1e-6);
    assert_relative_eq!(inner(&m3.f1_s, &m3.f1_s).re, 1.0, max_relative = 1e-6);
    assert!(inner(&m3.f0_s, &m3.f1_s).norm() < 1e-6);
    assert!(inner(&m3.f0_i, &m3.f1_i).norm() < 1e-6);
}

#[test]
fn pair_number_and_schmidt_number_agree_with_the_two_mode_form() {
    let m3values: Vec<f64> = vec![0.5, 1.0, 2.0];
    for phi in m3values {
        let xb = common::xi_bar(phi);
        let (xp, xm) = magnus3_values(xb);
        let grid = omega_grid(6.0, 31);
        let m3 = magnus3_schmidt(xb, 1.0, 1.0, &grid, &grid).unwrap();
        let a = xp.sinh().powi(2);
        let b = xm.sinh().powi(2);
        assert_relative_eq!(m3.pair_number(), a + b, max_relative = 1e-14);
        let k = 1.0 + 2.0 * a * b / (a * a + b * b);
        assert_relative_eq!(m3.schmidt_number(), k, max_relative = 1e-12);
        assert!(m3.pair_number() > magnus1_pair_number(xb));
    }
}
