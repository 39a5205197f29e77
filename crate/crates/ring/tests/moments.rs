//! Output two-time moments: vacuum limits, symmetry properties, the
//! impulsive-pump photon budget and truncated-Fock cross-checks.

mod common;

use approx::assert_relative_eq;
use ndarray::Array2;
use num_complex::Complex64 as C64;
use squeezelab_core::propagator::QuadraticHamiltonianTrajectory;
use squeezelab_ring::{build_ring_generator, cavity_occupations, green_function, ring_moments};
use squeezelab_testkit::FockSpace;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn no_gain_leaves_the_output_in_vacuum() {
    let model = common::spdc_model(0.8, 0.2, 0.0);
    let ts = common::times(0.0, 4.0, 101);
    let betas = [common::const_track(c(1.0, 0.0), ts.len())];
    let gen = build_ring_generator(&model, &betas, &ts).unwrap();
    let m = ring_moments(&model, &green_function(&gen).unwrap()).unwrap();
    let max = |a: &Array2<C64>| a.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    assert!(max(&m.n_signal) <= 1e-14);
    assert!(max(m.n_idler.as_ref().unwrap()) <= 1e-14);
    assert!(max(&m.m_cross) <= 1e-14);
}

#[test]
fn moments_are_hermitian_and_the_degenerate_m_is_symmetric() {
    let model = common::degenerate_model(1.0, 0.0, 0.3);
    let ts = common::times(0.0, 8.0, 1201);
    let betas = [common::gaussian_track(&ts, 1.0, 2.0, 0.6)];
    let gen = build_ring_generator(&model, &betas, &ts).unwrap();
    let m = ring_moments(&model, &green_function(&gen).unwrap()).unwrap();
    assert!(m.hermiticity_residual() <= 1e-10);
    // <psi(t1) psi(t2)> commutes, so the anomalous matrix is symmetric up to
    // quadrature error
    let mmax = m.m_cross.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let mut worst = 0.0f64;
    for i in 0..ts.len() {
        for j in 0..ts.len() {
            worst = worst.max((m.m_cross[(i, j)] - m.m_cross[(j, i)]).norm());
        }
    }
    assert!(worst <= 1e-3 * mmax, "asymmetry {worst:.3e} of peak {mmax:.3e}");
}

#[test]
fn impulsive_pump_emits_sinh_squared_mu_photons() {
    // lossless degenerate ring, kick of area mu = 0.5 much faster than the
    // lifetime: every generated photon leaves through the bus, and the
    // impulsive budget is sinh^2 mu. The cheap Lyapunov occupation route
    // resolves the narrow kick.
    let mu = 0.5f64;
    let model = common::degenerate_model(1.0, 0.0, 0.5);
    let width = 0.002;
    let b0 = mu / (width * (2.0 * std::f64::consts::PI).sqrt());
    let ts = common::times(0.0, 4.0, 80001);
    let betas = [common::gaussian_track(&ts, b0, 0.03, width)];
    let gen = build_ring_generator(&model, &betas, &ts).unwrap();
    let occ = cavity_occupations(&model, &gen).unwrap();
    let total = occ.total_signal_photons();
    assert_relative_eq!(total, mu.sinh().powi(2), max_relative = 1e-2);

    // the same kick in a truncated Fock space (closed system) generates the
    // photon number the channel must carry away
    let fock = FockSpace::new(1, 24);
    let nt_f = 1201;
    let tsf = common::times(0.0, 0.06, nt_f);
    let dtf = tsf[1] - tsf[0];
    let lambda_eff = 1.0; // degenerate doubling of lambda = 0.5
    let zeta: Vec<_> = tsf
        .iter()
        .map(|&t| {
            let beta = b0 * (-0.5 * ((t - 0.03) / width).powi(2)).exp();
            Array2::from_elem((1, 1), c(0.0, lambda_eff * beta))
        })
        .collect();
    let delta = vec![Array2::zeros((1, 1)); nt_f];
    let traj = QuadraticHamiltonianTrajectory::new(0.0, dtf, delta, zeta).unwrap();
    let psi = fock.evolve_vacuum(&traj, 2);
    assert!(fock.truncation_weight(&psi) <= 1e-6);
    let (n_fock, _) = fock.moments(&psi);
    assert_relative_eq!(total, n_fock[(0, 0)].re, max_relative = 1e-2);
}

#[test]
fn two_time_diagonal_matches_the_lyapunov_flux() {
    // wider kick on a shared grid: the O(n_t^2) two-time pipeline diagonal
    // N(t,t) must agree with the independent occupation ODE flux
    let mu = 0.5f64;
    let model = common::degenerate_model(1.0, 0.0, 0.5);
    let width = 0.02;
    let b0 = mu / (width * (2.0 * std::f64::consts::PI).sqrt());
    let ts = common::times(0.0, 4.0, 2001);
    let betas = [common::gaussian_track(&ts, b0, 0.25, width)];
    let gen = build_ring_generator(&model, &betas, &ts).unwrap();
    let m = ring_moments(&model, &green_function(&gen).unwrap()).unwrap();
    let occ = cavity_occupations(&model, &gen).unwrap();
    let peak = occ.signal_flux.iter().cloned().fold(0.0f64, f64::max);
    for i in 0..ts.len() {
        let d = (m.n_signal[(i, i)].re - occ.signal_flux[i]).abs();
        assert!(d <= 5e-3 * peak, "flux mismatch {d:.3e} at t = {:.3}", ts[i]);
    }
    assert_relative_eq!(
        m.total_signal_photons(),
        occ.total_signal_photons(),
        max_relative = 5e-3
    );
}

#[test]
fn weak_gain_cavity_moments_match_the_two_mode_fock_oracle() {
    // nearly closed ring (tiny linewidth): the homogeneous Green solution
    // gives the intracavity moments, compared against brute-force truncated
    // Fock evolution of the same quadratic Hamiltonian
    let model = common::spdc_model(5.0e-4, 5.0e-4, 0.3);
    let ts = common::times(0.0, 3.0, 301);
    let betas = [common::gaussian_track(&ts, 1.0, 1.5, 0.4)];
    let gen = build_ring_generator(&model, &betas, &ts).unwrap();
    let g = green_function(&gen).unwrap();
    let end = ts.len() - 1;
    let n_s = g.g12[(end, 0)].norm_sqr();
    let n_i = g.g21[(end, 0)].norm_sqr();
    let m_si = g.g11[(end, 0)] * g.g21[(end, 0)].conj();

    let fock = FockSpace::new(2, 10);
    let nt_f = 61;
    let tsf = common::times(0.0, 3.0, nt_f);
    let dtf = tsf[1] - tsf[0];
    let zeta: Vec<_> = tsf
        .iter()
        .map(|&t| {
            let z = c(0.0, 0.3 * (-0.5 * ((t - 1.5) / 0.4).powi(2)).exp());
            let mut zm = Array2::zeros((2, 2));
            zm[(0, 1)] = z;
            zm[(1, 0)] = z;
            zm
        })
        .collect();
    let delta = vec![Array2::zeros((2, 2)); nt_f];
    let traj = QuadraticHamiltonianTrajectory::new(0.0, dtf, delta, zeta).unwrap();
    let psi = fock.evolve_vacuum(&traj, 5);
    assert!(fock.truncation_weight(&psi) <= 1e-8);
    let (n_fock, m_fock) = fock.moments(&psi);
    assert_relative_eq!(n_s, n_fock[(0, 0)].re, max_relative = 1e-2);
    assert_relative_eq!(n_i, n_fock[(1, 1)].re, max_relative = 1e-2);
    assert!((m_si - m_fock[(0, 1)]).norm() <= 1e-2 * m_si.norm(), "anomalous moment mismatch");
}

#[test]
fn equal_linewidths_balance_signal_and_idler_fluxes() {
    let mut model = common::sp_model(0.8, 0.2, 0.2);
    model.delta_pump = 0.3;
    model.zeta_xpm = 0.1;
    let ts = common::times(0.0, 8.0, 401);
    let betas = [common::gaussian_track(&ts, 1.1, 2.5, 0.7)];
    let gen = build_ring_generator(&model, &betas, &ts).unwrap();
    let m = ring_moments(&model, &green_function(&gen).unwrap()).unwrap();
    let ni = m.n_idler.as_ref().unwrap();
    let peak = m.n_signal.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    for i in 0..ts.len() {
        for j in 0..ts.len() {
            let d = (m.n_signal[(i, j)] - ni[(i, j)]).norm();
            assert!(d <= 1e-10 * peak.max(1.0), "N_S vs N_I deviates by {d:.3e} at ({i},{j})");
        }
    }
}
