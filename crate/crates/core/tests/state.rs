use ndarray::array;
use num_complex::Complex64 as C64;
use squeezelab_core::linalg::{eye, joint_bogoliubov_svd, matrix_exp, CMat, CVec};
use squeezelab_core::propagator::BogoliubovPropagator;
use squeezelab_core::state::{
    apply_bogoliubov, apply_loss, apply_passive, apply_uniform_loss, degenerate_joint_amplitude,
    low_gain_state, nondegenerate_joint_amplitude, recover_passive_factor, seed_coherent,
    state_from_propagator, GaussianState,
};
use squeezelab_testkit as tk;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_pure_state(seed: u64, n: usize, r_max: f64) -> (GaussianState, BogoliubovPropagator) {
    let mut rng = tk::rng(seed);
    let (v, w) = tk::random_bogoliubov(&mut rng, n, r_max);
    let k = BogoliubovPropagator { v, w, t_i: 0.0, t_f: 1.0 };
    (state_from_propagator(&k).unwrap(), k)
}

#[test]
fn vacuum_is_empty_and_physical() {
    let s = GaussianState::vacuum(3);
    assert_eq!(s.mean_total_photons(), 0.0);
    assert!(s.physicality_min_eig().unwrap() > -1e-12);
}

#[test]
fn scalar_squeezer_moments() {
    let r: f64 = 1.0;
    let k = BogoliubovPropagator {
        v: array![[c(r.cosh(), 0.0)]],
        w: array![[c(r.sinh(), 0.0)]],
        t_i: 0.0,
        t_f: 1.0,
    };
    let s = state_from_propagator(&k).unwrap();
    assert!((s.n[(0, 0)].re - 1.3810978455418155).abs() < 1e-12);
    assert!((s.m[(0, 0)].re - 1.8134302039235095).abs() < 1e-12);
    assert!(s.m[(0, 0)].im.abs() < 1e-15);
}

#[test]
fn bogoliubov_on_vacuum_matches_state_from_propagator() {
    let (s, k) = random_pure_state(7, 3, 1.1);
    let stepped = apply_bogoliubov(&GaussianState::vacuum(3), &k).unwrap();
    tk::assert_close(&stepped.n, &s.n, 1e-12, "vacuum N");
    tk::assert_close(&stepped.m, &s.m, 1e-12, "vacuum M");
}

#[test]
fn bogoliubov_steps_compose() {
    let mut rng = tk::rng(9);
    let (v1, w1) = tk::random_bogoliubov(&mut rng, 3, 0.8);
    let (v2, w2) = tk::random_bogoliubov(&mut rng, 3, 0.6);
    let k1 = BogoliubovPropagator { v: v1, w: w1, t_i: 0.0, t_f: 1.0 };
    let k2 = BogoliubovPropagator { v: v2, w: w2, t_i: 1.0, t_f: 2.0 };
    let both = k2.compose(&k1);
    let direct = state_from_propagator(&both).unwrap();
    let stepped = apply_bogoliubov(&state_from_propagator(&k1).unwrap(), &k2).unwrap();
    tk::assert_close(&stepped.n, &direct.n, 1e-10, "composed N");
    tk::assert_close(&stepped.m, &direct.m, 1e-10, "composed M");
}

#[test]
fn pure_states_sit_on_physicality_boundary() {
    let (s, _) = random_pure_state(3, 3, 1.0);
    let e = s.physicality_min_eig().unwrap();
    assert!(e.abs() < 1e-8, "pure state min eig {e:.3e}");
    let lossy = apply_uniform_loss(&s, 0.6).unwrap();
    assert!(lossy.physicality_min_eig().unwrap() > 1e-6);
}

#[test]
fn unphysical_moments_detected() {
    // N < 0 on the diagonal is unphysical
    let mut s = GaussianState::vacuum(1);
    s.n[(0, 0)] = c(-0.2, 0.0);
    assert!(s.physicality_min_eig().unwrap() < -1e-3);
}

#[test]
fn degenerate_joint_amplitude_recovers_spectrum() {
    let (s, k) = random_pure_state(41, 4, 1.2);
    let sd = degenerate_joint_amplitude(&s, 1e-8).unwrap();
    let (_, _, r_ref) = joint_bogoliubov_svd(&k.v, &k.w, 1e-8).unwrap();
    for (a, b) in sd.r.iter().zip(&r_ref) {
        assert!((a - b).abs() < 1e-8, "schmidt r mismatch {a} vs {b}");
    }
}

#[test]
fn degenerate_joint_amplitude_rejects_mixed() {
    let (s, _) = random_pure_state(5, 3, 1.0);
    let lossy = apply_uniform_loss(&s, 0.5).unwrap();
    assert!(degenerate_joint_amplitude(&lossy, 1e-8).is_err());
}

#[test]
fn nondegenerate_joint_amplitude_scalar() {
    let r: f64 = 0.9;
    let m_bc = array![[c(0.5 * (2.0 * r).sinh(), 0.0)]];
    let sd = nondegenerate_joint_amplitude(&m_bc).unwrap();
    assert!((sd.r[0] - r).abs() < 1e-12);
}

#[test]
fn low_gain_state_matches_takagi_of_input() {
    let mut rng = tk::rng(8);
    let j_bar = tk::random_symmetric(&mut rng, 3, 0.4);
    let (s, sd) = low_gain_state(&j_bar).unwrap();
    // mean photons = sum sinh^2 r
    let expect: f64 = sd.r.iter().map(|x| x.sinh().powi(2)).sum();
    assert!((s.mean_total_photons() - expect).abs() < 1e-10);
    // state is pure
    assert!(s.physicality_min_eig().unwrap().abs() < 1e-8);
}

#[test]
fn uniform_loss_scales_moments() {
    let (s, _) = random_pure_state(13, 3, 1.0);
    let eta = 0.35;
    let lossy = apply_uniform_loss(&s, eta).unwrap();
    tk::assert_close(&lossy.n, &s.n.mapv(|x| x * c(eta, 0.0)), 1e-14, "N scaling");
    tk::assert_close(&lossy.m, &s.m.mapv(|x| x * c(eta, 0.0)), 1e-14, "M scaling");
}

#[test]
fn uniform_loss_equals_diagonal_loss_matrix() {
    let (s, _) = random_pure_state(17, 3, 0.8);
    let eta: f64 = 0.42;
    let l_mat = eye(3).mapv(|x| x * c(eta.sqrt(), 0.0));
    let a = apply_uniform_loss(&s, eta).unwrap();
    let b = apply_loss(&s, &l_mat).unwrap();
    tk::assert_close(&a.n, &b.n, 1e-13, "loss N");
    tk::assert_close(&a.m, &b.m, 1e-13, "loss M");
}

#[test]
fn loss_rejects_gain() {
    let s = GaussianState::vacuum(2);
    let l_mat = eye(2).mapv(|x| x * c(1.5, 0.0));
    assert!(apply_loss(&s, &l_mat).is_err());
    assert!(apply_uniform_loss(&s, 1.2).is_err());
}

#[test]
fn loss_preserves_physicality() {
    let (s, _) = random_pure_state(23, 4, 1.5);
    let mut rng = tk::rng(24);
    // random sub-unitary: unitary times diagonal transmissions
    let u = tk::random_unitary(&mut rng, 4);
    let mut d = CMat::zeros((4, 4));
    for i in 0..4 {
        use rand::Rng;
        d[(i, i)] = c(rng.random::<f64>().sqrt(), 0.0);
    }
    let l_mat = u.dot(&d);
    let lossy = apply_loss(&s, &l_mat).unwrap();
    assert!(lossy.physicality_min_eig().unwrap() > -1e-10);
}

#[test]
fn passive_preserves_photon_number() {
    let (s, _) = random_pure_state(31, 3, 1.0);
    let mut rng = tk::rng(32);
    let u = tk::random_unitary(&mut rng, 3);
    let out = apply_passive(&s, &u).unwrap();
    assert!((out.mean_total_photons() - s.mean_total_photons()).abs() < 1e-10);
}

#[test]
fn passive_rejects_nonunitary() {
    let s = GaussianState::vacuum(2);
    let m = eye(2).mapv(|x| x * c(0.5, 0.0));
    assert!(apply_passive(&s, &m).is_err());
}

#[test]
fn seed_coherent_scalar() {
    // scalar squeezer: beta = alpha cosh r + alpha* sinh r
    let r: f64 = 0.6;
    let k = BogoliubovPropagator {
        v: array![[c(r.cosh(), 0.0)]],
        w: array![[c(r.sinh(), 0.0)]],
        t_i: 0.0,
        t_f: 1.0,
    };
    let alpha: CVec = array![c(2.0, 1.0)];
    let beta = seed_coherent(&k, &alpha).unwrap();
    let expect = alpha[0] * r.cosh() + alpha[0].conj() * r.sinh();
    assert!((beta[0] - expect).norm() < 1e-12);
}

#[test]
fn recover_passive_factor_roundtrip() {
    let mut rng = tk::rng(55);
    let (v, w) = tk::random_bogoliubov(&mut rng, 3, 1.0);
    let (f, g, _) = joint_bogoliubov_svd(&v, &w, 1e-8).unwrap();
    let phi = recover_passive_factor(&f, &g).unwrap();
    let target = squeezelab_core::linalg::dagger(&g).dot(&f.mapv(|x| x.conj()));
    let back = matrix_exp(&phi.mapv(|x| x * c(0.0, 1.0)));
    tk::assert_close(&back, &target, 1e-8, "passive factor roundtrip");
}

#[test]
fn json_roundtrip_preserves_state() {
    let (s, _) = random_pure_state(61, 3, 0.9);
    let text = s.to_json();
    let back = GaussianState::from_json(&text).unwrap();
    tk::assert_close(&back.n, &s.n, 0.0, "json N");
    tk::assert_close(&back.m, &s.m, 0.0, "json M");
    assert_eq!(back.labels, s.labels);
}

#[test]
fn json_rejects_wrong_schema() {
    let s = GaussianState::vacuum(1);
    let text = s.to_json().replace("gaussian-state/1", "gaussian-state/99");
    assert!(GaussianState::from_json(&text).is_err());
}
