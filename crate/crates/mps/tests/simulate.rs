//! Stepwise cavity-waveguide runs: decay oracle, conservation, causality,
//! truncation bookkeeping and the guard rails.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use squeezelab_mps::{
    simulate_cavity_mps, CavityWaveguideModel, Envelope, LadderTerm, MpsError,
    PolynomialHamiltonian,
};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn quadratic_drive(amplitude: f64, envelope: Envelope) -> PolynomialHamiltonian {
    PolynomialHamiltonian {
        terms: vec![
            LadderTerm {
                dag_power: 2,
                a_power: 0,
                amplitude: c(0.5 * amplitude, 0.0),
                envelope,
            },
            LadderTerm {
                dag_power: 0,
                a_power: 2,
                amplitude: c(0.5 * amplitude, 0.0),
                envelope,
            },
        ],
    }
}

fn number_op(cutoff: usize) -> Array2<C64> {
    let mut n = Array2::zeros((cutoff, cutoff));
    for k in 0..cutoff {
        n[(k, k)] = c(k as f64, 0.0);
    }
    n
}

#[test]
fn decoupled_vacuum_stays_vacuum() {
    let mut model = CavityWaveguideModel::new(0.4, 0.0, 1.0, 0.05, 30);
    model.cutoff = 4;
    let (state, trace) = simulate_cavity_mps(&model, None).unwrap();
    assert!(state.bond_dims().iter().all(|&d| d == 1));
    assert!((state.norm_sqr() - 1.0).abs() <= 1e-12);
    let n_op = number_op(model.cutoff);
    for p in 0..state.sites() {
        assert!(state.expectation(&[(p, &n_op)]).unwrap().norm() <= 1e-14);
    }
    assert!(trace.steps.iter().all(|s| s.resonator_occupation <= 1e-14));
    assert!(trace.total_discarded <= 1e-24);
}

#[test]
fn single_photon_decays_at_twice_the_damping_rate() {
    // gamma = v = 1, dt = 0.01: Gamma = 1/2 per the amplitude rate, so <n>
    // follows e^{-2 Gamma t} = e^{-t}; dt * Gamma = 0.005 keeps the stepwise
    // decay within 2%
    let mut model = CavityWaveguideModel::new(0.0, 1.0, 1.0, 0.01, 100);
    model.cutoff = 4;
    let gamma_decay = model.decay_rate();
    assert!((gamma_decay - 0.5).abs() <= 1e-14);
    let mut one = Array1::zeros(model.cutoff);
    one[1] = c(1.0, 0.0);
    let (state, trace) = simulate_cavity_mps(&model, Some(&one)).unwrap();
    for rec in &trace.steps {
        let expected = (-2.0 * gamma_decay * rec.time).exp();
        let dev = (rec.resonator_occupation - expected).abs() / expected;
        assert!(dev <= 2e-2, "occupation off by {dev:.3e} at t = {:.2}", rec.time);
    }
    // the emitted photon is conserved across the chain
    let n_op = number_op(model.cutoff);
    let norm_sqr = state.norm_sqr();
    let total: f64 = (0..state.sites())
        .map(|p| state.expectation(&[(p, &n_op)]).unwrap().re / norm_sqr)
        .sum();
    assert!((total - 1.0).abs() <= 1e-10, "total photon number {total}");
}

#[test]
fn bins_ahead_of_a_late_pulse_stay_in_vacuum() {
    // drive centered at t = 2.4 of a 3.0 window: bins emitted well before it
    // can carry nothing
    let mut model = CavityWaveguideModel::new(0.0, 0.6, 1.0, 0.05, 60);
    model.h_nl = quadratic_drive(0.4, Envelope::Gaussian { center: 2.4, width: 0.15 });
    let (state, _) = simulate_cavity_mps(&model, None).unwrap();
    let n_op = number_op(model.cutoff);
    let norm_sqr = state.norm_sqr();
    // bin k is emitted at t = k dt; the pulse starts around t ~ 1.8
    for p in 0..30 {
        let n = state.expectation(&[(p, &n_op)]).unwrap().re / norm_sqr;
        assert!(n <= 1e-12, "bin {p} holds {n:.3e} photons ahead of the pulse");
    }
    let late: f64 = (30..state.sites())
        .map(|p| state.expectation(&[(p, &n_op)]).unwrap().re / norm_sqr)
        .sum();
    assert!(late > 1e-3, "the pulse should populate the late bins");
}

#[test]
fn norm_drift_equals_the_discarded_weight() {
    // small bond cap forces real truncation; the bookkeeping must stay exact
    let mut model = CavityWaveguideModel::new(0.2, 0.9, 1.0, 0.05, 50);
    model.cutoff = 10;
    model.d_max = 4;
    model.epsilon = 1e-8;
    model.discard_budget = 1e-12;
    model.h_nl = quadratic_drive(0.5, Envelope::Gaussian { center: 1.0, width: 0.4 });
    let (state, trace) = simulate_cavity_mps(&model, None).unwrap();
    assert!(trace.total_discarded > 1e-10, "expected a truncating run");
    assert!(trace.budget_exceeded);
    let ledger: f64 = trace.steps.iter().map(|s| s.discarded).sum();
    assert!((ledger - trace.total_discarded).abs() <= 1e-15);
    assert!(
        (state.norm_sqr() - (1.0 - trace.total_discarded)).abs() <= 1e-12,
        "norm {:.15} vs discarded {:.3e}",
        state.norm_sqr(),
        trace.total_discarded
    );
    assert!(state.bond_dims().iter().all(|&d| d <= model.d_max));
}

#[test]
fn saturating_the_cutoff_is_an_error() {
    let mut model = CavityWaveguideModel::new(0.0, 0.3, 1.0, 0.05, 40);
    model.cutoff = 3;
    model.h_nl = quadratic_drive(1.2, Envelope::Constant);
    match simulate_cavity_mps(&model, None) {
        Err(MpsError::CutoffSaturated { population, .. }) => assert!(population > 1e-6),
        other => panic!("expected cutoff saturation, got {other:?}"),
    }
}

#[test]
fn invalid_setups_are_rejected() {
    // oversized exchange angle
    let model = CavityWaveguideModel::new(0.0, 4.0, 1.0, 0.1, 10);
    assert!(matches!(simulate_cavity_mps(&model, None), Err(MpsError::Invalid(_))));
    // non-Hermitian ladder terms
    let mut model = CavityWaveguideModel::new(0.0, 0.5, 1.0, 0.05, 10);
    model.h_nl.terms.push(LadderTerm {
        dag_power: 2,
        a_power: 0,
        amplitude: c(0.3, 0.0),
        envelope: Envelope::Constant,
    });
    assert!(matches!(simulate_cavity_mps(&model, None), Err(MpsError::Invalid(_))));
    // mismatched initial vector
    let model = CavityWaveguideModel::new(0.0, 0.5, 1.0, 0.05, 10);
    let bad = Array1::from(vec![c(1.0, 0.0); 3]);
    assert!(matches!(simulate_cavity_mps(&model, Some(&bad)), Err(MpsError::Invalid(_))));
}
