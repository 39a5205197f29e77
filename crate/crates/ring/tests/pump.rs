//! Classical pump dynamics: exponential ringdown, linear steady states, the
//! Kerr-shifted implicit equation and its bistable branch structure.

mod common;

use approx::assert_relative_eq;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use squeezelab_ring::{cw_steady_state, pump_cavity_dynamics, RingDrive};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn free_decay_is_a_complex_exponential() {
    let mut model = common::spdc_model(0.7, 0.3, 0.0);
    model.delta_pump = 0.4;
    let ts = common::times(0.0, 3.0, 301);
    let b0 = c(1.2, -0.5);
    let fields = pump_cavity_dynamics(&model, &[RingDrive::Off], &[b0], &ts).unwrap();
    for (j, &t) in ts.iter().enumerate() {
        let exact = b0 * C64::from_polar((-model.pump.gamma_bar() * t).exp(), -model.delta_pump * t);
        assert!((fields[0][j] - exact).norm() <= 1e-8, "t = {t}");
    }
}

#[test]
fn cw_drive_relaxes_to_the_linear_steady_state() {
    let mut model = common::spdc_model(0.8, 0.2, 0.0);
    model.delta_pump = -0.6;
    let s = c(0.3, 0.1);
    let ts = common::times(0.0, 25.0, 2001);
    let fields =
        pump_cavity_dynamics(&model, &[RingDrive::Cw(s)], &[c(0.0, 0.0)], &ts).unwrap();
    let branches = cw_steady_state(&model, &[s]).unwrap();
    assert_eq!(branches.len(), 1);
    let exact = -c(0.0, model.pump.coupling_amplitude()) * s
        / c(model.pump.gamma_bar(), model.delta_pump);
    assert!((branches[0][0] - exact).norm() <= 1e-12);
    assert!((fields[0][2000] - exact).norm() <= 1e-7, "transient not settled");
}

fn sp_residual(model: &squeezelab_ring::RingModel, s: C64, beta: C64) -> f64 {
    let shift = 2.0 * model.eta_spm * beta.norm_sqr();
    (c(model.pump.gamma_bar(), model.delta_pump - shift) * beta
        + c(0.0, model.pump.coupling_amplitude()) * s)
        .norm()
}

#[test]
fn kerr_steady_state_satisfies_the_implicit_equation() {
    let mut model = common::sp_model(1.0, 0.0, 0.0);
    model.eta_spm = 0.05;
    model.delta_pump = 0.3;
    let s = c(0.8, 0.0);
    let branches = cw_steady_state(&model, &[s]).unwrap();
    assert_eq!(branches.len(), 1, "weak drive must be single valued");
    let beta = branches[0][0];
    assert!(sp_residual(&model, s, beta) <= 1e-10, "residual {}", sp_residual(&model, s, beta));
    // the Kerr shift moves the intensity off the linear prediction in the
    // expected direction (blue drive detuning, positive eta: toward resonance)
    let lin = model.pump.coupling_amplitude().powi(2) * s.norm_sqr()
        / (model.pump.gamma_bar().powi(2) + model.delta_pump.powi(2));
    assert!(beta.norm_sqr() > lin, "shifted intensity {} vs linear {lin}", beta.norm_sqr());
}

#[test]
fn strong_drive_past_the_critical_detuning_is_bistable() {
    // gamma_bar = 1, detuning 2 > sqrt(3), eta chosen so 2 eta = 1; the
    // intensity equation I (1 + (2 - I)^2) = F has three positive roots for
    // F between ~1.85 and 2
    let mut model = common::sp_model(1.0, 0.0, 0.0);
    model.pump.velocity = 0.5; // coupling amplitude sqrt(2 * 1 * 0.5) = 1
    model.eta_spm = 0.5;
    model.delta_pump = 2.0;
    let s = c(1.925f64.sqrt(), 0.0);
    let branches = cw_steady_state(&model, &[s]).unwrap();
    assert_eq!(branches.len(), 3, "expected three coexisting branches");
    let mut last = 0.0;
    for b in &branches {
        let i = b[0].norm_sqr();
        assert!(i > last, "branches must come sorted by intensity");
        last = i;
        assert!(sp_residual(&model, s, b[0]) <= 1e-10);
    }

    // switching on from vacuum lands on the lowest branch
    let ts = common::times(0.0, 60.0, 6001);
    let fields = pump_cavity_dynamics(&model, &[RingDrive::Cw(s)], &[c(0.0, 0.0)], &ts).unwrap();
    assert!((fields[0][6000] - branches[0][0]).norm() <= 1e-6);
}

#[test]
fn dual_pump_fixed_point_balances_spm_and_xpm() {
    let mut model = common::dp_model(1.0, 0.0, 0.0);
    model.eta_spm = 0.02;
    model.zeta_xpm = 0.04;
    model.delta_pump = 0.2;
    model.delta_pump2 = -0.1;
    let drives = [c(0.5, 0.0), c(0.3, 0.2)];
    let branches = cw_steady_state(&model, &drives).unwrap();
    assert_eq!(branches.len(), 1);
    let b = &branches[0];
    for k in 0..2 {
        let pumps = model.pumps();
        let dets = [model.delta_pump, model.delta_pump2];
        let shift = 2.0 * model.eta_spm * b[k].norm_sqr() + model.zeta_xpm * b[1 - k].norm_sqr();
        let r = (c(pumps[k].gamma_bar(), dets[k] - shift) * b[k]
            + c(0.0, pumps[k].coupling_amplitude()) * drives[k])
            .norm();
        assert!(r <= 1e-10, "pump {k} residual {r}");
    }
}

#[test]
fn oversized_steps_are_rejected() {
    let model = common::spdc_model(1.0, 0.0, 0.0);
    let ts = common::times(0.0, 100.0, 3);
    let err = pump_cavity_dynamics(&model, &[RingDrive::Off], &[c(1.0, 0.0)], &ts);
    assert!(err.is_err());
}

#[test]
fn pulsed_drive_peaks_after_the_pump_and_decays() {
    let model = common::spdc_model(1.0, 0.0, 0.0);
    let drive = RingDrive::Gaussian { amplitude: c(1.0, 0.0), center: 3.0, width: 0.5 };
    let ts = common::times(0.0, 12.0, 1201);
    let fields = pump_cavity_dynamics(&model, &[drive], &[c(0.0, 0.0)], &ts).unwrap();
    let peak_idx = (0..ts.len()).max_by(|&a, &b| {
        fields[0][a].norm().partial_cmp(&fields[0][b].norm()).unwrap()
    }).unwrap();
    assert!(ts[peak_idx] > 3.0, "cavity buildup lags the drive peak");
    // late tail is free ringdown at gamma_bar
    let (j1, j2) = (900, 1100);
    let ratio = fields[0][j2].norm() / fields[0][j1].norm();
    assert_relative_eq!(
        ratio,
        (-model.pump.gamma_bar() * (ts[j2] - ts[j1])).exp(),
        max_relative = 1e-6
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn every_returned_branch_solves_the_steady_state(
        gamma in 0.3f64..2.0,
        delta in -3.0f64..3.0,
        eta in 0.0f64..0.8,
        amp in 0.0f64..1.5,
    ) {
        let mut model = common::sp_model(gamma, 0.0, 0.0);
        model.eta_spm = eta;
        model.delta_pump = delta;
        let s = c(amp, 0.0);
        let branches = cw_steady_state(&model, &[s]).unwrap();
        prop_assert!(!branches.is_empty());
        for b in &branches {
            prop_assert!(sp_residual(&model, s, b[0]) <= 1e-9 * amp.max(1e-6));
        }
    }
}
