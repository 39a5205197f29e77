//! Shared fixtures: the engineered separable SFWM configuration.
//!
//! Group velocities are chosen so the signal and idler inverse-velocity
//! walk-offs against the pump are equal and opposite (1/v_J = 1/v_P -+ d),
//! and the pump duration satisfies tau^2 = s d^2 L^2 / 2. With a Gaussian
//! phase-matching profile this makes the low-gain JSA exactly separable with
//! tau_S = tau_I = tau and xi_bar = Phi / (2 sqrt(2 pi)).

#![allow(dead_code)]

use squeezelab_core::stats::HBAR;
use squeezelab_waveguide::grid::KappaGrid;
use squeezelab_waveguide::process::{
    Band, PolingProfile, ProcessKind, PumpPulse, WaveguideProcess, SINC_GAUSS_S,
};

pub const D_WALKOFF: f64 = 0.15;
pub const V_PUMP: f64 = 1.0;
pub const LENGTH: f64 = 1.0;
pub const OMEGA_P: f64 = 2.0;
pub const OMEGA_S: f64 = 2.2;
pub const OMEGA_I: f64 = 1.8;
pub const PUMP_PHOTONS: f64 = 1.0e6;

pub fn pump_tau() -> f64 {
    D_WALKOFF * LENGTH * (SINC_GAUSS_S / 2.0).sqrt()
}

pub fn xi_bar(phi: f64) -> f64 {
    phi / (2.0 * (2.0 * std::f64::consts::PI).sqrt())
}

fn band(omega: f64, velocity: f64) -> Band {
    Band { omega, velocity, gvd: 0.0, attenuation: 0.0 }
}

/// SFWM-SP-NDSV process tuned so the interaction strength integrates to Phi.
pub fn separable_process(phi: f64) -> WaveguideProcess {
    let omega_bar = (OMEGA_S * OMEGA_I * OMEGA_P * OMEGA_P).powf(0.25);
    let gamma_gen = phi * pump_tau() / (HBAR * omega_bar * PUMP_PHOTONS * LENGTH);
    WaveguideProcess {
        kind: ProcessKind::SfwmSpNdsv {
            gamma_gen,
            gamma_spm: 0.0,
            gamma_xpm_s: 0.0,
            gamma_xpm_i: 0.0,
        },
        length: LENGTH,
        poling: PolingProfile::GaussianPmf,
        pump: band(OMEGA_P, V_PUMP),
        pump2: None,
        signal: band(OMEGA_S, 1.0 / (1.0 / V_PUMP - D_WALKOFF)),
        idler: Some(band(OMEGA_I, 1.0 / (1.0 / V_PUMP + D_WALKOFF))),
        pump_pulse: PumpPulse::Gaussian { tau: pump_tau(), photons: PUMP_PHOTONS },
        pump2_pulse: None,
    }
}

/// Symmetric kappa grid wide enough for both generated bands.
pub fn separable_grid(points: usize) -> KappaGrid {
    KappaGrid::with_window(7.2 / pump_tau(), points).expect("valid grid")
}
