//! Shared model builders for the ring tests. Rates are in 1/s but chosen of
//! order unity so the grids stay small; the physics only sees ratios.

#![allow(dead_code)]

use ndarray::Array1;
use num_complex::Complex64 as C64;
use squeezelab_ring::{Resonance, RingModel, RingScheme};

pub const OMEGA_0: f64 = 1.2153e15;

pub fn resonance(gamma: f64, gamma_ph: f64) -> Resonance {
    Resonance { omega: OMEGA_0, gamma, gamma_ph, velocity: 0.5 }
}

/// Non-degenerate down-conversion model, on resonance, no Kerr terms.
pub fn spdc_model(gamma: f64, gamma_ph: f64, lambda: f64) -> RingModel {
    RingModel {
        scheme: RingScheme::Spdc,
        signal: resonance(gamma, gamma_ph),
        idler: Some(resonance(gamma, gamma_ph)),
        pump: resonance(gamma, gamma_ph),
        pump2: None,
        length: 1.0e-4,
        lambda: C64::new(lambda, 0.0),
        eta_spm: 0.0,
        zeta_xpm: 0.0,
        delta_pump: 0.0,
        delta_pump2: 0.0,
        delta_ring: 0.0,
    }
}

/// Degenerate down-conversion squeezing a single resonance.
pub fn degenerate_model(gamma: f64, gamma_ph: f64, lambda: f64) -> RingModel {
    RingModel {
        scheme: RingScheme::SpdcDegenerate,
        signal: resonance(gamma, gamma_ph),
        idler: None,
        pump: resonance(gamma, gamma_ph),
        pump2: None,
        length: 1.0e-4,
        lambda: C64::new(lambda, 0.0),
        eta_spm: 0.0,
        zeta_xpm: 0.0,
        delta_pump: 0.0,
        delta_pump2: 0.0,
        delta_ring: 0.0,
    }
}

/// Dual-pump four-wave mixing squeezing a single resonance.
pub fn dp_model(gamma: f64, gamma_ph: f64, lambda: f64) -> RingModel {
    RingModel {
        scheme: RingScheme::DpSfwm,
        signal: resonance(gamma, gamma_ph),
        idler: None,
        pump: resonance(gamma, gamma_ph),
        pump2: Some(resonance(gamma, gamma_ph)),
        length: 1.0e-4,
        lambda: C64::new(lambda, 0.0),
        eta_spm: 0.0,
        zeta_xpm: 0.0,
        delta_pump: 0.0,
        delta_pump2: 0.0,
        delta_ring: 0.0,
    }
}

/// Single-pump four-wave mixing with distinct signal and idler resonances.
pub fn sp_model(gamma: f64, gamma_ph: f64, lambda: f64) -> RingModel {
    RingModel {
        scheme: RingScheme::SpSfwm,
        signal: resonance(gamma, gamma_ph),
        idler: Some(resonance(gamma, gamma_ph)),
        pump: resonance(gamma, gamma_ph),
        pump2: None,
        length: 1.0e-4,
        lambda: C64::new(lambda, 0.0),
        eta_spm: 0.0,
        zeta_xpm: 0.0,
        delta_pump: 0.0,
        delta_pump2: 0.0,
        delta_ring: 0.0,
    }
}

pub fn times(t0: f64, t1: f64, n: usize) -> Array1<f64> {
    squeezelab_testkit::linspace(t0, t1, n)
}

/// Constant pump track on a grid.
pub fn const_track(value: C64, n: usize) -> Array1<C64> {
    Array1::from_elem(n, value)
}

/// Gaussian pump track b0 exp(-(t - tc)^2 / 2 w^2) sampled on `ts`.
pub fn gaussian_track(ts: &Array1<f64>, b0: f64, tc: f64, w: f64) -> Array1<C64> {
    ts.mapv(|t| C64::new(b0 * (-0.5 * ((t - tc) / w).powi(2)).exp(), 0.0))
}
