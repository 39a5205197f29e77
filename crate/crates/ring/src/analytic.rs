//! Closed forms for limiting ring configurations, used as references for the
//! numerical Green-function and moment machinery.

use crate::{Result, RingError};
use ndarray::Array1;

/// Delta-pump (impulsive gain) reference for a lossless degenerate ring:
/// an instantaneous two-mode kick of strength `mu` at t = 0 followed by free
/// ring decay at rate gamma_bar.
#[derive(Debug, Clone)]
pub struct DeltaPumpReport {
    /// Squeeze parameter of the impulsive kick.
    pub mu: f64,
    pub times: Array1<f64>,
    /// Temporal profile of the single emitted Schmidt mode,
    /// f0(t) = sqrt(2 gamma_bar) exp(-gamma_bar t) theta(t).
    pub f0: Array1<f64>,
    /// Total photons per output channel, sinh^2(mu) exactly.
    pub pair_number: f64,
    /// The impulsive limit emits into a single temporal mode.
    pub schmidt_number: f64,
}

pub fn delta_pump_analytic(mu: f64, gamma_bar: f64, times: &Array1<f64>) -> Result<DeltaPumpReport> {
    if !(mu.is_finite() && gamma_bar > 0.0) {
        return Err(RingError::Invalid("delta pump needs finite mu and gamma_bar > 0".into()));
    }
    let norm = (2.0 * gamma_bar).sqrt();
    let f0 = times.mapv(|t| {
        if t > 0.0 {
            norm * (-gamma_bar * t).exp()
        } else if t == 0.0 {
            0.5 * norm
        } else {
            0.0
        }
    });
    Ok(DeltaPumpReport {
        mu,
        times: times.clone(),
        f0,
        pair_number: mu.sinh().powi(2),
        schmidt_number: 1.0,
    })
}

/// Stationary output correlations of a lossless CW-driven ring below
/// threshold: gain rate eps < gamma_bar, both channels critically coupled.
/// Returns (n(tau), m(tau)) for tau >= 0; n is the flux autocorrelation and m
/// the anomalous correlation in a frame where m is real.
pub fn cw_lossless_correlations(eps: f64, gamma_bar: f64, tau: f64) -> (f64, f64) {
    let a = gamma_bar;
    let em = (-(a - eps) * tau.abs()).exp() / (a - eps);
    let ep = (-(a + eps) * tau.abs()).exp() / (a + eps);
    (0.5 * a * eps * (em - ep), -0.5 * a * eps * (em + ep))
}

/// Squeezing-spectrum envelope of the same configuration:
/// S_min(Omega) = 1 - 4 a eps / ((a + eps)^2 + Omega^2),
/// S_max(Omega) = 1 + 4 a eps / ((a - eps)^2 + Omega^2),
/// with S_min S_max = 1 at every frequency (minimum-uncertainty output).
pub fn cw_lossless_spectrum_bounds(eps: f64, gamma_bar: f64, omega: f64) -> (f64, f64) {
    let a = gamma_bar;
    let s_min = 1.0 - 4.0 * a * eps / ((a + eps).powi(2) + omega * omega);
    let s_max = 1.0 + 4.0 * a * eps / ((a - eps).powi(2) + omega * omega);
    (s_min, s_max)
}
