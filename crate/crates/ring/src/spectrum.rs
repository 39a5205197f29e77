//! Homodyne squeezing spectra from stationary (CW) two-time moments.
//!
//! S(Omega) = 1 + N(Omega,Omega) + N(-Omega,-Omega)
//!            + 2 Re[exp(-2i phi_LO) M(Omega,-Omega)],
//! with the frequency-domain moments obtained as Hann-windowed lag
//! transforms of the stationary correlations n(tau), m(tau).

use crate::moments::TwoTimeMoments;
use crate::{Result, RingError};
use ndarray::Array1;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct SqueezingSpectrum {
    pub omega: Array1<f64>,
    /// S at the requested local-oscillator phase.
    pub s_at_phi: Array1<f64>,
    /// Envelope over the local-oscillator phase.
    pub s_min: Array1<f64>,
    pub s_max: Array1<f64>,
    pub phi_lo: f64,
}

/// Symmetric frequency grid reaching `span` times the linewidth scale.
pub fn default_omega_grid(gamma_bar: f64, points: usize) -> Array1<f64> {
    let span = 8.0 * gamma_bar;
    Array1::from_iter(
        (0..points).map(|k| -span + 2.0 * span * k as f64 / (points - 1) as f64),
    )
}

/// Default CW solve grid: 2048 points spanning 12 lifetimes of the narrowest
/// resonance, starting at `t0`.
pub fn default_time_grid(gamma_bar_min: f64, t0: f64) -> Array1<f64> {
    let n = 2048;
    let span = 12.0 / gamma_bar_min;
    Array1::from_iter((0..n).map(|k| t0 + span * k as f64 / (n - 1) as f64))
}

/// Extract stationary lag correlations from a two-time matrix around a
/// reference index.
fn lags(mat: &ndarray::Array2<C64>, r: usize, max_lag: usize) -> Vec<C64> {
    (0..=max_lag).map(|k| mat[(r + k, r)]).collect()
}

/// Hann-windowed two-sided lag transform at one frequency:
/// sum_k w(k) c(k) e^{i Omega tau_k} dt, with c(-k) supplied separately.
fn lag_transform(pos: &[C64], neg: &[C64], dt: f64, omega: f64) -> C64 {
    let l = pos.len() - 1;
    let mut acc = pos[0] * hann(0, l);
    for k in 1..=l {
        let ph = C64::from_polar(1.0, omega * k as f64 * dt);
        acc += pos[k] * ph * hann(k, l) + neg[k] * ph.conj() * hann(k, l);
    }
    acc * dt
}

fn hann(k: usize, l: usize) -> f64 {
    0.5 * (1.0 + (std::f64::consts::PI * k as f64 / l as f64).cos())
}

/// Squeezing spectrum of the signal/idler channel pair at `phi_lo`.
///
/// The moments must come from a CW run that has reached steady state over
/// the second half of its grid; stationarity is verified by comparing the
/// lag correlations at two reference times.
pub fn squeezing_spectrum(
    moments: &TwoTimeMoments,
    phi_lo: f64,
    omega: &Array1<f64>,
) -> Result<SqueezingSpectrum> {
    let nt = moments.times.len();
    if nt < 32 {
        return Err(RingError::Invalid("spectrum needs at least 32 time samples".into()));
    }
    let dt = moments.times[1] - moments.times[0];
    let max_lag = nt / 5;
    let r1 = nt * 5 / 8;
    let r2 = nt * 3 / 4;
    if r2 + max_lag >= nt {
        return Err(RingError::Invalid("moment grid too short for the lag window".into()));
    }

    let n_pos = lags(&moments.n_signal, r2, max_lag);
    let n_other = moments.n_idler.as_ref().unwrap_or(&moments.n_signal);
    let n_other_pos = lags(n_other, r2, max_lag);
    let m_pos = lags(&moments.m_cross, r2, max_lag);
    let m_neg: Vec<C64> = (0..=max_lag).map(|k| moments.m_cross[(r2, r2 + k)]).collect();

    // stationarity: the same lags taken earlier must agree
    let n_chk = lags(&moments.n_signal, r1, max_lag);
    let m_chk = lags(&moments.m_cross, r1, max_lag);
    let scale = n_pos
        .iter()
        .chain(&m_pos)
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let drift = n_pos
        .iter()
        .zip(&n_chk)
        .chain(m_pos.iter().zip(&m_chk))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    if drift > 1e-3 * scale {
        return Err(RingError::Invalid(format!(
            "two-time moments are not stationary (relative drift {:.3e}); \
             run the CW drive to steady state first",
            drift / scale
        )));
    }

    // n(-tau) = n(tau)* from Hermiticity
    let n_neg: Vec<C64> = n_pos.iter().map(|z| z.conj()).collect();
    let n_other_neg: Vec<C64> = n_other_pos.iter().map(|z| z.conj()).collect();

    let nw = omega.len();
    let mut s_at_phi = Array1::zeros(nw);
    let mut s_min = Array1::zeros(nw);
    let mut s_max = Array1::zeros(nw);
    let rot = C64::from_polar(1.0, -2.0 * phi_lo);
    for (j, &w) in omega.iter().enumerate() {
        let n_w = lag_transform(&n_pos, &n_neg, dt, w).re;
        let n_mw = lag_transform(&n_other_pos, &n_other_neg, dt, -w).re;
        let m_w = lag_transform(&m_pos, &m_neg, dt, w);
        let base = 1.0 + n_w + n_mw;
        s_at_phi[j] = base + 2.0 * (rot * m_w).re;
        s_min[j] = base - 2.0 * m_w.norm();
        s_max[j] = base + 2.0 * m_w.norm();
    }
    if let Some(&bad) = s_min.iter().find(|&&s| s < -1e-3) {
        return Err(RingError::Numeric(format!(
            "squeezing spectrum went negative ({bad:.3e}): moments are unphysical \
             or the lag window is too short"
        )));
    }
    Ok(SqueezingSpectrum { omega: omega.clone(), s_at_phi, s_min, s_max, phi_lo })
}
