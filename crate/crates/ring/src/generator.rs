//! 2x2 Heisenberg generators M(t) for the intracavity signal/idler pair,
//! built from the classical pump amplitudes.
//!
//! The state vector is (c_S, c_I^dag) for the non-degenerate schemes and
//! (c_S, c_S^dag) for the degenerate ones.

use crate::model::{RingModel, RingScheme};
use crate::{Result, RingError};
use ndarray::Array1;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct RingGenerator {
    model: RingModel,
    times: Array1<f64>,
    betas: Vec<Array1<C64>>,
}

/// Bind pump amplitudes sampled on `times` to the scheme's generator.
pub fn build_ring_generator(
    model: &RingModel,
    betas: &[Array1<C64>],
    times: &Array1<f64>,
) -> Result<RingGenerator> {
    model.validate()?;
    let np = model.scheme.pump_count();
    if betas.len() != np {
        return Err(RingError::Invalid(format!("scheme needs {np} pump amplitude track(s)")));
    }
    if times.len() < 2 {
        return Err(RingError::Invalid("need at least two time samples".into()));
    }
    for b in betas {
        if b.len() != times.len() {
            return Err(RingError::Invalid("pump track length must match the time grid".into()));
        }
    }
    Ok(RingGenerator { model: model.clone(), times: times.clone(), betas: betas.to_vec() })
}

impl RingGenerator {
    pub fn times(&self) -> &Array1<f64> {
        &self.times
    }

    /// Linear interpolation of pump `p` at time `t` (clamped to the grid).
    fn beta_at(&self, p: usize, t: f64) -> C64 {
        let ts = &self.times;
        let n = ts.len();
        if t <= ts[0] {
            return self.betas[p][0];
        }
        if t >= ts[n - 1] {
            return self.betas[p][n - 1];
        }
        // uniform-grid index guess, then guard
        let dt = ts[1] - ts[0];
        let mut j = (((t - ts[0]) / dt) as usize).min(n - 2);
        while j > 0 && t < ts[j] {
            j -= 1;
        }
        while j < n - 2 && t > ts[j + 1] {
            j += 1;
        }
        let f = (t - ts[j]) / (ts[j + 1] - ts[j]);
        self.betas[p][j] * (1.0 - f) + self.betas[p][j + 1] * f
    }

    /// Generator entries [m11, m12, m21, m22] at time `t`.
    pub fn m_at(&self, t: f64) -> [C64; 4] {
        let m = &self.model;
        let lam = m.lambda_eff();
        let i = C64::new(0.0, 1.0);
        match m.scheme {
            RingScheme::SpSfwm => {
                let b = self.beta_at(0, t);
                let xpm = m.zeta_xpm * b.norm_sqr();
                let phase = C64::from_polar(1.0, -m.delta_ring * t);
                let m12 = i * lam * b * b * phase;
                [
                    C64::new(-m.signal.gamma_bar(), -m.delta_pump + xpm),
                    m12,
                    m12.conj(),
                    C64::new(-m.idler_or_signal().gamma_bar(), m.delta_pump - xpm),
                ]
            }
            RingScheme::DpSfwm => {
                let b1 = self.beta_at(0, t);
                let b2 = self.beta_at(1, t);
                let dbar = 0.5 * (m.delta_pump + m.delta_pump2);
                let xpm = m.zeta_xpm * (b1.norm_sqr() + b2.norm_sqr());
                let phase = C64::from_polar(1.0, -m.delta_ring * t);
                let m12 = i * lam * 2.0 * b1 * b2 * phase;
                [
                    C64::new(-m.signal.gamma_bar(), -dbar + xpm),
                    m12,
                    m12.conj(),
                    C64::new(-m.signal.gamma_bar(), dbar - xpm),
                ]
            }
            RingScheme::Spdc | RingScheme::SpdcDegenerate => {
                let b = self.beta_at(0, t);
                let half = 0.5 * (m.delta_pump - m.delta_ring);
                let m12 = i * lam * b;
                [
                    C64::new(-m.signal.gamma_bar(), -half),
                    m12,
                    m12.conj(),
                    C64::new(-m.idler_or_signal().gamma_bar(), half),
                ]
            }
        }
    }

    /// Largest entry magnitude over the sampled grid, for step-size guards.
    pub fn max_entry(&self) -> f64 {
        self.times
            .iter()
            .map(|&t| self.m_at(t).iter().map(|z| z.norm()).fold(0.0f64, f64::max))
            .fold(0.0f64, f64::max)
    }
}
