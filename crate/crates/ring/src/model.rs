//! Ring model: resonances, coupling rates, linear transfer metrics.

use crate::{Result, RingError};
use ndarray::Array1;
use num_complex::Complex64 as C64;
use squeezelab_core::stats::HBAR;

/// Nonlinear strength extracted for the coupled-ring ("photonic molecule")
/// squeezer geometry, usable as a preset Lambda (1/s).
pub const LAMBDA_PHOTONIC_MOLECULE: f64 = 5.0;

/// One ring resonance coupled to its bus channel and an optional phantom
/// loss channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    /// Resonance frequency (rad/s).
    pub omega: f64,
    /// Channel coupling rate Gamma = |gamma|^2 / (2 v) (1/s).
    pub gamma: f64,
    /// Phantom-channel (scattering/absorption) rate (1/s).
    pub gamma_ph: f64,
    /// Group velocity in the ring (m/s).
    pub velocity: f64,
}

impl Resonance {
    /// Total linewidth rate.
    pub fn gamma_bar(&self) -> f64 {
        self.gamma + self.gamma_ph
    }

    /// Magnitude of the point-coupling amplitude |gamma| = sqrt(2 Gamma v);
    /// the phase is a gauge choice and taken real throughout.
    pub fn coupling_amplitude(&self) -> f64 {
        (2.0 * self.gamma * self.velocity).sqrt()
    }
}

/// Which squeezing process drives the signal (and idler) resonance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingScheme {
    /// Single pump, signal and idler on distinct resonances.
    SpSfwm,
    /// Two pumps squeezing a single signal resonance.
    DpSfwm,
    /// Second-harmonic pump down-converting into two fundamentals.
    Spdc,
    /// Degenerate down-conversion into one fundamental (Lambda -> 2 Lambda).
    SpdcDegenerate,
}

impl RingScheme {
    /// Number of classical pump resonances.
    pub fn pump_count(&self) -> usize {
        match self {
            RingScheme::DpSfwm => 2,
            _ => 1,
        }
    }

    /// True when the two quantum components are the same resonance.
    pub fn degenerate(&self) -> bool {
        matches!(self, RingScheme::DpSfwm | RingScheme::SpdcDegenerate)
    }
}

#[derive(Debug, Clone)]
pub struct RingModel {
    pub scheme: RingScheme,
    pub signal: Resonance,
    /// Second quantum resonance; required iff the scheme is non-degenerate.
    pub idler: Option<Resonance>,
    pub pump: Resonance,
    /// Second pump resonance; required iff the scheme is dual-pump.
    pub pump2: Option<Resonance>,
    /// Ring circumference (m).
    pub length: f64,
    /// Generation strength Lambda (1/s); the phase matters only jointly with
    /// the pump phases.
    pub lambda: C64,
    /// Pump self-phase modulation strength eta (1/s).
    pub eta_spm: f64,
    /// Cross-phase modulation strength zeta (1/s).
    pub zeta_xpm: f64,
    /// Pump drive detuning(s) (rad/s).
    pub delta_pump: f64,
    pub delta_pump2: f64,
    /// Resonance mismatch of the nonlinear process (rad/s).
    pub delta_ring: f64,
}

impl RingModel {
    pub fn validate(&self) -> Result<()> {
        let mut quantum = vec![("signal", &self.signal)];
        if let Some(idler) = &self.idler {
            quantum.push(("idler", idler));
        }
        let mut all = quantum.clone();
        all.push(("pump", &self.pump));
        if let Some(p2) = &self.pump2 {
            all.push(("pump2", p2));
        }
        for (name, r) in &all {
            if !(r.omega > 0.0) || r.gamma < 0.0 || r.gamma_ph < 0.0 || !(r.velocity > 0.0) {
                return Err(RingError::Invalid(format!(
                    "{name}: omega and velocity must be positive, rates non-negative"
                )));
            }
            if !(r.gamma_bar() > 0.0) {
                return Err(RingError::Invalid(format!("{name}: total linewidth must be positive")));
            }
        }
        if !(self.length > 0.0) {
            return Err(RingError::Invalid("ring length must be positive".into()));
        }
        if self.eta_spm < 0.0 || self.zeta_xpm < 0.0 {
            return Err(RingError::Invalid("eta and zeta must be non-negative".into()));
        }
        if self.idler.is_some() == self.scheme.degenerate() {
            return Err(RingError::Invalid(
                "idler resonance is required exactly for the non-degenerate schemes".into(),
            ));
        }
        if self.pump2.is_some() != (self.scheme.pump_count() == 2) {
            return Err(RingError::Invalid(
                "second pump resonance is required exactly for the dual-pump scheme".into(),
            ));
        }
        Ok(())
    }

    /// The resonance playing the idler role (the signal itself when
    /// degenerate).
    pub fn idler_or_signal(&self) -> &Resonance {
        self.idler.as_ref().unwrap_or(&self.signal)
    }

    /// Classical pump resonances in order.
    pub fn pumps(&self) -> Vec<&Resonance> {
        let mut v = vec![&self.pump];
        if let Some(p2) = &self.pump2 {
            v.push(p2);
        }
        v
    }

    /// Pump detunings in order.
    pub fn pump_detunings(&self) -> Vec<f64> {
        match self.scheme.pump_count() {
            2 => vec![self.delta_pump, self.delta_pump2],
            _ => vec![self.delta_pump],
        }
    }

    /// Effective generation strength (the degenerate down-conversion limit
    /// doubles Lambda).
    pub fn lambda_eff(&self) -> C64 {
        match self.scheme {
            RingScheme::SpdcDegenerate => self.lambda * 2.0,
            _ => self.lambda,
        }
    }
}

/// Linear single-resonance metrics and the bus transfer function.
#[derive(Debug, Clone)]
pub struct LinearRingMetrics {
    /// T(omega) on the supplied grid.
    pub transfer: Array1<C64>,
    pub q_loaded: f64,
    /// Coupling-limited quality factor.
    pub q_external: f64,
    /// Loss-limited quality factor (infinite for a lossless ring).
    pub q_intrinsic: f64,
    pub finesse: f64,
    /// Peak field enhancement squared at critical coupling.
    pub fe_crit_sq: f64,
    /// Peak field enhancement squared in the strongly overcoupled limit.
    pub fe_over_sq: f64,
}

/// Transfer function and quality metrics of one resonance.
pub fn linear_ring_metrics(res: &Resonance, length: f64, omega: &Array1<f64>) -> LinearRingMetrics {
    let gb = res.gamma_bar();
    let transfer = omega.mapv(|w| {
        C64::new(res.omega - w, res.gamma - res.gamma_ph) / C64::new(res.omega - w, -gb)
    });
    let finesse = std::f64::consts::PI * res.velocity / (gb * length);
    LinearRingMetrics {
        transfer,
        q_loaded: res.omega / (2.0 * gb),
        q_external: if res.gamma > 0.0 { res.omega / (2.0 * res.gamma) } else { f64::INFINITY },
        q_intrinsic: if res.gamma_ph > 0.0 {
            res.omega / (2.0 * res.gamma_ph)
        } else {
            f64::INFINITY
        },
        finesse,
        fe_crit_sq: finesse / std::f64::consts::PI,
        fe_over_sq: 2.0 * finesse / std::f64::consts::PI,
    }
}

/// |gamma|^2 from the self-coupling constant sigma of the phenomenological
/// coupler model.
pub fn gamma_from_sigma(sigma: f64, velocity: f64, length: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(RingError::Invalid(format!("sigma = {sigma} outside (0, 1]")));
    }
    if !(velocity > 0.0 && length > 0.0) {
        return Err(RingError::Invalid("velocity and length must be positive".into()));
    }
    Ok(2.0 * velocity * velocity * (1.0 - sigma) / length)
}

/// Self-phase-modulation resonance shift per intracavity photon (rad/s);
/// `k_overlap` is the mode overlap integral of the ring cross section.
pub fn spm_shift_per_photon(omega_pump: f64, length: f64, k_overlap: f64) -> f64 {
    let u = HBAR * omega_pump / (2.0 * length);
    -(3.0 / HBAR) * u * u * k_overlap
}
