//! Process descriptions: bands, nonlinear couplings and pump pulses.

use crate::{Result, WaveguideError};
use ndarray::Array1;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// One optical band of the waveguide.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Band {
    /// Carrier frequency omega_J (rad/s).
    pub omega: f64,
    /// Group velocity v_J (m/s).
    pub velocity: f64,
    /// Group velocity dispersion v'_J (m^2/s).
    pub gvd: f64,
    /// Temporal attenuation rho_J = alpha_J v_J (1/s).
    pub attenuation: f64,
}

impl Band {
    /// Dispersion relative to the carrier: omega_J(kappa) = v kappa + (v'/2) kappa^2.
    pub fn dispersion(&self, kappa: f64) -> f64 {
        self.velocity * kappa + 0.5 * self.gvd * kappa * kappa
    }
}

/// Classical pump pulse at the start of the solve.
#[derive(Debug, Clone)]
pub enum PumpPulse {
    /// Transform-limited Gaussian: spectral amplitude exp(-tau^2 (omega - omega_P)^2),
    /// carrying `photons` photons, centered at x = velocity * t.
    Gaussian { tau: f64, photons: f64 },
    /// Arbitrary initial envelope sampled on a uniform x grid (lab frame).
    SampledInitial { x: Array1<f64>, psi: Array1<C64> },
}

impl PumpPulse {
    pub fn gaussian_tau(&self) -> Option<f64> {
        match self {
            PumpPulse::Gaussian { tau, .. } => Some(*tau),
            PumpPulse::SampledInitial { .. } => None,
        }
    }
}

/// Process kind with exactly the nonlinear coefficients each process needs.
///
/// FWM coefficients are the channel gamma's ((W m)^-1 scaled); SPDC uses the
/// channel zeta (J m^{1/2}). XPM entries of dual-pump kinds are ordered
/// [pump1, pump2].
#[derive(Debug, Clone, Copy)]
pub enum ProcessKind {
    /// chi2, 2 omega_S = omega_P: one squeezed band.
    SpdcDsv { zeta: f64 },
    /// chi2, omega_S + omega_I = omega_P: twin beams.
    SpdcNdsv { zeta: f64 },
    /// chi3 single pump squeezing its own fluctuations.
    SfwmSpDsv { gamma_pppp: f64 },
    /// chi3 single pump, omega_S + omega_I = 2 omega_P.
    SfwmSpNdsv { gamma_gen: f64, gamma_spm: f64, gamma_xpm_s: f64, gamma_xpm_i: f64 },
    /// chi3 dual pump, 2 omega_S = omega_P1 + omega_P2.
    SfwmDpDsv {
        gamma_gen: f64,
        gamma_spm: [f64; 2],
        gamma_xpm_pumps: f64,
        gamma_xpm_s: [f64; 2],
    },
    /// chi3 dual pump, omega_S + omega_I = omega_P1 + omega_P2.
    SfwmDpNdsv {
        gamma_gen: f64,
        gamma_spm: [f64; 2],
        gamma_xpm_pumps: f64,
        gamma_xpm_s: [f64; 2],
        gamma_xpm_i: [f64; 2],
    },
}

impl ProcessKind {
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            ProcessKind::SpdcDsv { .. } | ProcessKind::SfwmSpDsv { .. } | ProcessKind::SfwmDpDsv { .. }
        )
    }

    pub fn is_dual_pump(&self) -> bool {
        matches!(self, ProcessKind::SfwmDpDsv { .. } | ProcessKind::SfwmDpNdsv { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProcessKind::SpdcDsv { .. } => "SPDC-DSV",
            ProcessKind::SpdcNdsv { .. } => "SPDC-NDSV",
            ProcessKind::SfwmSpDsv { .. } => "SFWM-SP-DSV",
            ProcessKind::SfwmSpNdsv { .. } => "SFWM-SP-NDSV",
            ProcessKind::SfwmDpDsv { .. } => "SFWM-DP-DSV",
            ProcessKind::SfwmDpNdsv { .. } => "SFWM-DP-NDSV",
        }
    }
}

/// Width parameter of the Gaussian stand-in for sinc phase matching:
/// sinc(x) ~ exp(-s x^2).
pub const SINC_GAUSS_S: f64 = 0.193;

/// Longitudinal profile of the nonlinear coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PolingProfile {
    /// Uniform nonlinearity over [-L/2, L/2]; sinc phase matching.
    #[default]
    Uniform,
    /// Apodized nonlinearity exp(-x^2 / (2 sigma^2)) with sigma = L sqrt(s/2),
    /// normalized to the same integrated strength; Gaussian phase matching
    /// exp(-s (dk L / 2)^2).
    GaussianPmf,
}

/// Full description of one waveguide squeezing run.
#[derive(Debug, Clone)]
pub struct WaveguideProcess {
    pub kind: ProcessKind,
    /// Nonlinear region length (m), extending over [-L/2, L/2].
    pub length: f64,
    pub poling: PolingProfile,
    pub pump: Band,
    pub pump2: Option<Band>,
    pub signal: Band,
    pub idler: Option<Band>,
    pub pump_pulse: PumpPulse,
    pub pump2_pulse: Option<PumpPulse>,
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub(crate) fn geometric_quartic(vals: [f64; 4]) -> f64 {
    vals.iter().product::<f64>().powf(0.25)
}

impl WaveguideProcess {
    /// Check band presence, positivity and energy matching for the kind.
    pub fn validate(&self) -> Result<()> {
        let mut bands = vec![("pump", &self.pump), ("signal", &self.signal)];
        if let Some(b) = &self.pump2 {
            bands.push(("pump2", b));
        }
        if let Some(b) = &self.idler {
            bands.push(("idler", b));
        }
        for (name, b) in &bands {
            if !(b.velocity > 0.0) {
                return Err(WaveguideError::Invalid(format!("{name} band velocity must be positive")));
            }
            if b.attenuation < 0.0 {
                return Err(WaveguideError::Invalid(format!("{name} band attenuation must be >= 0")));
            }
            if !(b.omega > 0.0) {
                return Err(WaveguideError::Invalid(format!("{name} band frequency must be positive")));
            }
        }
        if !(self.length > 0.0) {
            return Err(WaveguideError::Invalid("length must be positive".into()));
        }
        if self.kind.is_dual_pump() {
            if self.pump2.is_none() || self.pump2_pulse.is_none() {
                return Err(WaveguideError::Invalid(format!(
                    "{} needs a second pump band and pulse",
                    self.kind.name()
                )));
            }
        } else if self.pump2.is_some() || self.pump2_pulse.is_some() {
            return Err(WaveguideError::Invalid(format!(
                "{} takes a single pump",
                self.kind.name()
            )));
        }
        if self.kind.is_degenerate() {
            if self.idler.is_some() {
                return Err(WaveguideError::Invalid(format!(
                    "{} squeezes one band; no idler allowed",
                    self.kind.name()
                )));
            }
        } else if self.idler.is_none() {
            return Err(WaveguideError::Invalid(format!(
                "{} needs an idler band",
                self.kind.name()
            )));
        }
        if let PumpPulse::Gaussian { tau, photons } = self.pump_pulse {
            if !(tau > 0.0) || photons < 0.0 {
                return Err(WaveguideError::Invalid("pump pulse needs tau > 0, photons >= 0".into()));
            }
        }
        let tol = 1e-9;
        let (ws, wp) = (self.signal.omega, self.pump.omega);
        let matched = match self.kind {
            ProcessKind::SpdcDsv { .. } => rel_close(2.0 * ws, wp, tol),
            ProcessKind::SpdcNdsv { .. } => rel_close(ws + self.idler.unwrap().omega, wp, tol),
            ProcessKind::SfwmSpDsv { .. } => {
                // the squeezed band rides the pump band
                rel_close(ws, wp, tol)
                    && rel_close(self.signal.velocity, self.pump.velocity, tol)
                    && rel_close(self.signal.gvd, self.pump.gvd, tol)
            }
            ProcessKind::SfwmSpNdsv { .. } => rel_close(ws + self.idler.unwrap().omega, 2.0 * wp, tol),
            ProcessKind::SfwmDpDsv { .. } => {
                rel_close(2.0 * ws, wp + self.pump2.unwrap().omega, tol)
            }
            ProcessKind::SfwmDpNdsv { .. } => {
                rel_close(ws + self.idler.unwrap().omega, wp + self.pump2.unwrap().omega, tol)
            }
        };
        if !matched {
            return Err(WaveguideError::Invalid(format!(
                "{}: band frequencies violate energy matching",
                self.kind.name()
            )));
        }
        Ok(())
    }

    /// Quantum bands of the solve: (signal, Some(idler)) or (signal, None).
    pub fn quantum_bands(&self) -> (Band, Option<Band>) {
        (self.signal, self.idler)
    }

    /// Pump bands present, primary first.
    pub fn pump_bands(&self) -> Vec<Band> {
        let mut v = vec![self.pump];
        if let Some(b) = self.pump2 {
            v.push(b);
        }
        v
    }

    /// Half width of the region where the nonlinear coupling acts. Uniform
    /// poling stops at L/2; the Gaussian profile is carried out to 4.5 sigma.
    pub fn interaction_half_width(&self) -> f64 {
        match self.poling {
            PolingProfile::Uniform => 0.5 * self.length,
            PolingProfile::GaussianPmf => {
                let sigma = self.length * (SINC_GAUSS_S / 2.0).sqrt();
                (0.5 * self.length).max(4.5 * sigma)
            }
        }
    }

    /// Local nonlinearity weight, normalized so its integral over x equals L.
    pub fn poling_weight(&self, x: f64) -> f64 {
        match self.poling {
            PolingProfile::Uniform => {
                if x.abs() <= 0.5 * self.length * (1.0 + 1e-12) {
                    1.0
                } else {
                    0.0
                }
            }
            PolingProfile::GaussianPmf => {
                let sigma = self.length * (SINC_GAUSS_S / 2.0).sqrt();
                let norm = self.length / ((2.0 * std::f64::consts::PI).sqrt() * sigma);
                norm * (-x * x / (2.0 * sigma * sigma)).exp()
            }
        }
    }

    pub fn pump_pulses(&self) -> Vec<&PumpPulse> {
        let mut v = vec![&self.pump_pulse];
        if let Some(p) = &self.pump2_pulse {
            v.push(p);
        }
        v
    }
}
