//! Symmetric kappa grids for the discretized quantum bands.

use crate::process::WaveguideProcess;
use crate::{Result, WaveguideError};
use ndarray::Array1;

/// Uniform symmetric grid kappa_j = j * spacing, j in [-n, n].
#[derive(Debug, Clone, Copy)]
pub struct KappaGrid {
    pub spacing: f64,
    pub half_points: usize,
}

impl KappaGrid {
    pub fn new(spacing: f64, half_points: usize) -> Result<Self> {
        if !(spacing > 0.0) || half_points == 0 {
            return Err(WaveguideError::Invalid(
                "kappa grid needs positive spacing and at least 3 points".into(),
            ));
        }
        Ok(Self { spacing, half_points })
    }

    /// Grid with the given full width 2 kappa_max and odd point count.
    pub fn with_window(window: f64, points: usize) -> Result<Self> {
        if points < 3 || points % 2 == 0 {
            return Err(WaveguideError::Invalid("kappa grid point count must be odd and >= 3".into()));
        }
        let half = (points - 1) / 2;
        Self::new(window / (points - 1) as f64, half)
    }

    /// Default grid for a Gaussian-pumped process: full width 8/(v_mean tau),
    /// 129 points, with v_mean the mean quantum-band group velocity.
    pub fn default_for(process: &WaveguideProcess) -> Result<Self> {
        let tau = process
            .pump_pulse
            .gaussian_tau()
            .ok_or_else(|| WaveguideError::Invalid("default grid needs a Gaussian pump pulse".into()))?;
        let (s, i) = process.quantum_bands();
        let v_mean = match i {
            Some(i) => 0.5 * (s.velocity + i.velocity),
            None => s.velocity,
        };
        Self::with_window(8.0 / (v_mean * tau), 129)
    }

    pub fn len(&self) -> usize {
        2 * self.half_points + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kappa_max(&self) -> f64 {
        self.half_points as f64 * self.spacing
    }

    /// Full covered width 2 kappa_max.
    pub fn window(&self) -> f64 {
        2.0 * self.kappa_max()
    }

    pub fn points(&self) -> Array1<f64> {
        let n = self.half_points as isize;
        Array1::from_iter((-n..=n).map(|j| j as f64 * self.spacing))
    }

    /// Require the window to resolve every generated band: 2 kappa_max >= 6/(v_J tau).
    pub fn validate_for(&self, process: &WaveguideProcess, tau: f64) -> Result<()> {
        let (s, i) = process.quantum_bands();
        let mut bands = vec![s];
        if let Some(i) = i {
            bands.push(i);
        }
        for b in bands {
            let need = 6.0 / (b.velocity * tau);
            if self.window() < need {
                return Err(WaveguideError::Invalid(format!(
                    "kappa window {:.3e} below the resolution floor {:.3e} for a generated band",
                    self.window(),
                    need
                )));
            }
        }
        Ok(())
    }
}
