//! Classical pump mean fields.
//!
//! SPDC pumps propagate linearly; SFWM pumps obey an NLSE with self-phase
//! modulation (and cross-phase modulation between the two pumps of dual-pump
//! processes). Everything is solved in the lab frame by split-step Fourier:
//! dispersion and advection exactly in kappa space, the nonlinear phase
//! exactly in x space.

use crate::process::{Band, ProcessKind, PumpPulse, WaveguideProcess};
use crate::{Result, WaveguideError};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use squeezelab_core::stats::HBAR;

/// Pump envelopes sampled on a common (t, x) grid, one field per pump.
#[derive(Debug, Clone)]
pub struct PumpEnsemble {
    pub x: Array1<f64>,
    pub times: Array1<f64>,
    pub fields: Vec<Array2<C64>>,
}

impl PumpEnsemble {
    /// Envelope of pump `p` at time index `j`.
    pub fn slice(&self, p: usize, j: usize) -> Array1<C64> {
        self.fields[p].row(j).to_owned()
    }
}

/// Closed-form rigid Gaussian envelope (no SPM, no GVD, no loss): the pulse
/// translates at the group velocity with its center at x = v t.
pub fn rigid_gaussian(band: &Band, tau: f64, photons: f64, x: f64, t: f64) -> C64 {
    let tx = band.velocity * tau;
    let amp = (photons / (tx * (2.0 * std::f64::consts::PI).sqrt())).sqrt();
    let arg = x - band.velocity * t;
    C64::new(amp * (-arg * arg / (4.0 * tx * tx)).exp(), 0.0)
}

/// True when the primary-pump dynamics reduce to rigid translation.
pub fn pump_is_rigid(process: &WaveguideProcess) -> bool {
    let linear = match process.kind {
        ProcessKind::SpdcDsv { .. } | ProcessKind::SpdcNdsv { .. } => true,
        ProcessKind::SfwmSpDsv { gamma_pppp } => gamma_pppp == 0.0,
        ProcessKind::SfwmSpNdsv { gamma_spm, .. } => gamma_spm == 0.0,
        _ => false,
    };
    linear
        && process.pump.gvd == 0.0
        && process.pump.attenuation == 0.0
        && matches!(process.pump_pulse, PumpPulse::Gaussian { .. })
}

/// Nonlinear phase rates: per-pump SPM rate and the pump-pump XPM rate, so
/// that d psi_k/dt |_NL = i (spm_k |psi_k|^2 + xpm |psi_other|^2) psi_k.
fn nonlinear_rates(process: &WaveguideProcess) -> (Vec<f64>, f64) {
    let p = process.pump;
    match process.kind {
        ProcessKind::SpdcDsv { .. } | ProcessKind::SpdcNdsv { .. } => (vec![0.0], 0.0),
        ProcessKind::SfwmSpDsv { gamma_pppp } => {
            (vec![gamma_pppp * HBAR * p.omega * p.velocity * p.velocity], 0.0)
        }
        ProcessKind::SfwmSpNdsv { gamma_spm, .. } => {
            (vec![gamma_spm * HBAR * p.omega * p.velocity * p.velocity], 0.0)
        }
        ProcessKind::SfwmDpDsv { gamma_spm, gamma_xpm_pumps, .. }
        | ProcessKind::SfwmDpNdsv { gamma_spm, gamma_xpm_pumps, .. } => {
            let p2 = process.pump2.expect("validated dual pump");
            let spm = vec![
                gamma_spm[0] * HBAR * p.omega * p.velocity * p.velocity,
                gamma_spm[1] * HBAR * p2.omega * p2.velocity * p2.velocity,
            ];
            let xpm = 2.0
                * gamma_xpm_pumps
                * HBAR
                * (p.omega * p2.omega).sqrt()
                * p.velocity
                * p2.velocity;
            (spm, xpm)
        }
    }
}

fn initial_envelope(pulse: &PumpPulse, band: &Band, x: &Array1<f64>, t0: f64) -> Result<Array1<C64>> {
    match pulse {
        PumpPulse::Gaussian { tau, photons } => {
            Ok(x.mapv(|xi| rigid_gaussian(band, *tau, *photons, xi, t0)))
        }
        PumpPulse::SampledInitial { x: xs, psi } => {
            if xs.len() != x.len()
                || xs.iter().zip(x.iter()).any(|(a, b)| (a - b).abs() > 1e-9 * x[x.len() - 1].abs().max(1.0))
            {
                return Err(WaveguideError::Invalid(
                    "sampled pump envelope must be given on the solver x grid".into(),
                ));
            }
            Ok(psi.clone())
        }
    }
}

fn norm_sq(psi: &[C64], dx: f64) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx
}

/// Evolve all pump mean fields of the process over `times` on the uniform
/// grid `x`, with `substeps` split-step stages per output interval.
pub fn evolve_pump_meanfield(
    process: &WaveguideProcess,
    x: &Array1<f64>,
    times: &Array1<f64>,
    substeps: usize,
) -> Result<PumpEnsemble> {
    process.validate()?;
    let nx = x.len();
    if nx < 8 {
        return Err(WaveguideError::Invalid("pump x grid too small".into()));
    }
    let dx = x[1] - x[0];
    for k in 1..nx {
        if (x[k] - x[k - 1] - dx).abs() > 1e-9 * dx {
            return Err(WaveguideError::Invalid("pump x grid must be uniform".into()));
        }
    }
    let nt = times.len();
    if nt < 2 || substeps == 0 {
        return Err(WaveguideError::Invalid("need at least two output times and one substep".into()));
    }

    let bands = process.pump_bands();
    let pulses = process.pump_pulses();
    let (spm, xpm) = nonlinear_rates(process);

    // FFT wavenumbers and machinery
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(nx);
    let ifft = planner.plan_fft_inverse(nx);
    let kappas: Vec<f64> = (0..nx)
        .map(|q| {
            let qi = if q <= nx / 2 { q as isize } else { q as isize - nx as isize };
            2.0 * std::f64::consts::PI * qi as f64 / (nx as f64 * dx)
        })
        .collect();
    let kappa_max = kappas.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));

    let mut cur: Vec<Vec<C64>> = Vec::new();
    let mut norms0 = Vec::new();
    for (p, band) in bands.iter().enumerate() {
        let psi = initial_envelope(pulses[p], band, x, times[0])?;
        norms0.push(norm_sq(psi.as_slice().unwrap(), dx));
        cur.push(psi.to_vec());
    }

    let mut fields: Vec<Array2<C64>> = bands.iter().map(|_| Array2::zeros((nt, nx))).collect();
    for (p, psi) in cur.iter().enumerate() {
        fields[p].row_mut(0).assign(&Array1::from(psi.clone()));
    }

    let mut scratch = vec![C64::new(0.0, 0.0); nx];
    for j in 1..nt {
        let dt_out = times[j] - times[j - 1];
        if !(dt_out > 0.0) {
            return Err(WaveguideError::Invalid("pump times must be strictly increasing".into()));
        }
        let dt = dt_out / substeps as f64;
        for (band, _) in bands.iter().zip(&cur) {
            // the advection phase is exact in kappa space for any step; the
            // quadratic GVD phase must stay resolved across the grid
            let curvature = 0.5 * band.gvd * kappa_max * kappa_max;
            if curvature.abs() * dt > std::f64::consts::PI {
                return Err(WaveguideError::Invalid(format!(
                    "pump step {dt:.3e} too large for the dispersion window (GVD phase at kappa_max exceeds pi)"
                )));
            }
        }
        for _ in 0..substeps {
            // half nonlinear phase
            nonlinear_half_step(&mut cur, &spm, xpm, 0.5 * dt);
            // full linear step in kappa space
            for (p, band) in bands.iter().enumerate() {
                scratch.copy_from_slice(&cur[p]);
                fft.process(&mut scratch);
                for (q, z) in scratch.iter_mut().enumerate() {
                    let phase = -band.dispersion(kappas[q]) * dt;
                    let damp = (-0.5 * band.attenuation * dt).exp();
                    *z *= C64::from_polar(damp, phase);
                }
                ifft.process(&mut scratch);
                let inv = 1.0 / nx as f64;
                for (dst, src) in cur[p].iter_mut().zip(&scratch) {
                    *dst = src * inv;
                }
            }
            nonlinear_half_step(&mut cur, &spm, xpm, 0.5 * dt);
        }
        for (p, psi) in cur.iter().enumerate() {
            fields[p].row_mut(j).assign(&Array1::from(psi.clone()));
        }
    }

    for (p, band) in bands.iter().enumerate() {
        if band.attenuation == 0.0 {
            let n1 = norm_sq(&cur[p], dx);
            if (n1 - norms0[p]).abs() > 1e-8 * norms0[p].max(1e-300) {
                return Err(WaveguideError::Numeric(format!(
                    "pump norm drifted by {:.3e} (relative)",
                    (n1 - norms0[p]).abs() / norms0[p].max(1e-300)
                )));
            }
        }
    }

    Ok(PumpEnsemble { x: x.clone(), times: times.clone(), fields })
}

fn nonlinear_half_step(cur: &mut [Vec<C64>], spm: &[f64], xpm: f64, dt: f64) {
    if spm.iter().all(|&g| g == 0.0) && xpm == 0.0 {
        return;
    }
    let intens: Vec<Vec<f64>> =
        cur.iter().map(|psi| psi.iter().map(|z| z.norm_sqr()).collect()).collect();
    for p in 0..cur.len() {
        let other = 1 - p;
        for k in 0..cur[p].len() {
            let mut rate = spm[p] * intens[p][k];
            if cur.len() == 2 {
                rate += xpm * intens[other][k];
            }
            let ph = C64::from_polar(1.0, rate * dt);
            cur[p][k] *= ph;
        }
    }
}
