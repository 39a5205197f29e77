//! Continuum JSA and Schmidt diagnostics of a solved run.

use crate::process::WaveguideProcess;
use crate::solve::WaveguideSolution;
use crate::{Result, WaveguideError};
use ndarray::{s, Array1};
use num_complex::Complex64 as C64;
use squeezelab_core::linalg::{takagi_autonne, CMat};
use squeezelab_core::state::nondegenerate_joint_amplitude;
use squeezelab_core::stats::schmidt_statistics;

#[derive(Debug, Clone)]
pub struct JsaDiagnostics {
    /// Signal detunings Omega_1 = v_S kappa.
    pub omega_s: Array1<f64>,
    /// Idler detunings Omega_2 = v_I kappa (signal again for DSV).
    pub omega_i: Array1<f64>,
    /// Continuum JSA over (Omega_1, Omega_2).
    pub jsa: CMat,
    /// Schmidt values, descending.
    pub xi: Vec<f64>,
    /// Sum of sinh^2 xi_lambda.
    pub n_pairs: f64,
    /// None when the state is vacuum.
    pub schmidt_number: Option<f64>,
}

/// Extract the continuum JSA, Schmidt spectrum, pair number and Schmidt
/// number from a solution. The moment blocks are converted with the
/// discrete-to-continuum scaling M/dk and the Omega axes carry the band group
/// velocities, so the L2 structure (and hence the xi's) is grid independent.
pub fn jsa_diagnostics(
    sol: &WaveguideSolution,
    process: &WaveguideProcess,
) -> Result<JsaDiagnostics> {
    let n = sol.band_modes();
    if sol.state.modes() != sol.bands * n {
        return Err(WaveguideError::Invalid("solution state does not match its grid".into()));
    }
    let (sig, idl) = process.quantum_bands();
    let kappas = sol.grid.points();
    let dk = sol.grid.spacing;

    let (omega_s, omega_i, xi, jsa_disc) = if sol.bands == 2 {
        let idler = idl.ok_or_else(|| {
            WaveguideError::Invalid("two-band solution but the process has no idler".into())
        })?;
        let m_bc = sol.state.m.slice(s![..n, n..]).to_owned();
        let sd = nondegenerate_joint_amplitude(&m_bc)?;
        (
            kappas.mapv(|k| sig.velocity * k),
            kappas.mapv(|k| idler.velocity * k),
            sd.r.clone(),
            sd.j.mapv(|z| z / C64::new(dk * (sig.velocity * idler.velocity).sqrt(), 0.0)),
        )
    } else {
        let tak = takagi_autonne(&sol.state.m, 1e-10)?;
        let r: Vec<f64> = tak.values.iter().map(|&sv| 0.5 * (2.0 * sv).asinh()).collect();
        let mut j = CMat::zeros((n, n));
        for lam in 0..n {
            let rl = C64::new(r[lam], 0.0);
            for a in 0..n {
                for b in 0..n {
                    j[(a, b)] += tak.f[(a, lam)] * rl * tak.f[(b, lam)];
                }
            }
        }
        let om = kappas.mapv(|k| sig.velocity * k);
        (om.clone(), om, r, j.mapv(|z| z / C64::new(dk * sig.velocity, 0.0)))
    };

    let stats = schmidt_statistics(&xi)?;
    let n_pairs = stats.total_mean;
    let schmidt_number = if stats.vacuum { None } else { Some(stats.schmidt_number) };
    Ok(JsaDiagnostics { omega_s, omega_i, jsa: jsa_disc, xi, n_pairs, schmidt_number })
}
