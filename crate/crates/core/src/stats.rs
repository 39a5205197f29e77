//! Measurable numbers from Gaussian states: photon-number moments, coherence
//! functions, Klyshko-style absolute efficiency, homodyne variance, and the
//! classical-correspondence vacuum powers.
//!
//! All fourth-order expectation values come from the Gaussian factorization
//! ```text
//!     <a_i^dag a_j^dag a_j a_i> = N_ii N_jj + |N_ij|^2 + |M_ij|^2,
//! ```
//! so the coherence functions remain meaningful after arbitrary loss, not just
//! on pure states.

use crate::linalg::{CVec, LinalgError};
use crate::state::GaussianState;
use ndarray::Array2;
use num_complex::Complex64 as C64;

pub const HBAR: f64 = 1.054571817e-34;

#[derive(Debug, Clone)]
pub struct PhotonMoments {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    pub covariance: Array2<f64>,
    pub total_mean: f64,
    pub total_variance: f64,
}

/// Per-mode and total photon-number moments of a zero-mean Gaussian state.
pub fn photon_number_moments(state: &GaussianState) -> Result<PhotonMoments, LinalgError> {
    let beta_norm: f64 = state.beta.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if beta_norm > 1e-12 {
        return Err(LinalgError::Precondition(format!(
            "photon_number_moments: displaced state (|beta| = {beta_norm:.3e}), zero-mean formulas do not apply"
        )));
    }
    let l = state.modes();
    let mean: Vec<f64> = (0..l).map(|i| state.n[(i, i)].re).collect();
    let variance: Vec<f64> = (0..l)
        .map(|i| state.m[(i, i)].norm_sqr() + mean[i] * (mean[i] + 1.0))
        .collect();
    let mut covariance = Array2::<f64>::zeros((l, l));
    for i in 0..l {
        for j in 0..l {
            covariance[(i, j)] = if i == j {
                variance[i]
            } else {
                state.m[(i, j)].norm_sqr() + state.n[(i, j)].norm_sqr()
            };
        }
    }
    let total_mean = mean.iter().sum();
    let total_variance = covariance.sum();
    Ok(PhotonMoments { mean, variance, covariance, total_mean, total_variance })
}

#[derive(Debug, Clone, Copy)]
pub struct SchmidtStats {
    pub total_mean: f64,
    pub total_variance: f64,
    pub schmidt_number: f64,
    /// True when every r is zero; schmidt_number is reported as 1 then.
    pub vacuum: bool,
}

/// Aggregate statistics of a set of uncorrelated Schmidt modes with squeezing
/// parameters r: <N> = sum sinh^2 r, Var = sum 2 n (1 + n),
/// K = (sum n)^2 / sum n^2.
pub fn schmidt_statistics(r: &[f64]) -> Result<SchmidtStats, LinalgError> {
    if r.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(LinalgError::Precondition("schmidt_statistics: r must be finite and >= 0".into()));
    }
    let n: Vec<f64> = r.iter().map(|&x| x.sinh().powi(2)).collect();
    let total_mean: f64 = n.iter().sum();
    let total_variance: f64 = n.iter().map(|&x| 2.0 * x * (1.0 + x)).sum();
    let sum_sq: f64 = n.iter().map(|&x| x * x).sum();
    let vacuum = sum_sq == 0.0;
    let schmidt_number = if vacuum { 1.0 } else { total_mean * total_mean / sum_sq };
    Ok(SchmidtStats { total_mean, total_variance, schmidt_number, vacuum })
}

#[derive(Debug, Clone, Copy)]
pub struct CoherenceReport {
    pub mean_b: f64,
    pub mean_c: f64,
    pub g2_b: f64,
    pub g2_c: f64,
    pub g11: f64,
    pub eta_b: f64,
    pub eta_c: f64,
}

fn fourth_moment(state: &GaussianState, i: usize, j: usize) -> f64 {
    state.n[(i, i)].re * state.n[(j, j)].re
        + state.n[(i, j)].norm_sqr()
        + state.m[(i, j)].norm_sqr()
}

/// Auto- and cross-coherence of a twin-beam state split into a signal
/// partition `b` and an idler partition `c` (lists of mode indices).
///
/// The state must have twin-beam structure: no phase-sensitive moments inside
/// either partition and no phase-insensitive correlations across them. The
/// absolute efficiencies use the measured mean and the g11 - g2 combination,
/// which equals 1/<N> of the lossless source.
pub fn coherence_functions(
    state: &GaussianState,
    b: &[usize],
    c: &[usize],
) -> Result<CoherenceReport, LinalgError> {
    let l = state.modes();
    if b.is_empty() || c.is_empty() || b.iter().chain(c).any(|&i| i >= l) {
        return Err(LinalgError::Dimension("coherence_functions: bad partition indices".into()));
    }
    if b.iter().any(|i| c.contains(i)) {
        return Err(LinalgError::Precondition("coherence_functions: overlapping partitions".into()));
    }
    let scale_n = state.n.iter().map(|x| x.norm()).fold(0.0f64, f64::max).max(1e-300);
    let scale_m = state.m.iter().map(|x| x.norm()).fold(0.0f64, f64::max).max(1e-300);
    let mut degenerate = 0.0f64;
    for part in [b, c] {
        for &i in part {
            for &j in part {
                degenerate = degenerate.max(state.m[(i, j)].norm() / scale_m);
            }
        }
    }
    for &i in b {
        for &j in c {
            degenerate = degenerate.max(state.n[(i, j)].norm() / scale_n);
        }
    }
    if degenerate > 1e-8 {
        return Err(LinalgError::Precondition(format!(
            "coherence_functions: state lacks twin-beam structure (relative residual {degenerate:.3e})"
        )));
    }

    let mean_of = |part: &[usize]| -> f64 { part.iter().map(|&i| state.n[(i, i)].re).sum() };
    let mean_b = mean_of(b);
    let mean_c = mean_of(c);
    if mean_b <= 0.0 || mean_c <= 0.0 {
        return Err(LinalgError::Precondition(
            "coherence_functions: a partition has zero mean photon number".into(),
        ));
    }
    let auto = |part: &[usize]| -> f64 {
        let mut s = 0.0;
        for &i in part {
            for &j in part {
                s += fourth_moment(state, i, j);
            }
        }
        s
    };
    let g2_b = auto(b) / (mean_b * mean_b);
    let g2_c = auto(c) / (mean_c * mean_c);
    let mut cross = 0.0;
    for &i in b {
        for &j in c {
            cross += fourth_moment(state, i, j);
        }
    }
    let g11 = cross / (mean_b * mean_c);
    let eta_b = mean_b * (g11 - g2_c);
    let eta_c = mean_c * (g11 - g2_b);
    Ok(CoherenceReport { mean_b, mean_c, g2_b, g2_c, g11, eta_b, eta_c })
}

#[derive(Debug, Clone, Copy)]
pub struct LossInvarianceReport {
    pub g2_b_shift: f64,
    pub g2_c_shift: f64,
    pub g11_shift: f64,
    pub pass: bool,
}

/// Check that g2 and g11 are unchanged by uniform per-beam loss (eta_b on the
/// signal partition, eta_c on the idler partition).
pub fn loss_invariance_check(
    state: &GaussianState,
    b: &[usize],
    c: &[usize],
    eta_b: f64,
    eta_c: f64,
) -> Result<LossInvarianceReport, LinalgError> {
    if !(0.0 < eta_b && eta_b <= 1.0 && 0.0 < eta_c && eta_c <= 1.0) {
        return Err(LinalgError::Precondition("loss_invariance_check: eta out of (0,1]".into()));
    }
    let before = coherence_functions(state, b, c)?;
    let l = state.modes();
    let mut l_mat = crate::linalg::CMat::zeros((l, l));
    for &i in b {
        l_mat[(i, i)] = C64::new(eta_b.sqrt(), 0.0);
    }
    for &i in c {
        l_mat[(i, i)] = C64::new(eta_c.sqrt(), 0.0);
    }
    for i in 0..l {
        if l_mat[(i, i)] == C64::new(0.0, 0.0) {
            l_mat[(i, i)] = C64::new(1.0, 0.0);
        }
    }
    let lossy = crate::state::apply_loss(state, &l_mat)?;
    let after = coherence_functions(&lossy, b, c)?;
    let g2_b_shift = (after.g2_b - before.g2_b).abs();
    let g2_c_shift = (after.g2_c - before.g2_c).abs();
    let g11_shift = (after.g11 - before.g11).abs();
    let pass = g2_b_shift <= 1e-10 && g2_c_shift <= 1e-10 && g11_shift <= 1e-10;
    Ok(LossInvarianceReport { g2_b_shift, g2_c_shift, g11_shift, pass })
}

#[derive(Debug, Clone, Copy)]
pub struct HomodyneVariance {
    /// Variance at the requested LO phase, vacuum = 1.
    pub at_phi: f64,
    pub min: f64,
    pub max: f64,
    /// Phase at which the minimum is attained.
    pub phi_min: f64,
}

/// Quadrature variance seen by a homodyne detector with unit-norm local
/// oscillator shape alpha and phase phi:
/// V = 1 + 2 a^T N a* + (e^{2 i phi} a^dag M a* + c.c.), extrema in closed form.
pub fn homodyne_variance(
    state: &GaussianState,
    alpha: &CVec,
    phi: f64,
) -> Result<HomodyneVariance, LinalgError> {
    let l = state.modes();
    if alpha.len() != l {
        return Err(LinalgError::Dimension(format!(
            "homodyne_variance: LO length {} vs {} modes",
            alpha.len(),
            l
        )));
    }
    let norm: f64 = alpha.iter().map(|x| x.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(LinalgError::Precondition(format!(
            "homodyne_variance: LO norm^2 = {norm:.12}, expected 1"
        )));
    }
    let mut n_term = C64::new(0.0, 0.0);
    let mut m_term = C64::new(0.0, 0.0);
    for i in 0..l {
        for j in 0..l {
            n_term += alpha[i] * state.n[(i, j)] * alpha[j].conj();
            m_term += alpha[i].conj() * state.m[(i, j)] * alpha[j].conj();
        }
    }
    let base = 1.0 + 2.0 * n_term.re;
    let amp = 2.0 * m_term.norm();
    let at_phi = base + (C64::new(0.0, 2.0 * phi).exp() * m_term).re * 2.0;
    // minimum where e^{2 i phi} m_term = -|m_term|
    let phi_min = if amp > 0.0 { (std::f64::consts::PI - m_term.arg()) / 2.0 } else { 0.0 };
    Ok(HomodyneVariance { at_phi, min: base - amp, max: base + amp, phi_min })
}

#[derive(Debug, Clone, Copy)]
pub enum VacuumGeometry {
    /// Dispersion-limited waveguide: pump frequency (rad/s), group velocity
    /// dispersion at the half-pump frequency (s^2/m), length (m).
    Waveguide { omega_p: f64, beta2: f64, length: f64 },
    /// Ring resonator: resonance frequency (rad/s) and loaded quality factor.
    Ring { omega_f: f64, q_f: f64 },
}

/// Power scale at which a classical seed would reproduce the spontaneous
/// (vacuum-stimulated) pair rate.
pub fn vacuum_power(geometry: VacuumGeometry) -> Result<f64, LinalgError> {
    match geometry {
        VacuumGeometry::Waveguide { omega_p, beta2, length } => {
            if omega_p <= 0.0 || beta2 == 0.0 || length <= 0.0 {
                return Err(LinalgError::Precondition(
                    "vacuum_power: waveguide needs omega_p > 0, beta2 != 0, length > 0".into(),
                ));
            }
            Ok(HBAR * omega_p / (3.0 * (2.0 * std::f64::consts::PI * beta2.abs() * length).sqrt()))
        }
        VacuumGeometry::Ring { omega_f, q_f } => {
            if omega_f <= 0.0 || q_f <= 0.0 {
                return Err(LinalgError::Precondition(
                    "vacuum_power: ring needs omega_f > 0, q_f > 0".into(),
                ));
            }
            Ok(HBAR * omega_f * omega_f / (8.0 * q_f))
        }
    }
}
