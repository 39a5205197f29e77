//! Closed-form JSAs of the engineered separable configuration.
//!
//! With a Gaussian pump (duration tau) and the sinc phase matching replaced by
//! a Gaussian, exp(-s x^2) with s ~ 0.193, the no-time-ordering JSA is a 2-D
//! Gaussian characterized by widths tau_S, tau_I and a single dimensionless
//! strength xi_bar = Phi tau / (2 sqrt(2 pi tau_S tau_I)). The leading
//! time-ordering correction mixes in one extra Schmidt mode per band built
//! from the imaginary error function.

use crate::{Result, WaveguideError};
use ndarray::Array1;
use num_complex::Complex64 as C64;
use squeezelab_core::linalg::CMat;

pub use crate::process::SINC_GAUSS_S;

const SQRT_HALF_PI: f64 = 1.2533141373155003; // sqrt(pi/2)

/// Imaginary error function erfi(x) = -i erf(i x), by its everywhere-
/// convergent positive-term series.
pub fn erfi(x: f64) -> f64 {
    let two_over_sqrt_pi = 2.0 / std::f64::consts::PI.sqrt();
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= x2 / k as f64;
        let add = term / (2 * k + 1) as f64;
        sum += add;
        if add.abs() <= 1e-16 * sum.abs() || k > 400 {
            break;
        }
    }
    two_over_sqrt_pi * sum
}

/// Unit-norm Gaussian mode function of width parameter tau_j:
/// phi_0(Omega) = sqrt(tau_j / sqrt(pi/2)) exp(-Omega^2 tau_j^2).
pub fn phi0(tau_j: f64, omega: f64) -> f64 {
    (tau_j / SQRT_HALF_PI).sqrt() * (-omega * omega * tau_j * tau_j).exp()
}

/// First excited partner: phi_1 = sqrt(3) phi_0 erfi(sqrt(2/3) tau_j Omega).
pub fn phi1(tau_j: f64, omega: f64) -> f64 {
    3.0f64.sqrt() * phi0(tau_j, omega) * erfi((2.0f64 / 3.0).sqrt() * tau_j * omega)
}

/// Phase-matching inputs: either the Schmidt widths directly, or the group
/// velocities and length they derive from.
#[derive(Debug, Clone, Copy)]
pub enum PmfSpec {
    Widths { tau_s: f64, tau_i: f64 },
    Velocities { v_s: f64, v_i: f64, v_p: f64, length: f64 },
}

/// Low-gain JSA sampled on (Omega_1, Omega_2) grids.
#[derive(Debug, Clone)]
pub struct LowGainJsa {
    pub jsa: CMat,
    /// The single Schmidt value when separable.
    pub xi0: f64,
    pub tau_s: f64,
    pub tau_i: f64,
    pub separable: bool,
}

/// Walk-off width: tau_J^2 = s (1/v_J - 1/v_P)^2 L^2/4 + tau^2/2.
pub fn walkoff_width(tau: f64, v_j: f64, v_p: f64, length: f64) -> f64 {
    (SINC_GAUSS_S * (1.0 / v_j - 1.0 / v_p).powi(2) * length * length / 4.0 + 0.5 * tau * tau)
        .sqrt()
}

/// Residual Omega_1 Omega_2 cross coupling; the JSA is separable when this
/// vanishes (opposite-sign signal/idler walk-offs are required).
pub fn separability_residual(tau: f64, v_s: f64, v_i: f64, v_p: f64, length: f64) -> f64 {
    SINC_GAUSS_S * (1.0 / v_s - 1.0 / v_p) * (1.0 / v_i - 1.0 / v_p) * length * length / 4.0
        + 0.5 * tau * tau
}

/// No-time-ordering JSA J_1 on the given detuning grids.
///
/// With `require_separable` the cross term must vanish to 1e-6 of tau^2/2 and
/// the output is exactly xi_bar phi_0S phi_0I; otherwise the full Gaussian
/// (including any residual cross coupling) is sampled.
pub fn analytic_lowgain_jsa(
    tau: f64,
    pmf: &PmfSpec,
    phi: f64,
    omega_s: &Array1<f64>,
    omega_i: &Array1<f64>,
    require_separable: bool,
) -> Result<LowGainJsa> {
    if !(tau > 0.0) || phi < 0.0 {
        return Err(WaveguideError::Invalid("need tau > 0 and Phi >= 0".into()));
    }
    let (tau_s, tau_i, cross) = match *pmf {
        PmfSpec::Widths { tau_s, tau_i } => (tau_s, tau_i, 0.0),
        PmfSpec::Velocities { v_s, v_i, v_p, length } => (
            walkoff_width(tau, v_s, v_p, length),
            walkoff_width(tau, v_i, v_p, length),
            separability_residual(tau, v_s, v_i, v_p, length),
        ),
    };
    let separable = cross.abs() <= 1e-6 * (0.5 * tau * tau);
    if require_separable && !separable {
        return Err(WaveguideError::Invalid(format!(
            "JSA is not separable: residual cross coupling {cross:.6e}"
        )));
    }
    let xi0 = phi * tau / (2.0 * (2.0 * std::f64::consts::PI * tau_s * tau_i).sqrt());
    let mut jsa = CMat::zeros((omega_s.len(), omega_i.len()));
    if separable {
        for (a, &w1) in omega_s.iter().enumerate() {
            for (b, &w2) in omega_i.iter().enumerate() {
                jsa[(a, b)] = C64::new(xi0 * phi0(tau_s, w1) * phi0(tau_i, w2), 0.0);
            }
        }
    } else {
        let amp = phi * tau / (2.0 * std::f64::consts::PI);
        for (a, &w1) in omega_s.iter().enumerate() {
            for (b, &w2) in omega_i.iter().enumerate() {
                let expo = -w1 * w1 * tau_s * tau_s - w2 * w2 * tau_i * tau_i - 2.0 * w1 * w2 * cross;
                jsa[(a, b)] = C64::new(amp * expo.exp(), 0.0);
            }
        }
    }
    Ok(LowGainJsa { jsa, xi0, tau_s, tau_i, separable })
}

/// Magnus-3 corrected Schmidt data of the separable configuration.
#[derive(Debug, Clone)]
pub struct Magnus3Jsa {
    pub xi_plus: f64,
    pub xi_minus: f64,
    pub theta: f64,
    /// Schmidt functions sampled on the band grids.
    pub f0_s: Array1<C64>,
    pub f1_s: Array1<C64>,
    pub f0_i: Array1<C64>,
    pub f1_i: Array1<C64>,
}

impl Magnus3Jsa {
    pub fn schmidt_values(&self) -> [f64; 2] {
        [self.xi_plus.abs(), self.xi_minus.abs()]
    }

    pub fn pair_number(&self) -> f64 {
        self.xi_plus.sinh().powi(2) + self.xi_minus.sinh().powi(2)
    }

    pub fn schmidt_number(&self) -> f64 {
        let a = self.xi_plus.sinh().powi(2);
        let b = self.xi_minus.sinh().powi(2);
        if a + b == 0.0 {
            1.0
        } else {
            (a + b) * (a + b) / (a * a + b * b)
        }
    }
}

/// Eigenvalues of the Magnus-3 quadratic form:
/// xi_pm = (xi_bar/2) (1 +- sqrt(1 + xi_bar^2/3 + xi_bar^4/9)).
pub fn magnus3_values(xi_bar: f64) -> (f64, f64) {
    let root = (1.0 + xi_bar * xi_bar / 3.0 + xi_bar.powi(4) / 9.0).sqrt();
    (0.5 * xi_bar * (1.0 + root), 0.5 * xi_bar * (1.0 - root))
}

/// Mixing angle: tan(theta) = xi_bar^2 / (2 sqrt(3) (1 + xi_bar^2 / 6)).
pub fn magnus3_angle(xi_bar: f64) -> f64 {
    (xi_bar * xi_bar / (2.0 * 3.0f64.sqrt() * (1.0 + xi_bar * xi_bar / 6.0))).atan()
}

/// Magnus-3 Schmidt data: values, rotation angle and the rotated mode
/// functions f_0 = cos(t/2) phi_0 + i sin(t/2) phi_1,
/// f_1 = cos(t/2) phi_1 + i sin(t/2) phi_0 on each band grid.
pub fn magnus3_schmidt(
    xi_bar: f64,
    tau_s: f64,
    tau_i: f64,
    omega_s: &Array1<f64>,
    omega_i: &Array1<f64>,
) -> Result<Magnus3Jsa> {
    if xi_bar < 0.0 || !(tau_s > 0.0) || !(tau_i > 0.0) {
        return Err(WaveguideError::Invalid("need xi_bar >= 0 and positive widths".into()));
    }
    let (xi_plus, xi_minus) = magnus3_values(xi_bar);
    let theta = magnus3_angle(xi_bar);
    let (c, sn) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let build = |tau_j: f64, grid: &Array1<f64>| {
        let f0 = grid.mapv(|w| C64::new(c * phi0(tau_j, w), sn * phi1(tau_j, w)));
        let f1 = grid.mapv(|w| C64::new(c * phi1(tau_j, w), sn * phi0(tau_j, w)));
        (f0, f1)
    };
    let (f0_s, f1_s) = build(tau_s, omega_s);
    let (f0_i, f1_i) = build(tau_i, omega_i);
    Ok(Magnus3Jsa { xi_plus, xi_minus, theta, f0_s, f1_s, f0_i, f1_i })
}

/// Pair number and Schmidt number without time-ordering corrections.
pub fn magnus1_pair_number(xi_bar: f64) -> f64 {
    xi_bar.sinh().powi(2)
}
