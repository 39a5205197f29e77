//! Kappa-space generator blocks Delta_J(t), zeta(t).
//!
//! With a_j = sqrt(dk) b(kappa_j) and [a_j, a_j'^dag] = delta_jj', the
//! discretized coefficients are
//! ```text
//!     Delta_{J;jj'} = -omega_J(kappa_j) delta_jj' + 2 (dk/sqrt(2 pi)) M_J(kappa_j - kappa_j', t)
//!     zeta_{jj'}    = (dk/sqrt(2 pi)) S(kappa_j + kappa_j', t)
//! ```
//! where S and M_J are the spatial Fourier transforms of the pump-driven
//! couplings, weighted by the longitudinal nonlinearity profile and taken
//! over the interaction region only. Everything is
//! expressed in the frame comoving with the primary pump (v_P kappa subtracted
//! from each band dispersion), which cancels the fast carrier of a
//! non-dispersing pump and leaves a well-conditioned generator.

use crate::process::{geometric_quartic, Band, ProcessKind, WaveguideProcess};
use crate::{grid::KappaGrid, Result, WaveguideError};
use ndarray::{s, Array1};
use num_complex::Complex64 as C64;
use squeezelab_core::linalg::CMat;
use squeezelab_core::stats::HBAR;

/// Pump envelopes inside the nonlinear region at one instant, lab frame.
/// The x grid must be uniform with the endpoints on +-L/2.
#[derive(Debug, Clone)]
pub struct PumpSlice {
    pub x: Array1<f64>,
    pub psi: Vec<Array1<C64>>,
}

/// Generator blocks of one instant: Delta per quantum band plus the joint zeta.
#[derive(Debug, Clone)]
pub struct KappaGenerator {
    /// One Hermitian block per quantum band (one for DSV, two for NDSV).
    pub delta: Vec<CMat>,
    /// Symmetric squeezing block.
    pub zeta: CMat,
}

impl KappaGenerator {
    /// Repackage into the core solver convention da/dt = -i Delta a + zeta a^dag:
    /// Delta_core = -blkdiag(Delta_S, Delta_I), zeta_core = i [[0, z], [z^T, 0]]
    /// (NDSV), or Delta_core = -Delta, zeta_core = i zeta (DSV).
    pub fn to_core_blocks(&self) -> (CMat, CMat) {
        let i = C64::new(0.0, 1.0);
        match self.delta.len() {
            1 => (self.delta[0].mapv(|x| -x), self.zeta.mapv(|x| x * i)),
            2 => {
                let n = self.delta[0].nrows();
                let mut d = CMat::zeros((2 * n, 2 * n));
                d.slice_mut(s![..n, ..n]).assign(&self.delta[0].mapv(|x| -x));
                d.slice_mut(s![n.., n..]).assign(&self.delta[1].mapv(|x| -x));
                let mut z = CMat::zeros((2 * n, 2 * n));
                z.slice_mut(s![..n, n..]).assign(&self.zeta.mapv(|x| x * i));
                z.slice_mut(s![n.., ..n]).assign(&self.zeta.t().mapv(|x| x * i));
                (d, z)
            }
            _ => unreachable!("one or two quantum bands"),
        }
    }
}

/// Coupling strengths multiplying the pump products, per kind:
/// S~(x) = s_rate * (pump product), M~_J(x) = m_rate_J * |pump|^2 terms.
struct Rates {
    s_rate: f64,
    /// XPM rates of each quantum band against each pump present.
    m_rates: Vec<Vec<f64>>,
}

fn rates(process: &WaveguideProcess) -> Rates {
    let p = process.pump;
    let s = process.signal;
    match process.kind {
        ProcessKind::SpdcDsv { zeta } | ProcessKind::SpdcNdsv { zeta } => Rates {
            s_rate: zeta / HBAR,
            m_rates: match process.idler {
                Some(_) => vec![vec![0.0], vec![0.0]],
                None => vec![vec![0.0]],
            },
        },
        ProcessKind::SfwmSpDsv { gamma_pppp } => {
            let c = gamma_pppp * HBAR * p.omega * p.velocity * p.velocity;
            Rates { s_rate: c, m_rates: vec![vec![c]] }
        }
        ProcessKind::SfwmSpNdsv { gamma_gen, gamma_xpm_s, gamma_xpm_i, .. } => {
            let i = process.idler.expect("validated idler");
            let ob = geometric_quartic([s.omega, i.omega, p.omega, p.omega]);
            let vb = geometric_quartic([s.velocity, i.velocity, p.velocity, p.velocity]);
            Rates {
                s_rate: gamma_gen * HBAR * ob * vb * vb,
                m_rates: vec![
                    vec![gamma_xpm_s * HBAR * (p.omega * s.omega).sqrt() * p.velocity * s.velocity],
                    vec![gamma_xpm_i * HBAR * (p.omega * i.omega).sqrt() * p.velocity * i.velocity],
                ],
            }
        }
        ProcessKind::SfwmDpDsv { gamma_gen, gamma_xpm_s, .. } => {
            let p2 = process.pump2.expect("validated dual pump");
            let ob = geometric_quartic([s.omega, s.omega, p.omega, p2.omega]);
            let vb = geometric_quartic([s.velocity, s.velocity, p.velocity, p2.velocity]);
            Rates {
                s_rate: 2.0 * gamma_gen * HBAR * ob * vb * vb,
                m_rates: vec![vec![
                    gamma_xpm_s[0] * HBAR * (p.omega * s.omega).sqrt() * p.velocity * s.velocity,
                    gamma_xpm_s[1] * HBAR * (p2.omega * s.omega).sqrt() * p2.velocity * s.velocity,
                ]],
            }
        }
        ProcessKind::SfwmDpNdsv { gamma_gen, gamma_xpm_s, gamma_xpm_i, .. } => {
            let p2 = process.pump2.expect("validated dual pump");
            let i = process.idler.expect("validated idler");
            let ob = geometric_quartic([s.omega, i.omega, p.omega, p2.omega]);
            let vb = geometric_quartic([s.velocity, i.velocity, p.velocity, p2.velocity]);
            Rates {
                s_rate: 2.0 * gamma_gen * HBAR * ob * vb * vb,
                m_rates: vec![
                    vec![
                        gamma_xpm_s[0] * HBAR * (p.omega * s.omega).sqrt() * p.velocity * s.velocity,
                        gamma_xpm_s[1] * HBAR * (p2.omega * s.omega).sqrt() * p2.velocity * s.velocity,
                    ],
                    vec![
                        gamma_xpm_i[0] * HBAR * (p.omega * i.omega).sqrt() * p.velocity * i.velocity,
                        gamma_xpm_i[1] * HBAR * (p2.omega * i.omega).sqrt() * p2.velocity * i.velocity,
                    ],
                ],
            }
        }
    }
}

/// Trapezoid Fourier sums of a sampled profile f(x) over [-L/2, L/2]:
/// out[m + 2n] = (dx / sqrt(2 pi)) * sum_k w_k exp(-i m dk x_k) f(x_k),
/// for m in [-2n, 2n].
fn window_transform(x: &Array1<f64>, f: &[C64], dk: f64, half: usize) -> Vec<C64> {
    let nx = x.len();
    let dx = x[1] - x[0];
    let norm = dx / (2.0 * std::f64::consts::PI).sqrt();
    let m_half = 2 * half;
    let mut out = vec![C64::new(0.0, 0.0); 2 * m_half + 1];
    // phase recursion over m for each sample
    for k in 0..nx {
        let w = if k == 0 || k == nx - 1 { 0.5 } else { 1.0 };
        let base = f[k] * (w * norm);
        let step = C64::from_polar(1.0, -dk * x[k]);
        let mut ph = C64::new(1.0, 0.0);
        out[m_half] += base;
        for m in 1..=m_half {
            ph *= step;
            out[m_half + m] += base * ph;
            out[m_half - m] += base * ph.conj();
        }
    }
    out
}

/// Build the generator blocks at lab time `t` from the pump envelopes inside
/// the nonlinear region.
pub fn build_kappa_generator(
    process: &WaveguideProcess,
    slice: &PumpSlice,
    grid: &KappaGrid,
    t: f64,
) -> Result<KappaGenerator> {
    process.validate()?;
    let nx = slice.x.len();
    if nx < 8 {
        return Err(WaveguideError::Invalid("pump slice too small".into()));
    }
    let half_l = process.interaction_half_width();
    if (slice.x[0] + half_l).abs() > 1e-9 * half_l || (slice.x[nx - 1] - half_l).abs() > 1e-9 * half_l
    {
        return Err(WaveguideError::Invalid(
            "pump slice must span exactly the interaction region".into(),
        ));
    }
    if slice.psi.len() != process.pump_bands().len()
        || slice.psi.iter().any(|p| p.len() != nx)
    {
        return Err(WaveguideError::Invalid("pump slice does not match the process pumps".into()));
    }

    let r = rates(process);
    let dk = grid.spacing;
    let n = grid.len();
    let half = grid.half_points;
    let m_half = 2 * half;
    let v_ref = process.pump.velocity;
    let kappas = grid.points();

    let weight: Vec<f64> = slice.x.iter().map(|&xi| process.poling_weight(xi)).collect();

    // squeezing profile: pump product times the generation rate and the local
    // nonlinearity weight. SPDC is linear in the pump envelope, SFWM
    // quadratic (psi^2 or psi_1 psi_2).
    let s_profile: Vec<C64> = match process.kind {
        ProcessKind::SpdcDsv { .. } | ProcessKind::SpdcNdsv { .. } => {
            slice.psi[0].iter().zip(&weight).map(|(&z, &g)| z * (r.s_rate * g)).collect()
        }
        ProcessKind::SfwmSpDsv { .. } | ProcessKind::SfwmSpNdsv { .. } => {
            slice.psi[0].iter().zip(&weight).map(|(&z, &g)| z * z * (r.s_rate * g)).collect()
        }
        ProcessKind::SfwmDpDsv { .. } | ProcessKind::SfwmDpNdsv { .. } => slice.psi[0]
            .iter()
            .zip(slice.psi[1].iter())
            .zip(&weight)
            .map(|((&a, &b), &g)| a * b * (r.s_rate * g))
            .collect(),
    };
    let s_vals = window_transform(&slice.x, &s_profile, dk, half);

    // weighted intensity profiles for XPM, one per pump
    let intens: Vec<Vec<C64>> = slice
        .psi
        .iter()
        .map(|p| {
            p.iter().zip(&weight).map(|(z, &g)| C64::new(z.norm_sqr() * g, 0.0)).collect()
        })
        .collect();
    let intens_vals: Vec<Vec<C64>> =
        intens.iter().map(|f| window_transform(&slice.x, f, dk, half)).collect();

    let (sig, idl) = process.quantum_bands();
    let bands: Vec<Band> = match idl {
        Some(i) => vec![sig, i],
        None => vec![sig],
    };

    let scale = dk / (2.0 * std::f64::consts::PI).sqrt();
    let mut zeta = CMat::zeros((n, n));
    for j in 0..n {
        for jp in j..n {
            // m index of kappa_j + kappa_j'
            let m = (j + jp) as isize - 2 * half as isize;
            let mut val = s_vals[(m + m_half as isize) as usize] * scale;
            // comoving-frame carrier: zeta picks up exp(i v_ref (k_j + k_j') t)
            val *= C64::from_polar(1.0, v_ref * m as f64 * dk * t);
            zeta[(j, jp)] = val;
            zeta[(jp, j)] = val;
        }
    }

    let mut delta = Vec::with_capacity(bands.len());
    for (b_idx, band) in bands.iter().enumerate() {
        let mut d = CMat::zeros((n, n));
        for j in 0..n {
            // comoving dispersion: omega_J(kappa) - v_ref kappa
            let k = kappas[j];
            d[(j, j)] = C64::new(-(band.dispersion(k) - v_ref * k), 0.0);
        }
        for (p_idx, vals) in intens_vals.iter().enumerate() {
            let rate = r.m_rates[b_idx][p_idx];
            if rate == 0.0 {
                continue;
            }
            for j in 0..n {
                for jp in 0..n {
                    let m = j as isize - jp as isize;
                    let mut val = vals[(m + m_half as isize) as usize] * (2.0 * scale * rate);
                    val *= C64::from_polar(1.0, v_ref * m as f64 * dk * t);
                    d[(j, jp)] += val;
                }
            }
        }
        // enforce exact Hermiticity against fp drift in the phase recursion
        let dh = (&d + &d.t().mapv(|x: C64| x.conj())) / C64::new(2.0, 0.0);
        delta.push(dh);
    }

    Ok(KappaGenerator { delta, zeta })
}
