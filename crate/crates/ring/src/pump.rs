//! Classical intracavity pump amplitudes: transient RK4 solutions and CW
//! steady states of the undepleted-pump equations (back-action of the
//! generated light on the pumps is not modeled).

use crate::model::{RingModel, RingScheme};
use crate::{Result, RingError};
use ndarray::Array1;
use num_complex::Complex64 as C64;

/// Bus-channel drive field at the coupling point.
#[derive(Debug, Clone, Copy)]
pub enum RingDrive {
    Off,
    Cw(C64),
    Gaussian { amplitude: C64, center: f64, width: f64 },
}

impl RingDrive {
    pub fn value(&self, t: f64) -> C64 {
        match self {
            RingDrive::Off => C64::new(0.0, 0.0),
            RingDrive::Cw(a) => *a,
            RingDrive::Gaussian { amplitude, center, width } => {
                let u = (t - center) / width;
                amplitude * (-0.5 * u * u).exp()
            }
        }
    }
}

/// Right-hand sides of the pump equations for every scheme; `b` holds one or
/// two amplitudes.
fn pump_rhs(model: &RingModel, drives: &[RingDrive], t: f64, b: &[C64]) -> Vec<C64> {
    let pumps = model.pumps();
    let dets = model.pump_detunings();
    let mut out = Vec::with_capacity(b.len());
    for (k, res) in pumps.iter().enumerate() {
        let gamma_amp = res.coupling_amplitude();
        let mut rate = C64::new(-res.gamma_bar(), -dets[k]);
        match model.scheme {
            RingScheme::SpSfwm => {
                rate += C64::new(0.0, 2.0 * model.eta_spm * b[0].norm_sqr());
            }
            RingScheme::DpSfwm => {
                let other = b[1 - k].norm_sqr();
                rate += C64::new(
                    0.0,
                    2.0 * model.eta_spm * b[k].norm_sqr() + model.zeta_xpm * other,
                );
            }
            // the down-conversion pump is linear at this order
            RingScheme::Spdc | RingScheme::SpdcDegenerate => {}
        }
        out.push(rate * b[k] - C64::new(0.0, gamma_amp) * drives[k].value(t));
    }
    out
}

/// RK4 integration of the pump amplitudes over `times` from `initial`.
pub fn pump_cavity_dynamics(
    model: &RingModel,
    drives: &[RingDrive],
    initial: &[C64],
    times: &Array1<f64>,
) -> Result<Vec<Array1<C64>>> {
    model.validate()?;
    let np = model.scheme.pump_count();
    if drives.len() != np || initial.len() != np {
        return Err(RingError::Invalid(format!(
            "scheme needs {np} drive(s) and initial value(s)"
        )));
    }
    let nt = times.len();
    if nt < 2 {
        return Err(RingError::Invalid("need at least two output times".into()));
    }
    let rate_scale = model
        .pumps()
        .iter()
        .zip(model.pump_detunings())
        .map(|(r, d)| r.gamma_bar() + d.abs())
        .fold(0.0f64, f64::max);

    let mut fields: Vec<Array1<C64>> = (0..np).map(|_| Array1::zeros(nt)).collect();
    let mut b: Vec<C64> = initial.to_vec();
    for (k, field) in fields.iter_mut().enumerate() {
        field[0] = b[k];
    }
    for j in 1..nt {
        let dt = times[j] - times[j - 1];
        if !(dt > 0.0) {
            return Err(RingError::Invalid("pump times must be strictly increasing".into()));
        }
        if rate_scale * dt > 1.0 {
            return Err(RingError::Numeric(format!(
                "pump step {dt:.3e} too large for linewidth/detuning {rate_scale:.3e}"
            )));
        }
        let t = times[j - 1];
        let k1 = pump_rhs(model, drives, t, &b);
        let b2: Vec<C64> = b.iter().zip(&k1).map(|(x, k)| x + k * (0.5 * dt)).collect();
        let k2 = pump_rhs(model, drives, t + 0.5 * dt, &b2);
        let b3: Vec<C64> = b.iter().zip(&k2).map(|(x, k)| x + k * (0.5 * dt)).collect();
        let k3 = pump_rhs(model, drives, t + 0.5 * dt, &b3);
        let b4: Vec<C64> = b.iter().zip(&k3).map(|(x, k)| x + k * dt).collect();
        let k4 = pump_rhs(model, drives, t + dt, &b4);
        for k in 0..np {
            b[k] += (k1[k] + k2[k] * 2.0 + k3[k] * 2.0 + k4[k]) * (dt / 6.0);
            fields[k][j] = b[k];
        }
    }
    Ok(fields)
}

/// Real roots of a x^3 + b x^2 + c x + d = 0 by the trigonometric method.
fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    if a.abs() < 1e-300 {
        if b.abs() < 1e-300 {
            return if c.abs() < 1e-300 { vec![] } else { vec![-d / c] };
        }
        let disc = c * c - 4.0 * b * d;
        return if disc < 0.0 {
            vec![]
        } else {
            vec![(-c + disc.sqrt()) / (2.0 * b), (-c - disc.sqrt()) / (2.0 * b)]
        };
    }
    let (b, c, d) = (b / a, c / a, d / a);
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    if disc > 0.0 {
        let s = (-q / 2.0 + disc.sqrt()).cbrt();
        let t = (-q / 2.0 - disc.sqrt()).cbrt();
        vec![shift + s + t]
    } else {
        let r = (-p * p * p / 27.0).sqrt();
        let phi = (-q / (2.0 * r)).clamp(-1.0, 1.0).acos();
        let m = 2.0 * (-p / 3.0).sqrt();
        (0..3).map(|k| shift + m * ((phi + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos()).collect()
    }
}

fn sp_residual(gamma_bar: f64, delta: f64, eta2: f64, drive: C64, beta: C64) -> f64 {
    (C64::new(gamma_bar, delta - eta2 * beta.norm_sqr()) * beta + C64::new(0.0, 1.0) * drive).norm()
}

/// Steady states of a single pump with SPM; all real branches of the cubic
/// intensity equation, polished by damped fixed-point iteration (Newton on
/// the intensity for the branches the fixed point cannot hold).
fn single_pump_branches(
    gamma_bar: f64,
    delta: f64,
    eta2: f64,
    drive: C64,
) -> Result<Vec<C64>> {
    let f = drive.norm_sqr();
    let scale = f.sqrt().max(1e-300);
    if f == 0.0 {
        return Ok(vec![C64::new(0.0, 0.0)]);
    }
    // I (gb^2 + (delta - eta2 I)^2) = F
    let mut roots = cubic_real_roots(
        eta2 * eta2,
        -2.0 * eta2 * delta,
        gamma_bar * gamma_bar + delta * delta,
        -f,
    );
    roots.retain(|&i| i > 0.0);
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (*a + *b).abs());
    let mut out = Vec::new();
    for &root in &roots {
        // damped fixed-point beta <- (1-w) beta + w map(beta)
        let beta_of = |i: f64| -C64::new(0.0, 1.0) * drive / C64::new(gamma_bar, delta - eta2 * i);
        let mut beta = beta_of(root);
        let mut converged = false;
        for _ in 0..500 {
            let next = beta_of(beta.norm_sqr());
            beta = beta * 0.5 + next * 0.5;
            if sp_residual(gamma_bar, delta, eta2, drive, beta) <= 1e-12 * scale {
                converged = true;
                break;
            }
        }
        if !converged {
            // unstable middle branch: Newton on the intensity instead
            let mut i = root;
            for _ in 0..200 {
                let u = delta - eta2 * i;
                let g = i * (gamma_bar * gamma_bar + u * u) - f;
                let dg = gamma_bar * gamma_bar + u * u - 2.0 * eta2 * i * u;
                if dg.abs() < 1e-300 {
                    break;
                }
                i -= g / dg;
            }
            beta = beta_of(i);
            if sp_residual(gamma_bar, delta, eta2, drive, beta) > 1e-12 * scale {
                return Err(RingError::Numeric(format!(
                    "steady-state branch at intensity {root:.6e} did not converge; \
                     branches found: {:?}",
                    out
                )));
            }
        }
        out.push(beta);
    }
    Ok(out)
}

/// CW steady states of the pump equations. Each branch lists one amplitude
/// per pump; in the bistable region of a single pump with SPM all coexisting
/// branches are returned, sorted by intensity.
pub fn cw_steady_state(model: &RingModel, drives: &[C64]) -> Result<Vec<Vec<C64>>> {
    model.validate()?;
    let np = model.scheme.pump_count();
    if drives.len() != np {
        return Err(RingError::Invalid(format!("scheme needs {np} drive amplitude(s)")));
    }
    let pumps = model.pumps();
    let dets = model.pump_detunings();
    match model.scheme {
        RingScheme::Spdc | RingScheme::SpdcDegenerate => {
            let d = C64::new(0.0, pumps[0].coupling_amplitude()) * drives[0];
            Ok(vec![vec![-d / C64::new(pumps[0].gamma_bar(), dets[0])]])
        }
        RingScheme::SpSfwm => {
            let drive = C64::new(pumps[0].coupling_amplitude(), 0.0) * drives[0];
            let branches =
                single_pump_branches(pumps[0].gamma_bar(), dets[0], 2.0 * model.eta_spm, drive)?;
            Ok(branches.into_iter().map(|b| vec![b]).collect())
        }
        RingScheme::DpSfwm => {
            // damped fixed point on the coupled pair from the linear seed
            let g: Vec<C64> = (0..2)
                .map(|k| C64::new(pumps[k].coupling_amplitude(), 0.0) * drives[k])
                .collect();
            let beta_of = |k: usize, i_self: f64, i_other: f64| {
                -C64::new(0.0, 1.0) * g[k]
                    / C64::new(
                        pumps[k].gamma_bar(),
                        dets[k] - 2.0 * model.eta_spm * i_self - model.zeta_xpm * i_other,
                    )
            };
            let mut b = [beta_of(0, 0.0, 0.0), beta_of(1, 0.0, 0.0)];
            let scale = g[0].norm().max(g[1].norm()).max(1e-300);
            for _ in 0..2000 {
                let i0 = b[0].norm_sqr();
                let i1 = b[1].norm_sqr();
                let next = [beta_of(0, i0, i1), beta_of(1, i1, i0)];
                b = [b[0] * 0.5 + next[0] * 0.5, b[1] * 0.5 + next[1] * 0.5];
                let r0 = (C64::new(
                    pumps[0].gamma_bar(),
                    dets[0] - 2.0 * model.eta_spm * b[0].norm_sqr() - model.zeta_xpm * b[1].norm_sqr(),
                ) * b[0]
                    + C64::new(0.0, 1.0) * g[0])
                    .norm();
                let r1 = (C64::new(
                    pumps[1].gamma_bar(),
                    dets[1] - 2.0 * model.eta_spm * b[1].norm_sqr() - model.zeta_xpm * b[0].norm_sqr(),
                ) * b[1]
                    + C64::new(0.0, 1.0) * g[1])
                    .norm();
                if r0.max(r1) <= 1e-12 * scale {
                    return Ok(vec![vec![b[0], b[1]]]);
                }
            }
            Err(RingError::Numeric(
                "dual-pump steady state did not converge (possible bistability); \
                 reduce the drive or detuning"
                    .into(),
            ))
        }
    }
}
