//! Two-time output moments from the Green function and the input-output
//! relation psi_> = psi_< - i gamma c / v.
//!
//! With vacuum inputs the only surviving noise correlator is the
//! delta-correlated <D D*> pair, so every moment reduces to a single tau
//! quadrature over Green-function columns plus (for M) a contact term from
//! the direct input-output reflection, plus a rank-one piece from the vacuum
//! state at the grid start propagated homogeneously. The Heaviside value at
//! coincident arguments is 1/2 throughout.

use crate::generator::RingGenerator;
use crate::green::GreenFunction;
use crate::model::RingModel;
use crate::{Result, RingError};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use squeezelab_core::exec::map_indexed;

/// Output-channel two-time moments on the solve grid. `n_*` are the
/// normally ordered flux correlations N(t1, t2) (1/time units); `m_cross` is
/// the anomalous correlation between the signal and idler channels (the
/// signal channel with itself for the degenerate schemes).
#[derive(Debug, Clone)]
pub struct TwoTimeMoments {
    pub times: Array1<f64>,
    pub n_signal: Array2<C64>,
    /// Present for the non-degenerate schemes only.
    pub n_idler: Option<Array2<C64>>,
    pub m_cross: Array2<C64>,
}

impl TwoTimeMoments {
    fn time_weights(&self) -> (f64, usize) {
        (self.times[1] - self.times[0], self.times.len())
    }

    /// Trapezoid integral of N_S(t, t): total photons leaving through the
    /// signal channel.
    pub fn total_signal_photons(&self) -> f64 {
        let (dt, nt) = self.time_weights();
        let mut s = 0.0;
        for i in 0..nt {
            let w = if i == 0 || i == nt - 1 { 0.5 } else { 1.0 };
            s += w * self.n_signal[(i, i)].re;
        }
        s * dt
    }

    /// Largest |N(t1,t2) - conj(N(t2,t1))| over the grid.
    pub fn hermiticity_residual(&self) -> f64 {
        let (_, nt) = self.time_weights();
        let mut worst = 0.0f64;
        for i in 0..nt {
            for j in 0..nt {
                worst = worst.max((self.n_signal[(i, j)] - self.n_signal[(j, i)].conj()).norm());
                if let Some(ni) = &self.n_idler {
                    worst = worst.max((ni[(i, j)] - ni[(j, i)].conj()).norm());
                }
            }
        }
        worst
    }
}

/// Apply theta supports to a Green component: zero above the diagonal is
/// already guaranteed, the diagonal gets the theta(0) = 1/2 factor.
fn theta_weighted(g: &Array2<C64>) -> Array2<C64> {
    let mut out = g.clone();
    let n = out.nrows();
    for i in 0..n {
        out[(i, i)] *= 0.5;
    }
    out
}

/// Column quadrature weights: trapezoid in tau from the grid start; the
/// upper end of the support is handled by the theta factors above.
fn scale_columns(mut a: Array2<C64>, dt: f64) -> Array2<C64> {
    let n = a.ncols();
    for j in 0..n {
        let w = if j == 0 { 0.5 * dt } else { dt };
        a.column_mut(j).mapv_inplace(|z| z * w);
    }
    a
}

/// Output moments for the scheme bound into `model` from its Green function.
/// The cavity starts in vacuum at the first grid point.
pub fn ring_moments(model: &RingModel, green: &GreenFunction) -> Result<TwoTimeMoments> {
    model.validate()?;
    let nt = green.times.len();
    if nt < 8 {
        return Err(RingError::Invalid("moment grid too small".into()));
    }
    let dt = green.times[1] - green.times[0];
    let gamma_s = model.signal.gamma;
    let gamma_i = model.idler_or_signal().gamma;
    let gbar_s = model.signal.gamma_bar();
    let gbar_i = model.idler_or_signal().gamma_bar();

    let b12 = theta_weighted(&green.g12);
    let b21 = theta_weighted(&green.g21);
    let b11 = theta_weighted(&green.g11);

    // N_S(t1,t2) = 2 Gamma_S [ G12*(t1,t0) G12(t2,t0)
    //              + 2 GammaBar_I sum_tau w G12*(t1,tau) G12(t2,tau) ]
    let b12w = scale_columns(b12.mapv(|z| z.conj()), dt);
    let mut n_signal = b12w.dot(&b12.t()).mapv(|z| z * (4.0 * gamma_s * gbar_i));
    let h12 = green.g12.column(0);
    for i in 0..nt {
        for j in 0..nt {
            n_signal[(i, j)] += 2.0 * gamma_s * h12[i].conj() * h12[j];
        }
    }

    // N_I(t1,t2) = 2 Gamma_I [ G21(t1,t0) G21*(t2,t0)
    //              + 2 GammaBar_S sum_tau w G21(t1,tau) G21*(t2,tau) ]
    let n_idler = if model.scheme.degenerate() {
        None
    } else {
        let b21w = scale_columns(b21.clone(), dt);
        let mut ni = b21w.dot(&b21.mapv(|z| z.conj()).t()).mapv(|z| z * (4.0 * gamma_i * gbar_s));
        let h21 = green.g21.column(0);
        for i in 0..nt {
            for j in 0..nt {
                ni[(i, j)] += 2.0 * gamma_i * h21[i] * h21[j].conj();
            }
        }
        Some(ni)
    };

    // M(t1,t2) = 2 sqrt(Gamma_S Gamma_I) [ theta(t2-t1) G21*(t2,t1)
    //            - G11(t1,t0) G21*(t2,t0)
    //            - 2 GammaBar_S sum_tau w G11(t1,tau) G21*(t2,tau) ]
    let pref = 2.0 * (gamma_s * gamma_i).sqrt();
    let b11w = scale_columns(b11, dt);
    let integral = b11w.dot(&b21.mapv(|z| z.conj()).t());
    let h11: Vec<C64> = green.g11.column(0).to_vec();
    let h21c: Vec<C64> = green.g21.column(0).iter().map(|z| z.conj()).collect();
    let rows: Vec<Vec<C64>> = map_indexed(nt, |i| {
        (0..nt)
            .map(|j| {
                let contact = if j > i {
                    green.g21[(j, i)].conj()
                } else if j == i {
                    // theta(0) = 1/2, and G21(t,t) = 0 anyway
                    0.5 * green.g21[(i, i)].conj()
                } else {
                    C64::new(0.0, 0.0)
                };
                (contact - h11[i] * h21c[j] - 2.0 * gbar_s * integral[(i, j)]) * pref
            })
            .collect()
    });
    let mut m_cross = Array2::zeros((nt, nt));
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m_cross[(i, j)] = *v;
        }
    }

    Ok(TwoTimeMoments { times: green.times.clone(), n_signal, n_idler, m_cross })
}

/// Intracavity second moments along the solve grid, from the Lyapunov
/// equation dC/dt = M C + C M^H + Q with C = <x x^H>, x = (c_S, c_I^dag) and
/// Q = diag(2 GammaBar_S, 0), starting from vacuum. This is an O(n_t) route
/// to the out-coupled flux N_S(t,t) = 2 Gamma_S n_signal(t), independent of
/// the Green-function quadratures.
#[derive(Debug, Clone)]
pub struct CavityOccupations {
    pub times: Array1<f64>,
    /// <c_S^dag c_S>(t)
    pub n_signal: Array1<f64>,
    /// <c_I^dag c_I>(t); equals n_signal for the degenerate schemes.
    pub n_idler: Array1<f64>,
    /// <c_S c_I>(t) (or <c_S c_S> when degenerate).
    pub m_pair: Array1<C64>,
    /// Out-coupled signal flux 2 Gamma_S n_signal.
    pub signal_flux: Array1<f64>,
}

impl CavityOccupations {
    /// Trapezoid integral of the signal flux: total photons emitted into the
    /// signal channel over the grid.
    pub fn total_signal_photons(&self) -> f64 {
        let nt = self.times.len();
        let dt = self.times[1] - self.times[0];
        let mut s = 0.0;
        for i in 0..nt {
            let w = if i == 0 || i == nt - 1 { 0.5 } else { 1.0 };
            s += w * self.signal_flux[i];
        }
        s * dt
    }
}

fn lyapunov_rhs(m: &[C64; 4], c: &[C64; 4], q11: f64) -> [C64; 4] {
    // M C + C M^H + Q for 2x2 entries [c11, c12, c21, c22]
    [
        m[0] * c[0] + m[1] * c[2] + c[0] * m[0].conj() + c[1] * m[1].conj() + q11,
        m[0] * c[1] + m[1] * c[3] + c[0] * m[2].conj() + c[1] * m[3].conj(),
        m[2] * c[0] + m[3] * c[2] + c[2] * m[0].conj() + c[3] * m[1].conj(),
        m[2] * c[1] + m[3] * c[3] + c[2] * m[2].conj() + c[3] * m[3].conj(),
    ]
}

pub fn cavity_occupations(model: &RingModel, gen: &RingGenerator) -> Result<CavityOccupations> {
    model.validate()?;
    let times = gen.times().clone();
    let nt = times.len();
    let dt = times[1] - times[0];
    if gen.max_entry() * dt > 0.4 {
        return Err(RingError::Numeric(format!(
            "time step {dt:.3e} too large for the generator norm {:.3e}",
            gen.max_entry()
        )));
    }
    let gamma_s = model.signal.gamma;
    let q11 = 2.0 * model.signal.gamma_bar();
    // vacuum: <c_S c_S^dag> = 1, everything else zero
    let mut c = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let mut n_signal = Array1::zeros(nt);
    let mut n_idler = Array1::zeros(nt);
    let mut m_pair = Array1::zeros(nt);
    let store = |c: &[C64; 4], i: usize, ns: &mut Array1<f64>, ni: &mut Array1<f64>, mp: &mut Array1<C64>| {
        ns[i] = (c[0].re - 1.0).max(0.0);
        ni[i] = c[3].re.max(0.0);
        mp[i] = c[1];
    };
    store(&c, 0, &mut n_signal, &mut n_idler, &mut m_pair);
    for i in 0..nt - 1 {
        let t = times[i];
        let m0 = gen.m_at(t);
        let mh = gen.m_at(t + 0.5 * dt);
        let m1 = gen.m_at(t + dt);
        let k1 = lyapunov_rhs(&m0, &c, q11);
        let c2 = [c[0] + k1[0] * (0.5 * dt), c[1] + k1[1] * (0.5 * dt), c[2] + k1[2] * (0.5 * dt), c[3] + k1[3] * (0.5 * dt)];
        let k2 = lyapunov_rhs(&mh, &c2, q11);
        let c3 = [c[0] + k2[0] * (0.5 * dt), c[1] + k2[1] * (0.5 * dt), c[2] + k2[2] * (0.5 * dt), c[3] + k2[3] * (0.5 * dt)];
        let k3 = lyapunov_rhs(&mh, &c3, q11);
        let c4 = [c[0] + k3[0] * dt, c[1] + k3[1] * dt, c[2] + k3[2] * dt, c[3] + k3[3] * dt];
        let k4 = lyapunov_rhs(&m1, &c4, q11);
        for u in 0..4 {
            c[u] += (k1[u] + k2[u] * 2.0 + k3[u] * 2.0 + k4[u]) * (dt / 6.0);
        }
        store(&c, i + 1, &mut n_signal, &mut n_idler, &mut m_pair);
    }
    let signal_flux = n_signal.mapv(|n| 2.0 * gamma_s * n);
    Ok(CavityOccupations { times, n_signal, n_idler, m_pair, signal_flux })
}
