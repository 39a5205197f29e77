//! Gaussian consistency check: for quadratic H_NL the stepwise circuit has an
//! exact Bogoliubov mirror on (resonator + bins), and the MPS must reproduce
//! its second moments up to truncation and cutoff error.

use crate::model::{annihilation, CavityWaveguideModel};
use crate::simulate::simulate_cavity_mps;
use crate::{MpsError, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use squeezelab_core::linalg::{eye, matrix_exp};
use squeezelab_core::propagator::{build_generator, BogoliubovPropagator};
use squeezelab_core::state::state_from_propagator;
use squeezelab_core::CMat;

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    /// <n> per site, site order of the final chain (bins, then resonator).
    pub occupations_mps: Vec<f64>,
    pub occupations_gaussian: Vec<f64>,
    /// On-site <a_p a_p> followed by adjacent <a_p a_{p+1}>.
    pub pairings_mps: Vec<C64>,
    pub pairings_gaussian: Vec<C64>,
    pub max_deviation: f64,
}

/// Cavity coefficients (detuning shift, squeeze amplitude g of g a^dag^2) at
/// time t, refusing anything the Gaussian mirror cannot represent.
fn quadratic_coefficients(model: &CavityWaveguideModel, t: f64) -> Result<(f64, C64)> {
    let mut dnl = 0.0;
    let mut g = C64::new(0.0, 0.0);
    for term in &model.h_nl.terms {
        match (term.dag_power, term.a_power) {
            (0, 0) => {}
            (1, 1) => dnl += (term.amplitude * term.envelope.value(t)).re,
            (2, 0) => g += term.amplitude * term.envelope.value(t),
            // the Hermitian partner of (2, 0); validation pins it down
            (0, 2) => {}
            (1, 0) | (0, 1) => {
                return Err(MpsError::Invalid(
                    "linear ladder terms displace the state; the crosscheck needs zero mean"
                        .into(),
                ))
            }
            _ => {
                return Err(MpsError::Invalid(format!(
                    "H_NL degree {} exceeds 2; no Gaussian mirror exists",
                    term.degree()
                )))
            }
        }
    }
    Ok((dnl, g))
}

/// Exact one-step cavity Bogoliubov block for exp(-i dt [Delta n + g a^dag^2 + h.c.]).
fn cavity_block(delta: f64, g: C64, dt: f64) -> (C64, C64) {
    let d = Array2::from_elem((1, 1), C64::new(delta, 0.0));
    let z = Array2::from_elem((1, 1), g * C64::new(0.0, -2.0));
    let gen = build_generator(&d, &z);
    let step = matrix_exp(&gen.mapv(|x| x * C64::new(0.0, -dt)));
    (step[(0, 0)], step[(0, 1)])
}

/// Run both descriptions of a quadratic model and compare per-site <n>,
/// on-site <a^2> and adjacent <a_p a_{p+1}>. Errors when the worst absolute
/// deviation exceeds `tol` (pass infinity to always get the report).
pub fn gaussian_crosscheck(model: &CavityWaveguideModel, tol: f64) -> Result<CrosscheckReport> {
    model.validate()?;
    quadratic_coefficients(model, 0.0)?;

    // exact Bogoliubov mirror of the same discretization: mode 0 is the
    // resonator, mode 1 + j is bin j
    let modes = model.bins + 1;
    let theta = model.theta();
    let (ct, st) = (C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0));
    let mut k = BogoliubovPropagator::identity(modes);
    for j in 0..model.bins {
        let t = model.dt * j as f64;
        let (dnl, g) = quadratic_coefficients(model, t)?;
        let (v00, w00) = cavity_block(model.delta + dnl, g, model.dt);
        let mut v0 = BogoliubovPropagator::identity(modes);
        v0.v[(0, 0)] = v00;
        v0.w[(0, 0)] = w00;
        let mut bs = BogoliubovPropagator::identity(modes);
        bs.v[(0, 0)] = ct;
        bs.v[(0, j + 1)] = -st;
        bs.v[(j + 1, 0)] = st;
        bs.v[(j + 1, j + 1)] = ct;
        k = bs.compose(&v0).compose(&k);
    }
    let gauss = state_from_propagator(&k)?;

    let (state, _trace) = simulate_cavity_mps(model, None)?;
    let norm_sqr = state.norm_sqr();
    if norm_sqr <= 0.0 {
        return Err(MpsError::Numeric("crosscheck: state norm vanished".into()));
    }
    let c = model.cutoff;
    let a_op = annihilation(c);
    let a2_op = a_op.dot(&a_op);
    let mut n_op: CMat = eye(c);
    for n in 0..c {
        n_op[(n, n)] = C64::new(n as f64, 0.0);
    }
    let mode_of = |site: usize| if site < model.bins { site + 1 } else { 0 };

    let sites = state.sites();
    let mut occ_mps = Vec::with_capacity(sites);
    let mut occ_gauss = Vec::with_capacity(sites);
    let mut pair_mps = Vec::new();
    let mut pair_gauss = Vec::new();
    for p in 0..sites {
        occ_mps.push(state.expectation(&[(p, &n_op)])?.re / norm_sqr);
        occ_gauss.push(gauss.n[(mode_of(p), mode_of(p))].re);
        pair_mps.push(state.expectation(&[(p, &a2_op)])? / norm_sqr);
        pair_gauss.push(gauss.m[(mode_of(p), mode_of(p))]);
    }
    for p in 0..sites - 1 {
        pair_mps.push(state.expectation(&[(p, &a_op), (p + 1, &a_op)])? / norm_sqr);
        pair_gauss.push(gauss.m[(mode_of(p), mode_of(p + 1))]);
    }

    let mut max_deviation = 0.0f64;
    for (x, y) in occ_mps.iter().zip(&occ_gauss) {
        max_deviation = max_deviation.max((x - y).abs());
    }
    for (x, y) in pair_mps.iter().zip(&pair_gauss) {
        max_deviation = max_deviation.max((x - y).norm());
    }
    let report = CrosscheckReport {
        occupations_mps: occ_mps,
        occupations_gaussian: occ_gauss,
        pairings_mps: pair_mps,
        pairings_gaussian: pair_gauss,
        max_deviation,
    };
    if max_deviation > tol {
        return Err(MpsError::Numeric(format!(
            "crosscheck deviation {max_deviation:.3e} exceeds {tol:.3e}; \
             occupations (mps) {:?} vs (gaussian) {:?}",
            report.occupations_mps, report.occupations_gaussian
        )));
    }
    Ok(report)
}
