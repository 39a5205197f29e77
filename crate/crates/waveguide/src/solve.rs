//! Full kappa-space solve: concatenated one-step Bogoliubov propagators with
//! interleaved per-band loss.

use crate::generator::{build_kappa_generator, PumpSlice};
use crate::grid::KappaGrid;
use crate::process::{PumpPulse, WaveguideProcess};
use crate::pump::{evolve_pump_meanfield, pump_is_rigid, rigid_gaussian};
use crate::{Result, WaveguideError};
use ndarray::{s, Array1};
use num_complex::Complex64 as C64;
use squeezelab_core::linalg::matrix_exp;
use squeezelab_core::propagator::{build_generator, BogoliubovPropagator};
use squeezelab_core::state::{apply_bogoliubov, state_from_propagator, GaussianState};

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Trotter steps over the pump transit.
    pub steps: usize,
    /// Solve interval; inferred from the Gaussian pump transit when None.
    pub t_span: Option<(f64, f64)>,
    /// Samples of the nonlinear region used for the generator quadrature.
    pub x_points: usize,
    /// Split-step stages per solver step for non-rigid pumps.
    pub pump_substeps: usize,
    /// Apply sqrt(eta) loss on both sides of each unitary step instead of a
    /// full loss step after it.
    pub symmetrized_loss: bool,
    /// Symplectic drift ceiling for the lossless path.
    pub drift_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            steps: 300,
            t_span: None,
            x_points: 513,
            pump_substeps: 2,
            symmetrized_loss: false,
            drift_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WaveguideSolution {
    pub grid: KappaGrid,
    /// Present on the lossless path only.
    pub propagator: Option<BogoliubovPropagator>,
    pub state: GaussianState,
    /// Number of quantum bands (1 = DSV, 2 = NDSV).
    pub bands: usize,
    pub t_span: (f64, f64),
}

impl WaveguideSolution {
    /// Bins per band.
    pub fn band_modes(&self) -> usize {
        self.grid.len()
    }

    /// Mean photon number of band `b` (0 = signal, 1 = idler).
    pub fn band_photons(&self, b: usize) -> f64 {
        let n = self.band_modes();
        (0..n).map(|j| self.state.n[(b * n + j, b * n + j)].re).sum()
    }
}

fn transit_span(process: &WaveguideProcess) -> Result<(f64, f64)> {
    let mut t0 = f64::INFINITY;
    let mut t1 = f64::NEG_INFINITY;
    for (band, pulse) in process.pump_bands().iter().zip(process.pump_pulses()) {
        let tau = pulse.gaussian_tau().ok_or_else(|| {
            WaveguideError::Invalid("sampled pump pulses need an explicit t_span".into())
        })?;
        let tx = band.velocity * tau;
        let half = process.interaction_half_width();
        t0 = t0.min((-half - 4.0 * tx) / band.velocity);
        t1 = t1.max((half + 4.0 * tx) / band.velocity);
    }
    Ok((t0, t1))
}

enum PumpSource {
    Rigid { tau: f64, photons: f64 },
    Sampled { fields: crate::pump::PumpEnsemble, window_idx: (usize, usize) },
}

impl PumpSource {
    fn slice(&self, process: &WaveguideProcess, x_window: &Array1<f64>, step: usize, t: f64) -> PumpSlice {
        match self {
            PumpSource::Rigid { tau, photons } => PumpSlice {
                x: x_window.clone(),
                psi: vec![x_window.mapv(|xi| rigid_gaussian(&process.pump, *tau, *photons, xi, t))],
            },
            PumpSource::Sampled { fields, window_idx } => {
                let (lo, hi) = *window_idx;
                let psi = (0..fields.fields.len())
                    .map(|p| fields.fields[p].slice(s![step + 1, lo..=hi]).to_owned())
                    .collect();
                PumpSlice { x: x_window.clone(), psi }
            }
        }
    }
}

/// Solve the process over the pump transit.
///
/// Lossless runs return the full symplectic propagator along with the output
/// state; runs with attenuation on a quantum band interleave the unitary
/// steps with per-band transmission updates and return moments only.
pub fn solve_waveguide(
    process: &WaveguideProcess,
    grid: &KappaGrid,
    opts: &SolveOptions,
) -> Result<WaveguideSolution> {
    process.validate()?;
    if let Some(tau) = process.pump_pulse.gaussian_tau() {
        grid.validate_for(process, tau)?;
    }
    if opts.steps < 2 || opts.x_points < 16 {
        return Err(WaveguideError::Invalid("need at least 2 steps and 16 window samples".into()));
    }
    let (t0, t1) = match opts.t_span {
        Some(span) => span,
        None => transit_span(process)?,
    };
    if !(t1 > t0) {
        return Err(WaveguideError::Invalid("empty solve interval".into()));
    }
    let steps = opts.steps;
    let dt = (t1 - t0) / steps as f64;
    let half_l = process.interaction_half_width();
    let nx = opts.x_points;
    let x_window = Array1::from_iter(
        (0..nx).map(|k| -half_l + 2.0 * half_l * k as f64 / (nx - 1) as f64),
    );

    // pump fields at the Trotter midpoints
    let source = if pump_is_rigid(process) {
        match process.pump_pulse {
            PumpPulse::Gaussian { tau, photons } => PumpSource::Rigid { tau, photons },
            _ => unreachable!(),
        }
    } else {
        let (x_ext, window_idx) = extended_grid(process, &x_window, t0, t1)?;
        let mut times = Vec::with_capacity(steps + 1);
        times.push(t0);
        for j in 0..steps {
            times.push(t0 + (j as f64 + 0.5) * dt);
        }
        let fields =
            evolve_pump_meanfield(process, &x_ext, &Array1::from(times), opts.pump_substeps)?;
        PumpSource::Sampled { fields, window_idx }
    };

    let (sig, idl) = process.quantum_bands();
    let n = grid.len();
    let bands = if idl.is_some() { 2 } else { 1 };
    let modes = bands * n;
    let lossy = sig.attenuation > 0.0 || idl.map_or(false, |b| b.attenuation > 0.0);

    let mut labels = Vec::with_capacity(modes);
    let tags = ["S", "I"];
    for b in 0..bands {
        let h = grid.half_points as isize;
        for j in -h..=h {
            labels.push(format!("{}[{}]", tags[b], j));
        }
    }

    // per-mode amplitude transmission over one step (or half step)
    let loss_half: Vec<f64> = {
        let mut v = Vec::with_capacity(modes);
        let rho = [sig.attenuation, idl.map_or(0.0, |b| b.attenuation)];
        for b in 0..bands {
            let eta = (-rho[b] * dt).exp();
            for _ in 0..n {
                v.push(eta.sqrt());
            }
        }
        v
    };
    let apply_band_loss = |st: &mut GaussianState, amps: &[f64]| {
        for i in 0..modes {
            for j in 0..modes {
                let f = C64::new(amps[i] * amps[j], 0.0);
                st.n[(i, j)] *= f;
                st.m[(i, j)] *= f;
            }
            st.beta[i] *= C64::new(amps[i], 0.0);
        }
    };
    let half_amps: Vec<f64> = loss_half.iter().map(|a| a.sqrt()).collect();

    let mut k_total = BogoliubovPropagator::identity(modes);
    k_total.t_i = t0;
    let mut state = GaussianState::vacuum(modes);
    let mut since_check = 0usize;

    for j in 0..steps {
        let t_mid = t0 + (j as f64 + 0.5) * dt;
        let pump_slice = source.slice(process, &x_window, j, t_mid);
        let gen = build_kappa_generator(process, &pump_slice, grid, t_mid)?;
        let (d_core, z_core) = gen.to_core_blocks();
        let a = build_generator(&d_core, &z_core);
        let step = matrix_exp(&a.mapv(|x| x * C64::new(0.0, -dt)));
        if step.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WaveguideError::Numeric("NaN in one-step exponential".into()));
        }
        let k_step = BogoliubovPropagator {
            v: step.slice(s![..modes, ..modes]).to_owned(),
            w: step.slice(s![..modes, modes..]).to_owned(),
            t_i: t_mid - 0.5 * dt,
            t_f: t_mid + 0.5 * dt,
        };
        if lossy {
            if opts.symmetrized_loss {
                apply_band_loss(&mut state, &half_amps);
                state = apply_bogoliubov(&state, &k_step)?;
                apply_band_loss(&mut state, &half_amps);
            } else {
                state = apply_bogoliubov(&state, &k_step)?;
                apply_band_loss(&mut state, &loss_half);
            }
        } else {
            k_total = k_step.compose(&k_total);
            since_check += 1;
            if since_check >= 64 {
                since_check = 0;
                let chk = k_total.check(f64::INFINITY)?;
                if chk.commute_residual.max(chk.identity_residual) > opts.drift_tol {
                    k_total = k_total.resymplectify()?;
                }
            }
        }
    }

    if lossy {
        state.labels = labels;
        Ok(WaveguideSolution { grid: *grid, propagator: None, state, bands, t_span: (t0, t1) })
    } else {
        k_total.t_f = t1;
        let chk = k_total.check(f64::INFINITY)?;
        if chk.commute_residual.max(chk.identity_residual) > opts.drift_tol {
            k_total = k_total.resymplectify()?;
        }
        let mut state = state_from_propagator(&k_total)?;
        state.labels = labels;
        Ok(WaveguideSolution {
            grid: *grid,
            propagator: Some(k_total),
            state,
            bands,
            t_span: (t0, t1),
        })
    }
}

/// Uniform lab-frame grid for split-step pump evolution, sharing the window
/// spacing and containing the window nodes, wide enough for the full transit.
fn extended_grid(
    process: &WaveguideProcess,
    x_window: &Array1<f64>,
    t0: f64,
    t1: f64,
) -> Result<(Array1<f64>, (usize, usize))> {
    if let PumpPulse::SampledInitial { x, .. } = &process.pump_pulse {
        // the sampled grid is the solver grid; locate the window inside it
        let dx = x[1] - x[0];
        let lo = ((x_window[0] - x[0]) / dx).round() as isize;
        let hi = ((x_window[x_window.len() - 1] - x[0]) / dx).round() as isize;
        let tol = 1e-6 * dx;
        if lo < 0
            || hi as usize >= x.len()
            || (x[lo as usize] - x_window[0]).abs() > tol
            || (x[hi as usize] - x_window[x_window.len() - 1]).abs() > tol
            || (dx - (x_window[1] - x_window[0])).abs() > tol
        {
            return Err(WaveguideError::Invalid(
                "sampled pump grid must contain the nonlinear region with the window spacing".into(),
            ));
        }
        return Ok((x.clone(), (lo as usize, hi as usize)));
    }
    let dx = x_window[1] - x_window[0];
    let mut reach = 0.0f64;
    for (band, pulse) in process.pump_bands().iter().zip(process.pump_pulses()) {
        let tau = pulse.gaussian_tau().expect("gaussian checked by caller");
        let tx = band.velocity * tau;
        let travel = band.velocity * (t1 - t0);
        reach = reach.max(travel + 8.0 * tx);
    }
    let pad = (reach / dx).ceil() as usize + 2;
    let lo = pad;
    let total = x_window.len() + 2 * pad;
    let x0 = x_window[0] - pad as f64 * dx;
    let x_ext = Array1::from_iter((0..total).map(|k| x0 + k as f64 * dx));
    Ok((x_ext, (lo, lo + x_window.len() - 1)))
}
