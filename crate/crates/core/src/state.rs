//! Gaussian states of l bosonic modes and their transformations.
//!
//! A zero-mean Gaussian state is fully described by the second-order moments
//! ```text
//!     N_ij = <a_i^dag a_j>   (Hermitian, phase-insensitive),
//!     M_ij = <a_i a_j>       (symmetric, phase-sensitive),
//! ```
//! plus a displacement vector beta. For a propagator K = (V, W) acting on
//! vacuum, M = W V^T and N = W* W^T.

use crate::linalg::{
    self, conj, dagger, eye, fro_norm, takagi_autonne, unitary_log, CMat, CVec, LinalgError,
    SV_CLAMP,
};
use crate::propagator::BogoliubovPropagator;
use ndarray::{s, Array1};
use ndarray_linalg::{Eigh, SVD, UPLO};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// Schema tag written into serialized states.
pub const STATE_SCHEMA: &str = "gaussian-state/1";

#[derive(Debug, Clone)]
pub struct GaussianState {
    /// Phase-insensitive moments <a_i^dag a_j>.
    pub n: CMat,
    /// Phase-sensitive moments <a_i a_j>.
    pub m: CMat,
    /// Displacement vector.
    pub beta: CVec,
    /// Per-mode tags (signal/idler partition, bin index, ...).
    pub labels: Vec<String>,
}

/// Schmidt decomposition data of a pure squeezed state.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    /// Output Schmidt modes (degenerate case), or the signal-side modes.
    pub f: CMat,
    /// Idler-side modes in the non-degenerate case.
    pub f_c: Option<CMat>,
    /// Squeezing parameters, descending.
    pub r: Vec<f64>,
    /// Joint amplitude J = F diag(r) F^T (degenerate) or F_b diag(r) F_c^T.
    pub j: CMat,
}

impl GaussianState {
    pub fn vacuum(l: usize) -> Self {
        Self {
            n: CMat::zeros((l, l)),
            m: CMat::zeros((l, l)),
            beta: CVec::zeros(l),
            labels: (0..l).map(|i| format!("mode{i}")).collect(),
        }
    }

    pub fn modes(&self) -> usize {
        self.n.nrows()
    }

    pub fn mean_total_photons(&self) -> f64 {
        (0..self.modes()).map(|i| self.n[(i, i)].re).sum()
    }

    /// Structural residuals: (‖N − N†‖, ‖M − Mᵀ‖).
    pub fn structure_residuals(&self) -> (f64, f64) {
        (
            fro_norm(&(&self.n - &dagger(&self.n))),
            fro_norm(&(&self.m - &self.m.t().to_owned())),
        )
    }

    /// Smallest eigenvalue of V + (i/2) Omega, where V is the quadrature
    /// covariance built from (N, M) with hbar = 1 and q = (a + a^dag)/sqrt(2).
    /// Physical states have this >= 0 up to tolerance.
    pub fn physicality_min_eig(&self) -> Result<f64, LinalgError> {
        let l = self.modes();
        let re = |a: &CMat| a.mapv(|x| C64::new(x.re, 0.0));
        let im = |a: &CMat| a.mapv(|x| C64::new(x.im, 0.0));
        let half = C64::new(0.5, 0.0);
        let v_qq = re(&self.m) + re(&self.n) + eye(l).mapv(|x| x * half);
        let v_pp = re(&self.n) - re(&self.m) + eye(l).mapv(|x| x * half);
        let v_qp = im(&self.m) + im(&self.n);
        let mut v = CMat::zeros((2 * l, 2 * l));
        v.slice_mut(s![..l, ..l]).assign(&v_qq);
        v.slice_mut(s![..l, l..]).assign(&v_qp);
        v.slice_mut(s![l.., ..l]).assign(&v_qp.t());
        v.slice_mut(s![l.., l..]).assign(&v_pp);
        // V + (i/2) Omega with Omega = [[0, 1], [-1, 0]]
        let ih = C64::new(0.0, 0.5);
        for i in 0..l {
            for j in 0..l {
                if i == j {
                    v[(i, l + j)] += ih;
                    v[(l + i, j)] -= ih;
                }
            }
        }
        let (w, _) = v.eigh(UPLO::Lower)?;
        Ok(w.iter().cloned().fold(f64::INFINITY, f64::min))
    }
}

/// Vacuum response of a symplectic propagator: N = W* W^T, M = W V^T, beta = 0.
pub fn state_from_propagator(k: &BogoliubovPropagator) -> Result<GaussianState, LinalgError> {
    let chk = k.check(1e-8)?;
    if !chk.pass {
        return Err(LinalgError::Precondition(format!(
            "state_from_propagator: propagator not symplectic (residuals {:.3e}, {:.3e})",
            chk.commute_residual, chk.identity_residual
        )));
    }
    let n = conj(&k.w).dot(&k.w.t());
    let n = (&n + &dagger(&n)) / C64::new(2.0, 0.0);
    let m = k.w.dot(&k.v.t());
    let m = (&m + &m.t()) / C64::new(2.0, 0.0);
    let l = k.modes();
    Ok(GaussianState { n, m, beta: CVec::zeros(l), labels: GaussianState::vacuum(l).labels })
}

/// Push an existing state through a Bogoliubov step a -> V a + W a^dag:
/// ```text
///     N' = V* N V^T + V* M* W^T + W* M V^T + W* (I + N^T) W^T
///     M' = V M V^T + V (I + N^T) W^T + W N V^T + W M* W^T
///     beta' = V beta + W beta*
/// ```
/// On vacuum this reduces to `state_from_propagator`. The symplectic check is
/// left to the caller (stepping loops verify drift periodically instead).
pub fn apply_bogoliubov(
    state: &GaussianState,
    k: &BogoliubovPropagator,
) -> Result<GaussianState, LinalgError> {
    let l = state.modes();
    if k.modes() != l {
        return Err(LinalgError::Dimension(format!(
            "apply_bogoliubov: {} modes vs {}-mode state",
            k.modes(),
            l
        )));
    }
    let vs = conj(&k.v);
    let ws = conj(&k.w);
    let nt_plus = eye(l) + state.n.t().to_owned();
    let ms = conj(&state.m);
    let n = vs.dot(&state.n).dot(&k.v.t())
        + vs.dot(&ms).dot(&k.w.t())
        + ws.dot(&state.m).dot(&k.v.t())
        + ws.dot(&nt_plus).dot(&k.w.t());
    let m = k.v.dot(&state.m).dot(&k.v.t())
        + k.v.dot(&nt_plus).dot(&k.w.t())
        + k.w.dot(&state.n).dot(&k.v.t())
        + k.w.dot(&ms).dot(&k.w.t());
    let n = (&n + &dagger(&n)) / C64::new(2.0, 0.0);
    let m = (&m + &m.t()) / C64::new(2.0, 0.0);
    let beta = k.v.dot(&state.beta) + k.w.dot(&state.beta.mapv(|x| x.conj()));
    Ok(GaussianState { n, m, beta, labels: state.labels.clone() })
}

/// Joint amplitude of a pure degenerate squeezed state: Takagi of M gives
/// s_lam = (1/2) sinh 2 r_lam and the Schmidt modes F; J = F diag(r) F^T.
///
/// `purity_tol` is the relative tolerance on the N-M consistency check.
pub fn degenerate_joint_amplitude(
    state: &GaussianState,
    purity_tol: f64,
) -> Result<SchmidtData, LinalgError> {
    let l = state.modes();
    let tak = takagi_autonne(&state.m, 1e-10)?;
    let r: Vec<f64> = tak.values.iter().map(|&s| 0.5 * (2.0 * s).asinh()).collect();
    let f = tak.f;
    // N consistency: N = F* diag(sinh^2 r) F^T for a pure state
    let mut n_expect = CMat::zeros((l, l));
    for lam in 0..l {
        let s2 = C64::new(r[lam].sinh().powi(2), 0.0);
        for i in 0..l {
            for j in 0..l {
                n_expect[(i, j)] += f[(i, lam)].conj() * s2 * f[(j, lam)];
            }
        }
    }
    let res = fro_norm(&(&n_expect - &state.n));
    let scale = fro_norm(&state.n).max(1.0);
    if res > purity_tol * scale {
        return Err(LinalgError::Precondition(format!(
            "degenerate_joint_amplitude: mixed state, N residual {res:.3e} (relative to {scale:.3e})"
        )));
    }
    let mut j = CMat::zeros((l, l));
    for lam in 0..l {
        let rl = C64::new(r[lam], 0.0);
        for a in 0..l {
            for b in 0..l {
                j[(a, b)] += f[(a, lam)] * rl * f[(b, lam)];
            }
        }
    }
    Ok(SchmidtData { f, f_c: None, r, j })
}

/// Joint amplitude of a twin-beam (non-degenerate) state from the cross block
/// M^{bc}: SVD M_bc = F_b D F_c^T, r_lam = (1/2) asinh(2 D_lam).
pub fn nondegenerate_joint_amplitude(m_bc: &CMat) -> Result<SchmidtData, LinalgError> {
    let (u, sv, vt) = m_bc.svd(true, true)?;
    let f_b = u.ok_or_else(|| LinalgError::Backend("svd: U missing".into()))?;
    let vt = vt.ok_or_else(|| LinalgError::Backend("svd: V^H missing".into()))?;
    // M = U S V^H = F_b S F_c^T with F_c = (V^H)^T = V^*
    let f_c = vt.t().to_owned();
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let r: Vec<f64> = sv
        .iter()
        .map(|&s| if s < SV_CLAMP * smax { 0.0 } else { 0.5 * (2.0 * s).asinh() })
        .collect();
    let (lb, lc) = m_bc.dim();
    let mut j = CMat::zeros((lb, lc));
    for lam in 0..r.len() {
        let rl = C64::new(r[lam], 0.0);
        for a in 0..lb {
            for b in 0..lc {
                j[(a, b)] += f_b[(a, lam)] * rl * f_c[(b, lam)];
            }
        }
    }
    Ok(SchmidtData { f: f_b, f_c: Some(f_c), r, j })
}

/// State of the exponentiated first-Magnus unitary for a low-gain joint
/// amplitude J_bar: V = F [cosh r] F^dag, W = F [sinh r] F^T with (F, r) the
/// Takagi data of J_bar.
pub fn low_gain_state(j_bar: &CMat) -> Result<(GaussianState, SchmidtData), LinalgError> {
    let l = j_bar.nrows();
    let tak = takagi_autonne(j_bar, 1e-10)?;
    let f = tak.f.clone();
    let r = tak.values.clone();
    let mut v = CMat::zeros((l, l));
    let mut w = CMat::zeros((l, l));
    for lam in 0..l {
        let ch = C64::new(r[lam].cosh(), 0.0);
        let sh = C64::new(r[lam].sinh(), 0.0);
        for i in 0..l {
            for j in 0..l {
                v[(i, j)] += f[(i, lam)] * ch * f[(j, lam)].conj();
                w[(i, j)] += f[(i, lam)] * sh * f[(j, lam)];
            }
        }
    }
    let k = BogoliubovPropagator { v, w, t_i: 0.0, t_f: 0.0 };
    let state = state_from_propagator(&k)?;
    let mut j = CMat::zeros((l, l));
    for lam in 0..l {
        let rl = C64::new(r[lam], 0.0);
        for a in 0..l {
            for b in 0..l {
                j[(a, b)] += f[(a, lam)] * rl * f[(b, lam)];
            }
        }
    }
    Ok((state, SchmidtData { f, f_c: None, r, j }))
}

/// Beamsplitter-like loss map N -> L* N L^T, M -> L M L^T, beta -> L beta.
/// All singular values of L must be <= 1.
pub fn apply_loss(state: &GaussianState, l_mat: &CMat) -> Result<GaussianState, LinalgError> {
    let (_, sv, _) = l_mat.svd(false, false)?;
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    if smax > 1.0 + 1e-10 {
        return Err(LinalgError::Precondition(format!(
            "apply_loss: unphysical transmission matrix, max singular value {smax:.6}"
        )));
    }
    Ok(GaussianState {
        n: conj(l_mat).dot(&state.n).dot(&l_mat.t()),
        m: l_mat.dot(&state.m).dot(&l_mat.t()),
        beta: l_mat.dot(&state.beta),
        labels: state.labels.clone(),
    })
}

/// Uniform loss with intensity transmission eta: N -> eta N, M -> eta M.
pub fn apply_uniform_loss(state: &GaussianState, eta: f64) -> Result<GaussianState, LinalgError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(LinalgError::Precondition(format!("apply_uniform_loss: eta = {eta} out of [0,1]")));
    }
    let e = C64::new(eta, 0.0);
    let amp = C64::new(eta.sqrt(), 0.0);
    Ok(GaussianState {
        n: state.n.mapv(|x| x * e),
        m: state.m.mapv(|x| x * e),
        beta: state.beta.mapv(|x| x * amp),
        labels: state.labels.clone(),
    })
}

/// Passive (energy-preserving) transformation: the loss map with unitary L.
pub fn apply_passive(state: &GaussianState, u: &CMat) -> Result<GaussianState, LinalgError> {
    let res = linalg::unitarity_residual(u);
    if res > 1e-8 {
        return Err(LinalgError::Precondition(format!(
            "apply_passive: matrix not unitary, residual {res:.3e}"
        )));
    }
    apply_loss(state, u)
}

/// Displacement of the output when the propagator is seeded with a coherent
/// state |alpha>: the displaced-squeezed output has beta = V alpha + W alpha*.
pub fn seed_coherent(k: &BogoliubovPropagator, alpha: &CVec) -> Result<CVec, LinalgError> {
    if alpha.len() != k.modes() {
        return Err(LinalgError::Dimension(format!(
            "seed_coherent: alpha length {} vs {} modes",
            alpha.len(),
            k.modes()
        )));
    }
    Ok(k.v.dot(alpha) + k.w.dot(&alpha.mapv(|x| x.conj())))
}

/// Generator of the vacuum-preserving passive factor of the evolution:
/// phi = -i log(G^dag F*); exp(-i phi) applied after the squeezer reproduces
/// the full propagator's action on destruction operators.
pub fn recover_passive_factor(f: &CMat, g: &CMat) -> Result<CMat, LinalgError> {
    let target = dagger(g).dot(&conj(f));
    unitary_log(&target, 1e-8)
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct GaussianStateDto {
    pub schema: String,
    pub mode_count: usize,
    pub labels: Vec<String>,
    /// Row-major, complex entries as [re, im].
    pub n: Vec<Vec<[f64; 2]>>,
    pub m: Vec<Vec<[f64; 2]>>,
    pub beta: Vec<[f64; 2]>,
}

fn mat_to_rows(a: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect())
        .collect()
}

fn rows_to_mat(rows: &[Vec<[f64; 2]>]) -> Result<CMat, LinalgError> {
    let r = rows.len();
    let c = rows.first().map(|x| x.len()).unwrap_or(0);
    if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
        return Err(LinalgError::Dimension("state deserialization: ragged matrix".into()));
    }
    let mut a = CMat::zeros((r, c));
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            a[(i, j)] = C64::new(re, im);
        }
    }
    Ok(a)
}

impl GaussianState {
    pub fn to_dto(&self) -> GaussianStateDto {
        GaussianStateDto {
            schema: STATE_SCHEMA.to_string(),
            mode_count: self.modes(),
            labels: self.labels.clone(),
            n: mat_to_rows(&self.n),
            m: mat_to_rows(&self.m),
            beta: self.beta.iter().map(|x| [x.re, x.im]).collect(),
        }
    }

    pub fn from_dto(dto: &GaussianStateDto) -> Result<Self, LinalgError> {
        if dto.schema != STATE_SCHEMA {
            return Err(LinalgError::Precondition(format!(
                "unsupported state schema {:?}",
                dto.schema
            )));
        }
        let n = rows_to_mat(&dto.n)?;
        let m = rows_to_mat(&dto.m)?;
        if n.nrows() != dto.mode_count || m.nrows() != dto.mode_count || dto.beta.len() != dto.mode_count
        {
            return Err(LinalgError::Dimension("state deserialization: size mismatch".into()));
        }
        let beta: CVec = Array1::from(
            dto.beta.iter().map(|&[re, im]| C64::new(re, im)).collect::<Vec<_>>(),
        );
        let labels = if dto.labels.len() == dto.mode_count {
            dto.labels.clone()
        } else {
            (0..dto.mode_count).map(|i| format!("mode{i}")).collect()
        };
        Ok(Self { n, m, beta, labels })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("state serialization")
    }

    pub fn from_json(text: &str) -> Result<Self, LinalgError> {
        let dto: GaussianStateDto = serde_json::from_str(text)
            .map_err(|e| LinalgError::Precondition(format!("state JSON parse: {e}")))?;
        Self::from_dto(&dto)
    }
}
