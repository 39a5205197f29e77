//! Bogoliubov propagators from time-dependent quadratic Hamiltonians.
//!
//! The Hamiltonian is
//! ```text
//!     H(t)/hbar = sum_ij Delta_ij(t) a_i^dag a_j
//!               + (i/2) sum_kl [ zeta_kl(t) a_k^dag a_l^dag - h.c. ] ,
//! ```
//! with Delta Hermitian and zeta symmetric. The Heisenberg equations close on
//! R = (a; a^dag):
//! ```text
//!     dR/dt = -i A(t) R ,    A = [ Delta    i zeta   ]
//!                                [ i zeta*  -Delta^* ] ,
//! ```
//! and the propagator K(t_f, t_i) is built by Trotterization of the
//! time-ordered exponential, one matrix exponential per step.

use crate::linalg::{
    self, conj, dagger, eye, fro_norm, matrix_exp, one_norm, polar_unitary, takagi_autonne,
    validate_symplectic, CMat, LinalgError, I,
};
use ndarray::s;
use num_complex::Complex64 as C64;

/// Time-sampled coefficient matrices of a quadratic Hamiltonian on a uniform
/// grid t_j = t0 + j dt, j = 0..=n_steps.
#[derive(Debug, Clone)]
pub struct QuadraticHamiltonianTrajectory {
    pub t0: f64,
    pub dt: f64,
    /// Hermitian Delta(t_j), one per grid point.
    pub delta: Vec<CMat>,
    /// Symmetric zeta(t_j), one per grid point.
    pub zeta: Vec<CMat>,
}

impl QuadraticHamiltonianTrajectory {
    pub fn new(t0: f64, dt: f64, delta: Vec<CMat>, zeta: Vec<CMat>) -> Result<Self, LinalgError> {
        if delta.len() != zeta.len() || delta.len() < 2 {
            return Err(LinalgError::Dimension(
                "trajectory: need equal-length delta/zeta with at least two samples".into(),
            ));
        }
        if !(dt > 0.0) {
            return Err(LinalgError::Precondition("trajectory: dt must be positive".into()));
        }
        let traj = Self { t0, dt, delta, zeta };
        traj.check_structure()?;
        Ok(traj)
    }

    pub fn modes(&self) -> usize {
        self.delta[0].nrows()
    }

    pub fn samples(&self) -> usize {
        self.delta.len()
    }

    pub fn t_final(&self) -> f64 {
        self.t0 + self.dt * (self.samples() - 1) as f64
    }

    fn check_structure(&self) -> Result<(), LinalgError> {
        let l = self.modes();
        for (j, (d, z)) in self.delta.iter().zip(&self.zeta).enumerate() {
            if d.nrows() != l || d.ncols() != l || z.nrows() != l || z.ncols() != l {
                return Err(LinalgError::Dimension(format!("trajectory: sample {j} has wrong shape")));
            }
            let herm = fro_norm(&(d - &dagger(d)));
            let sym = fro_norm(&(z - &z.t().to_owned()));
            let scale = one_norm(d).max(one_norm(z)).max(1.0);
            if herm > 1e-12 * scale {
                return Err(LinalgError::Precondition(format!(
                    "trajectory: Delta(t_{j}) not Hermitian, residual {herm:.3e}"
                )));
            }
            if sym > 1e-12 * scale {
                return Err(LinalgError::Precondition(format!(
                    "trajectory: zeta(t_{j}) not symmetric, residual {sym:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Sample a continuous (Delta, zeta) pair on a uniform grid with the step
    /// chosen so dt * max||A|| <= `step_budget` (default rule 0.05).
    pub fn sample<F>(f: F, t0: f64, t1: f64, step_budget: f64) -> Result<Self, LinalgError>
    where
        F: Fn(f64) -> (CMat, CMat),
    {
        assert!(t1 > t0);
        // coarse scan for the largest generator norm
        let probes = 33;
        let mut amax = 0.0f64;
        for k in 0..probes {
            let t = t0 + (t1 - t0) * k as f64 / (probes - 1) as f64;
            let (d, z) = f(t);
            amax = amax.max(one_norm(&build_generator(&d, &z)));
        }
        let n = (((t1 - t0) * amax / step_budget).ceil() as usize).max(16);
        let dt = (t1 - t0) / n as f64;
        let mut delta = Vec::with_capacity(n + 1);
        let mut zeta = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let (d, z) = f(t0 + dt * j as f64);
            delta.push(d);
            zeta.push(z);
        }
        Self::new(t0, dt, delta, zeta)
    }
}

/// The (V, W) block pair of a Bogoliubov propagator.
#[derive(Debug, Clone)]
pub struct BogoliubovPropagator {
    pub v: CMat,
    pub w: CMat,
    pub t_i: f64,
    pub t_f: f64,
}

/// Sampling rule for the Trotter product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrotterMode {
    /// Second-order midpoint sampling A((t_j + t_{j+1})/2) via the mean of
    /// adjacent samples.
    #[default]
    Midpoint,
    /// Literal left-endpoint product.
    LeftEndpoint,
}

/// Assemble the 2l x 2l generator A from (Delta, zeta).
pub fn build_generator(delta: &CMat, zeta: &CMat) -> CMat {
    let l = delta.nrows();
    let mut a = CMat::zeros((2 * l, 2 * l));
    a.slice_mut(s![..l, ..l]).assign(delta);
    a.slice_mut(s![..l, l..]).assign(&zeta.mapv(|x| x * I));
    a.slice_mut(s![l.., ..l]).assign(&zeta.mapv(|x| x.conj() * I));
    a.slice_mut(s![l.., l..]).assign(&delta.mapv(|x| -x.conj()));
    a
}

impl BogoliubovPropagator {
    pub fn identity(l: usize) -> Self {
        Self { v: eye(l), w: CMat::zeros((l, l)), t_i: 0.0, t_f: 0.0 }
    }

    pub fn modes(&self) -> usize {
        self.v.nrows()
    }

    pub fn check(&self, tol: f64) -> Result<linalg::SymplecticCheck, LinalgError> {
        validate_symplectic(&self.v, &self.w, tol)
    }

    /// Compose: apply `first`, then `self`.
    pub fn compose(&self, first: &BogoliubovPropagator) -> BogoliubovPropagator {
        let v = self.v.dot(&first.v) + self.w.dot(&conj(&first.w));
        let w = self.v.dot(&first.w) + self.w.dot(&conj(&first.v));
        BogoliubovPropagator { v, w, t_i: first.t_i, t_f: self.t_f }
    }

    /// K^{-1}: V~ = V^dag, W~ = -W^T.
    pub fn invert(&self) -> BogoliubovPropagator {
        BogoliubovPropagator {
            v: dagger(&self.v),
            w: self.w.t().mapv(|x| -x),
            t_i: self.t_f,
            t_f: self.t_i,
        }
    }

    /// Project (V, W) back onto the symplectic manifold through the joint
    /// decomposition V = F [cosh r] G, W = F [sinh r] G*.
    pub fn resymplectify(&self) -> Result<BogoliubovPropagator, LinalgError> {
        let n = self.modes();
        let m = self.w.dot(&self.v.t());
        let m = (&m + &m.t()) / C64::new(2.0, 0.0);
        let tak = takagi_autonne(&m, 1e-6)?;
        let r: Vec<f64> = tak.values.iter().map(|&s| 0.5 * (2.0 * s).asinh()).collect();
        let f = tak.f;
        let mut g = dagger(&f).dot(&self.v);
        for lam in 0..n {
            let c = C64::new(1.0 / r[lam].cosh(), 0.0);
            g.row_mut(lam).mapv_inplace(|x| x * c);
        }
        let g = polar_unitary(&g)?;
        let mut v = CMat::zeros((n, n));
        let mut w = CMat::zeros((n, n));
        for lam in 0..n {
            let ch = C64::new(r[lam].cosh(), 0.0);
            let sh = C64::new(r[lam].sinh(), 0.0);
            for i in 0..n {
                for j in 0..n {
                    v[(i, j)] += f[(i, lam)] * ch * g[(lam, j)];
                    w[(i, j)] += f[(i, lam)] * sh * g[(lam, j)].conj();
                }
            }
        }
        Ok(BogoliubovPropagator { v, w, t_i: self.t_i, t_f: self.t_f })
    }
}

/// Trotter product of one-step exponentials over the trajectory.
pub fn trotter_propagate(
    traj: &QuadraticHamiltonianTrajectory,
    mode: TrotterMode,
) -> Result<BogoliubovPropagator, LinalgError> {
    traj.check_structure()?;
    let l = traj.modes();
    let steps = traj.samples() - 1;
    let half = C64::new(0.5, 0.0);
    let mut k = BogoliubovPropagator::identity(l);
    k.t_i = traj.t0;
    let mdt = C64::new(0.0, -traj.dt);
    let mut drift_budget = 0usize;
    for j in 0..steps {
        let (d, z) = match mode {
            TrotterMode::Midpoint => (
                (&traj.delta[j] + &traj.delta[j + 1]).mapv(|x| x * half),
                (&traj.zeta[j] + &traj.zeta[j + 1]).mapv(|x| x * half),
            ),
            TrotterMode::LeftEndpoint => (traj.delta[j].clone(), traj.zeta[j].clone()),
        };
        let a = build_generator(&d, &z);
        let step = matrix_exp(&a.mapv(|x| x * mdt));
        if step.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(LinalgError::Numeric("trotter: NaN during exponentiation".into(), f64::NAN));
        }
        let sv = step.slice(s![..l, ..l]).to_owned();
        let sw = step.slice(s![..l, l..]).to_owned();
        let stepk = BogoliubovPropagator { v: sv, w: sw, t_i: 0.0, t_f: 0.0 };
        k = stepk.compose(&k);
        drift_budget += 1;
        if drift_budget >= 64 {
            drift_budget = 0;
            let chk = k.check(f64::INFINITY)?;
            if chk.commute_residual.max(chk.identity_residual) > 5e-9 {
                k = k.resymplectify()?;
            }
        }
    }
    k.t_f = traj.t_final();
    let chk = k.check(f64::INFINITY)?;
    if chk.commute_residual.max(chk.identity_residual) > 5e-9 {
        k = k.resymplectify()?;
    }
    Ok(k)
}

/// First Magnus term of the low-gain joint amplitude: the trapezoid-rule time
/// integral of zeta. Requires Delta == 0 (rotate the frame away first).
pub fn magnus1_joint_amplitude(
    traj: &QuadraticHamiltonianTrajectory,
) -> Result<CMat, LinalgError> {
    let scale = traj.zeta.iter().map(one_norm).fold(1.0f64, f64::max);
    for (j, d) in traj.delta.iter().enumerate() {
        if one_norm(d) > 1e-12 * scale {
            return Err(LinalgError::Precondition(format!(
                "magnus1: Delta(t_{j}) nonzero; apply rotating_frame first"
            )));
        }
    }
    let l = traj.modes();
    let n = traj.samples();
    let mut j_bar = CMat::zeros((l, l));
    for (j, z) in traj.zeta.iter().enumerate() {
        let wgt = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        j_bar = j_bar + z.mapv(|x| x * C64::new(wgt * traj.dt, 0.0));
    }
    Ok(j_bar)
}

/// Move a constant-Delta trajectory to the interaction picture:
/// Delta -> 0 and zeta(t) -> P(t) zeta(t) P(t)^T with P(t) = exp(i Delta (t - t0)).
///
/// `conjugate_back` undoes the frame on the resulting propagator.
pub fn rotating_frame(
    traj: &QuadraticHamiltonianTrajectory,
) -> Result<QuadraticHamiltonianTrajectory, LinalgError> {
    let d0 = &traj.delta[0];
    let scale = one_norm(d0).max(1.0);
    for (j, d) in traj.delta.iter().enumerate() {
        if fro_norm(&(d - d0)) > 1e-12 * scale {
            return Err(LinalgError::Precondition(format!(
                "rotating_frame: Delta(t_{j}) differs from Delta(t_0); must be time-independent"
            )));
        }
    }
    let l = traj.modes();
    let mut zeta = Vec::with_capacity(traj.samples());
    for j in 0..traj.samples() {
        let t = traj.dt * j as f64;
        let p = matrix_exp(&d0.mapv(|x| x * C64::new(0.0, t)));
        let zt = p.dot(&traj.zeta[j]).dot(&p.t());
        let zt = (&zt + &zt.t().to_owned()) / C64::new(2.0, 0.0);
        zeta.push(zt);
    }
    QuadraticHamiltonianTrajectory::new(
        traj.t0,
        traj.dt,
        vec![CMat::zeros((l, l)); traj.samples()],
        zeta,
    )
}

/// Undo the interaction-picture frame of `rotating_frame` on a propagator
/// computed in that frame: V -> e^{-i Delta T} V, W -> e^{-i Delta T} W with
/// T the total evolution span.
pub fn conjugate_back(k: &BogoliubovPropagator, delta: &CMat) -> BogoliubovPropagator {
    let t = k.t_f - k.t_i;
    let p = matrix_exp(&delta.mapv(|x| x * C64::new(0.0, -t)));
    BogoliubovPropagator {
        v: p.dot(&k.v),
        w: p.dot(&k.w),
        t_i: k.t_i,
        t_f: k.t_f,
    }
}

/// Embed the signal/idler blocks of a non-degenerate (twin-beam) propagator
/// into the full (l_b + l_c)-mode space:
/// V = diag(V_bb, V_cc), W = [[0, W_bc], [W_cb, 0]].
pub fn nondegenerate_embed(
    v_bb: &CMat,
    w_bc: &CMat,
    w_cb: &CMat,
    v_cc: &CMat,
) -> Result<BogoliubovPropagator, LinalgError> {
    let lb = v_bb.nrows();
    let lc = v_cc.nrows();
    if v_bb.ncols() != lb || v_cc.ncols() != lc || w_bc.dim() != (lb, lc) || w_cb.dim() != (lc, lb)
    {
        return Err(LinalgError::Dimension("nondegenerate_embed: inconsistent blocks".into()));
    }
    let n = lb + lc;
    let mut v = CMat::zeros((n, n));
    let mut w = CMat::zeros((n, n));
    v.slice_mut(s![..lb, ..lb]).assign(v_bb);
    v.slice_mut(s![lb.., lb..]).assign(v_cc);
    w.slice_mut(s![..lb, lb..]).assign(w_bc);
    w.slice_mut(s![lb.., ..lb]).assign(w_cb);
    let k = BogoliubovPropagator { v, w, t_i: 0.0, t_f: 0.0 };
    let chk = k.check(1e-8)?;
    if !chk.pass {
        return Err(LinalgError::Precondition(format!(
            "nondegenerate_embed: blocks not symplectic (residuals {:.3e}, {:.3e})",
            chk.commute_residual, chk.identity_residual
        )));
    }
    Ok(k)
}
