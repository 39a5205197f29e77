//! Test-only helpers shared across the workspace: a brute-force Fock-space
//! integrator that serves as an independent oracle for the Gaussian machinery,
//! plus seeded random generators for matrices and propagators.
//!
//! The oracle truncates each mode at `cutoff` photons, builds the quadratic
//! Hamiltonian as a dense matrix, and integrates the Schrodinger equation with
//! classic RK4. Nothing here shares code paths with the production solvers.

use ndarray::Array1;
use ndarray_linalg::QR;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use squeezelab_core::propagator::QuadraticHamiltonianTrajectory;
use squeezelab_core::{CMat, CVec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Fock-space oracle
// ---------------------------------------------------------------------------

/// Dense truncated Fock space for a small number of modes.
pub struct FockSpace {
    pub modes: usize,
    pub cutoff: usize,
    /// Destruction operator for each mode, dimension cutoff^modes.
    pub a: Vec<CMat>,
}

impl FockSpace {
    pub fn new(modes: usize, cutoff: usize) -> Self {
        assert!(modes >= 1 && cutoff >= 2);
        let dim = cutoff.pow(modes as u32);
        // occupation of mode m in basis state s: (s / cutoff^m) % cutoff
        let stride = |m: usize| cutoff.pow(m as u32);
        let mut a = Vec::with_capacity(modes);
        for m in 0..modes {
            let mut op = CMat::zeros((dim, dim));
            for s in 0..dim {
                let occ = (s / stride(m)) % cutoff;
                if occ > 0 {
                    // a |..occ..> = sqrt(occ) |..occ-1..>
                    op[(s - stride(m), s)] = C64::new((occ as f64).sqrt(), 0.0);
                }
            }
            a.push(op);
        }
        Self { modes, cutoff, a }
    }

    pub fn dim(&self) -> usize {
        self.cutoff.pow(self.modes as u32)
    }

    pub fn vacuum(&self) -> CVec {
        let mut psi = CVec::zeros(self.dim());
        psi[0] = C64::new(1.0, 0.0);
        psi
    }

    /// H = sum Delta_ij a_i^dag a_j + (i/2) sum zeta_ij a_i^dag a_j^dag + h.c.
    /// chosen so that da/dt = -i Delta a + zeta a^dag in the Heisenberg
    /// picture, matching the Gaussian generator convention.
    pub fn hamiltonian(&self, delta: &CMat, zeta: &CMat) -> CMat {
        let dim = self.dim();
        let mut h = CMat::zeros((dim, dim));
        for i in 0..self.modes {
            let adi = self.a[i].t().mapv(|x| x.conj());
            for j in 0..self.modes {
                let term = adi.dot(&self.a[j]);
                h = h + term.mapv(|x| x * delta[(i, j)]);
                let adj = self.a[j].t().mapv(|x| x.conj());
                let sq = adi.dot(&adj);
                let coeff = C64::new(0.0, 0.5) * zeta[(i, j)];
                h = h + sq.mapv(|x| x * coeff);
                let coeff2 = C64::new(0.0, -0.5) * zeta[(i, j)].conj();
                h = h + self.a[j].dot(&self.a[i]).mapv(|x| x * coeff2);
            }
        }
        h
    }

    /// Integrate d psi/dt = -i H(t) psi from vacuum over the trajectory with
    /// RK4, `substeps` RK4 steps per trajectory interval (Hamiltonian linearly
    /// interpolated between samples).
    pub fn evolve_vacuum(&self, traj: &QuadraticHamiltonianTrajectory, substeps: usize) -> CVec {
        let mut psi = self.vacuum();
        let n = traj.samples();
        let dt = traj.dt / substeps as f64;
        let h_at = |seg: usize, frac: f64| -> CMat {
            let d0 = &traj.delta[seg];
            let d1 = &traj.delta[seg + 1];
            let z0 = &traj.zeta[seg];
            let z1 = &traj.zeta[seg + 1];
            let f = C64::new(frac, 0.0);
            let g = C64::new(1.0 - frac, 0.0);
            let d = d0.mapv(|x| x * g) + d1.mapv(|x| x * f);
            let z = z0.mapv(|x| x * g) + z1.mapv(|x| x * f);
            self.hamiltonian(&d, &z)
        };
        let minus_i = C64::new(0.0, -1.0);
        for seg in 0..n - 1 {
            for s in 0..substeps {
                let f0 = s as f64 / substeps as f64;
                let fh = (s as f64 + 0.5) / substeps as f64;
                let f1 = (s as f64 + 1.0) / substeps as f64;
                let h0 = h_at(seg, f0);
                let hh = h_at(seg, fh);
                let h1 = h_at(seg, f1);
                let k1 = h0.dot(&psi).mapv(|x| x * minus_i);
                let k2 = hh.dot(&(&psi + &k1.mapv(|x| x * C64::new(0.5 * dt, 0.0)))).mapv(|x| x * minus_i);
                let k3 = hh.dot(&(&psi + &k2.mapv(|x| x * C64::new(0.5 * dt, 0.0)))).mapv(|x| x * minus_i);
                let k4 = h1.dot(&(&psi + &k3.mapv(|x| x * C64::new(dt, 0.0)))).mapv(|x| x * minus_i);
                let incr = k1 + k2.mapv(|x| x * C64::new(2.0, 0.0)) + k3.mapv(|x| x * C64::new(2.0, 0.0)) + k4;
                psi = &psi + &incr.mapv(|x| x * C64::new(dt / 6.0, 0.0));
            }
        }
        psi
    }

    pub fn expectation(&self, psi: &CVec, op: &CMat) -> C64 {
        let v = op.dot(psi);
        psi.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Second moments (N, M) of a state vector.
    pub fn moments(&self, psi: &CVec) -> (CMat, CMat) {
        let l = self.modes;
        let mut n = CMat::zeros((l, l));
        let mut m = CMat::zeros((l, l));
        for i in 0..l {
            let adi = self.a[i].t().mapv(|x| x.conj());
            for j in 0..l {
                n[(i, j)] = self.expectation(psi, &adi.dot(&self.a[j]));
                m[(i, j)] = self.expectation(psi, &self.a[i].dot(&self.a[j]));
            }
        }
        (n, m)
    }

    /// Population left in the top Fock layer of any mode; large values mean
    /// the cutoff is too small for the reached gain.
    pub fn truncation_weight(&self, psi: &CVec) -> f64 {
        let stride = |m: usize| self.cutoff.pow(m as u32);
        let mut w = 0.0;
        for (s, amp) in psi.iter().enumerate() {
            for m in 0..self.modes {
                if (s / stride(m)) % self.cutoff == self.cutoff - 1 {
                    w += amp.norm_sqr();
                    break;
                }
            }
        }
        w
    }
}

// ---------------------------------------------------------------------------
// seeded random generators
// ---------------------------------------------------------------------------

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat {
    CMat::from_shape_fn((n, n), |_| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 2.0 * scale
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat {
    let a = random_complex_matrix(rng, n, scale);
    (&a + &a.t().mapv(|x| x.conj())) / C64::new(2.0, 0.0)
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMat {
    let a = random_complex_matrix(rng, n, scale);
    (&a + &a.t()) / C64::new(2.0, 0.0)
}

/// Haar-ish random unitary via QR of a Ginibre matrix with phase fix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let a = random_complex_matrix(rng, n, 1.0);
    let (q, r) = a.qr().expect("qr");
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random smooth trajectory: constant Hermitian Delta plus a pulsed symmetric
/// zeta with a Gaussian envelope, sampled on a uniform grid.
pub fn random_trajectory(
    rng: &mut ChaCha8Rng,
    modes: usize,
    samples: usize,
    t_final: f64,
    delta_scale: f64,
    zeta_scale: f64,
) -> QuadraticHamiltonianTrajectory {
    let delta0 = random_hermitian(rng, modes, delta_scale);
    let zeta0 = random_symmetric(rng, modes, zeta_scale);
    let dt = t_final / (samples - 1) as f64;
    let t_mid = 0.5 * t_final;
    let sigma = 0.2 * t_final;
    let mut delta = Vec::with_capacity(samples);
    let mut zeta = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = k as f64 * dt;
        let env = (-((t - t_mid) / sigma).powi(2) / 2.0).exp();
        delta.push(delta0.clone());
        zeta.push(zeta0.mapv(|x| x * C64::new(env, 0.0)));
    }
    QuadraticHamiltonianTrajectory::new(0.0, dt, delta, zeta).expect("trajectory")
}

/// Random exact Bogoliubov pair (V, W) = (F cosh r G, F sinh r G^*).
pub fn random_bogoliubov(rng: &mut ChaCha8Rng, n: usize, r_max: f64) -> (CMat, CMat) {
    let f = random_unitary(rng, n);
    let g = random_unitary(rng, n);
    let r: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * r_max).collect();
    let mut ch = CMat::zeros((n, n));
    let mut sh = CMat::zeros((n, n));
    for i in 0..n {
        ch[(i, i)] = C64::new(r[i].cosh(), 0.0);
        sh[(i, i)] = C64::new(r[i].sinh(), 0.0);
    }
    let v = f.dot(&ch).dot(&g);
    let w = f.dot(&sh).dot(&g.mapv(|x| x.conj()));
    (v, w)
}

/// Convenience: Array1<f64> of evenly spaced points.
pub fn linspace(a: f64, b: f64, n: usize) -> Array1<f64> {
    Array1::from_shape_fn(n, |i| a + (b - a) * i as f64 / (n - 1) as f64)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn assert_close(a: &CMat, b: &CMat, tol: f64, what: &str) {
    let d = max_abs_diff(a, b);
    assert!(d <= tol, "{what}: max abs diff {d:.3e} > {tol:.3e}");
}
