//! Dense gate matrices in the truncated Fock basis.
//!
//! Everything is built by matrix exponentiation of the generator, so the same
//! machinery serves arbitrary polynomial Hamiltonians. Two-site matrices use
//! the row-major index i_left * c + i_right.

use crate::model::{annihilation, CavityWaveguideModel};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use squeezelab_core::linalg::matrix_exp;
use squeezelab_core::CMat;

/// Resonator gate V0(t) = exp(-i dt [delta a^dag a + H_NL(t)]).
pub fn single_site_gate(model: &CavityWaveguideModel, t: f64) -> CMat {
    let c = model.cutoff;
    let mut h = model.h_nl.matrix(c, t);
    for n in 0..c {
        h[(n, n)] += model.delta * n as f64;
    }
    matrix_exp(&h.mapv(|z| z * C64::new(0.0, -model.dt)))
}

/// Kronecker product with the left factor on the slow index.
fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out: CMat = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Exchange gate B = exp(theta (a b^dag - a^dag b)) with a on the left site.
pub fn exchange_gate(theta: f64, cutoff: usize) -> CMat {
    let a = annihilation(cutoff);
    let adag = a.t().mapv(|z| z.conj());
    let gen = kron(&a, &adag) - kron(&adag, &a);
    matrix_exp(&gen.mapv(|z| z * theta))
}

/// SWAP of two sites with equal cutoff.
pub fn swap_gate(cutoff: usize) -> CMat {
    let d = cutoff * cutoff;
    let mut s: CMat = Array2::zeros((d, d));
    for i in 0..cutoff {
        for j in 0..cutoff {
            s[(j * cutoff + i, i * cutoff + j)] = C64::new(1.0, 0.0);
        }
    }
    s
}

/// The per-step two-site gate: exchange with the fresh bin, then SWAP so the
/// resonator moves one site to the right.
pub fn step_gate(theta: f64, cutoff: usize) -> CMat {
    swap_gate(cutoff).dot(&exchange_gate(theta, cutoff))
}
