//! Green functions dG/dt = M(t) G, G(t0, t0) = I, integrated column-start by
//! column-start with RK4. Entry (i, j) of each component matrix is G(t_i, t_j)
//! for i >= j; the strictly upper triangle is zero by convention.

use crate::generator::RingGenerator;
use crate::{Result, RingError};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use squeezelab_core::exec::map_indexed;

#[derive(Debug, Clone)]
pub struct GreenFunction {
    pub times: Array1<f64>,
    pub g11: Array2<C64>,
    pub g12: Array2<C64>,
    pub g21: Array2<C64>,
    pub g22: Array2<C64>,
}

impl GreenFunction {
    /// G(t_i, t_j) as a 2x2 array, identity on the diagonal.
    pub fn at(&self, i: usize, j: usize) -> [C64; 4] {
        [self.g11[(i, j)], self.g12[(i, j)], self.g21[(i, j)], self.g22[(i, j)]]
    }

    /// || G(t_k, t_i) - G(t_k, t_j) G(t_j, t_i) || for k >= j >= i.
    pub fn composition_residual(&self, k: usize, j: usize, i: usize) -> f64 {
        let a = self.at(k, j);
        let b = self.at(j, i);
        let direct = self.at(k, i);
        let prod = [
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ];
        direct
            .iter()
            .zip(&prod)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

fn mul_add(m: &[C64; 4], g: &[C64; 4]) -> [C64; 4] {
    [
        m[0] * g[0] + m[1] * g[2],
        m[0] * g[1] + m[1] * g[3],
        m[2] * g[0] + m[3] * g[2],
        m[2] * g[1] + m[3] * g[3],
    ]
}

fn axpy(g: &[C64; 4], k: &[C64; 4], s: f64) -> [C64; 4] {
    [g[0] + k[0] * s, g[1] + k[1] * s, g[2] + k[2] * s, g[3] + k[3] * s]
}

/// Integrate the Green function on the generator's time grid.
pub fn green_function(gen: &RingGenerator) -> Result<GreenFunction> {
    let times = gen.times().clone();
    let nt = times.len();
    let dt = times[1] - times[0];
    for j in 1..nt {
        if (times[j] - times[j - 1] - dt).abs() > 1e-9 * dt {
            return Err(RingError::Invalid("green function needs a uniform time grid".into()));
        }
    }
    if gen.max_entry() * dt > 0.8 {
        return Err(RingError::Numeric(format!(
            "time step {dt:.3e} too large for the generator norm {:.3e}",
            gen.max_entry()
        )));
    }

    // one RK4 trajectory per start index, independent across columns
    let columns: Vec<Vec<[C64; 4]>> = map_indexed(nt, |j| {
        let mut col = Vec::with_capacity(nt - j);
        let mut g = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        col.push(g);
        for i in j..nt - 1 {
            let t = times[i];
            let m0 = gen.m_at(t);
            let mh = gen.m_at(t + 0.5 * dt);
            let m1 = gen.m_at(t + dt);
            let k1 = mul_add(&m0, &g);
            let k2 = mul_add(&mh, &axpy(&g, &k1, 0.5 * dt));
            let k3 = mul_add(&mh, &axpy(&g, &k2, 0.5 * dt));
            let k4 = mul_add(&m1, &axpy(&g, &k3, dt));
            for c in 0..4 {
                g[c] += (k1[c] + k2[c] * 2.0 + k3[c] * 2.0 + k4[c]) * (dt / 6.0);
            }
            col.push(g);
        }
        col
    });

    let mut g11 = Array2::zeros((nt, nt));
    let mut g12 = Array2::zeros((nt, nt));
    let mut g21 = Array2::zeros((nt, nt));
    let mut g22 = Array2::zeros((nt, nt));
    for (j, col) in columns.iter().enumerate() {
        for (off, g) in col.iter().enumerate() {
            let i = j + off;
            g11[(i, j)] = g[0];
            g12[(i, j)] = g[1];
            g21[(i, j)] = g[2];
            g22[(i, j)] = g[3];
        }
    }
    Ok(GreenFunction { times, g11, g12, g21, g22 })
}
