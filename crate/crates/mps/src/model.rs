//! The cavity-waveguide discretization and the resonator's polynomial
//! Hamiltonian.

use crate::{MpsError, Result};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use squeezelab_core::CMat;

/// Time envelope multiplying a ladder term's amplitude.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Envelope {
    Constant,
    Gaussian { center: f64, width: f64 },
}

impl Envelope {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Envelope::Constant => 1.0,
            Envelope::Gaussian { center, width } => (-0.5 * ((t - center) / width).powi(2)).exp(),
        }
    }
}

mod c64_pair {
    use num_complex::Complex64 as C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// One monomial amplitude * envelope(t) * (a^dag)^p a^q. Terms are literal:
/// Hermitian conjugates must be listed explicitly, and the assembled matrix
/// is validated to be Hermitian.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LadderTerm {
    pub dag_power: u32,
    pub a_power: u32,
    /// Complex amplitude as [re, im].
    #[serde(with = "c64_pair")]
    pub amplitude: C64,
    pub envelope: Envelope,
}

impl LadderTerm {
    pub fn degree(&self) -> u32 {
        self.dag_power + self.a_power
    }
}

/// Nonlinear resonator Hamiltonian H_NL(t) as a sum of ladder monomials.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PolynomialHamiltonian {
    pub terms: Vec<LadderTerm>,
}

impl PolynomialHamiltonian {
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(LadderTerm::degree).max().unwrap_or(0)
    }

    /// Assemble the cutoff x cutoff matrix of H_NL(t).
    pub fn matrix(&self, cutoff: usize, t: f64) -> CMat {
        let a = annihilation(cutoff);
        let adag = a.t().mapv(|z| z.conj());
        let mut h: CMat = Array2::zeros((cutoff, cutoff));
        for term in &self.terms {
            let mut op: CMat = Array2::eye(cutoff);
            for _ in 0..term.dag_power {
                op = adag.dot(&op);
            }
            for _ in 0..term.a_power {
                op = op.dot(&a);
            }
            let c = term.amplitude * term.envelope.value(t);
            h = h + op.mapv(|z| z * c);
        }
        h
    }
}

/// Truncated annihilation operator: a|n> = sqrt(n)|n-1>.
pub fn annihilation(cutoff: usize) -> CMat {
    let mut a: CMat = Array2::zeros((cutoff, cutoff));
    for n in 1..cutoff {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// A single resonance of linewidth parameter gamma coupled to a waveguide of
/// group velocity v, discretized into `bins` time bins of duration dt.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CavityWaveguideModel {
    /// Resonator detuning (coefficient of a^dag a).
    pub delta: f64,
    /// Coupling amplitude; the per-step exchange angle is gamma sqrt(dt/v).
    pub gamma: f64,
    /// Waveguide group velocity.
    pub velocity: f64,
    /// Step duration (one bin).
    pub dt: f64,
    /// Number of waveguide bins, i.e. number of steps.
    pub bins: usize,
    /// Fock cutoff per site.
    pub cutoff: usize,
    /// Bond-dimension cap.
    pub d_max: usize,
    /// Relative truncation threshold for each two-site SVD.
    pub epsilon: f64,
    /// Total discarded-weight budget; exceeding it flags a warning.
    pub discard_budget: f64,
    pub h_nl: PolynomialHamiltonian,
}

impl CavityWaveguideModel {
    pub fn new(delta: f64, gamma: f64, velocity: f64, dt: f64, bins: usize) -> Self {
        Self {
            delta,
            gamma,
            velocity,
            dt,
            bins,
            cutoff: 8,
            d_max: 32,
            epsilon: 1e-10,
            discard_budget: 1e-6,
            h_nl: PolynomialHamiltonian::default(),
        }
    }

    /// Exchange angle per step.
    pub fn theta(&self) -> f64 {
        self.gamma * (self.dt / self.velocity).sqrt()
    }

    /// Amplitude decay rate of the resonator, gamma^2 / (2 v).
    pub fn decay_rate(&self) -> f64 {
        self.gamma * self.gamma / (2.0 * self.velocity)
    }

    pub fn total_time(&self) -> f64 {
        self.dt * self.bins as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(MpsError::Invalid("dt must be positive".into()));
        }
        if !(self.velocity > 0.0) {
            return Err(MpsError::Invalid("group velocity must be positive".into()));
        }
        if self.bins == 0 {
            return Err(MpsError::Invalid("need at least one waveguide bin".into()));
        }
        if self.cutoff < 2 {
            return Err(MpsError::Invalid("Fock cutoff must be at least 2".into()));
        }
        if self.d_max == 0 {
            return Err(MpsError::Invalid("bond-dimension cap must be positive".into()));
        }
        if !(self.epsilon >= 0.0) {
            return Err(MpsError::Invalid("truncation threshold must be nonnegative".into()));
        }
        let theta = self.theta();
        if !(theta.abs() <= 0.5) {
            return Err(MpsError::Invalid(format!(
                "exchange angle {theta:.3} per step is too large; shrink dt or gamma"
            )));
        }
        // literal ladder terms must assemble to a Hermitian matrix
        for j in 0..self.bins {
            let t = self.dt * j as f64;
            let h = self.h_nl.matrix(self.cutoff, t);
            let scale = h.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
            let res = (0..self.cutoff)
                .flat_map(|i| (0..self.cutoff).map(move |j| (i, j)))
                .map(|(i, j)| (h[(i, j)] - h[(j, i)].conj()).norm())
                .fold(0.0f64, f64::max);
            if res > 1e-10 * scale {
                return Err(MpsError::Invalid(format!(
                    "H_NL is not Hermitian at t = {t:.3e} (residual {res:.3e})"
                )));
            }
        }
        Ok(())
    }
}
