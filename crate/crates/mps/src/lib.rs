//! Matrix-product-state simulation of a single nonlinear resonance coupled
//! to a discretized waveguide.
//!
//! The waveguide is chopped into bins of duration dt that interact with the
//! resonator one at a time through an exchange gate of angle
//! theta = gamma sqrt(dt / v). Each step applies the resonator's single-site
//! gate, the two-site exchange, and a SWAP that carries the resonator one
//! site to the right, so the circuit stays nearest-neighbor and the state
//! stays a chain. Arbitrary polynomial Hamiltonians on the resonator are
//! exponentiated densely in the truncated Fock basis, which is what makes
//! this path reach beyond the Gaussian solvers.

pub mod crosscheck;
pub mod gates;
pub mod model;
pub mod simulate;
pub mod state;

pub use crosscheck::{gaussian_crosscheck, CrosscheckReport};
pub use model::{CavityWaveguideModel, Envelope, LadderTerm, PolynomialHamiltonian};
pub use simulate::{simulate_cavity_mps, SimulationTrace, StepRecord};
pub use state::{tensor_to_mps, MPSState};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MpsError {
    #[error("invalid cavity-waveguide setup: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error(
        "Fock cutoff saturated at step {step}: population {population:.3e} at the top level"
    )]
    CutoffSaturated { step: usize, population: f64 },
    #[error(transparent)]
    Linalg(#[from] squeezelab_core::linalg::LinalgError),
}

pub type Result<T> = std::result::Result<T, MpsError>;
