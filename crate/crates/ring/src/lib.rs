//! Squeezed-light generation in ring resonators.
//!
//! A three-resonance ring model (signal/idler plus one or two pumps, each
//! resonance coupled to a bus channel and an optional "phantom" loss channel)
//! is driven classically through nonlinear pump ODEs and quantum mechanically
//! through 2x2 Green functions for the intracavity signal/idler pair. Output
//! two-time moments follow from the Green function and the input-output
//! relation, and CW runs are condensed into homodyne squeezing spectra.

pub mod analytic;
pub mod generator;
pub mod green;
pub mod io;
pub mod model;
pub mod moments;
pub mod pump;
pub mod spectrum;

pub use analytic::{delta_pump_analytic, DeltaPumpReport};
pub use generator::{build_ring_generator, RingGenerator};
pub use green::{green_function, GreenFunction};
pub use model::{
    gamma_from_sigma, linear_ring_metrics, spm_shift_per_photon, LinearRingMetrics, Resonance,
    RingModel, RingScheme, LAMBDA_PHOTONIC_MOLECULE,
};
pub use moments::{cavity_occupations, ring_moments, CavityOccupations, TwoTimeMoments};
pub use pump::{cw_steady_state, pump_cavity_dynamics, RingDrive};
pub use spectrum::{squeezing_spectrum, SqueezingSpectrum};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("invalid ring setup: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Linalg(#[from] squeezelab_core::linalg::LinalgError),
}

pub type Result<T> = std::result::Result<T, RingError>;
