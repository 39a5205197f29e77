//! Squeezed-light generation in nonlinear waveguides.
//!
//! Six processes are covered: SPDC, single-pump SFWM and dual-pump SFWM, each
//! producing either degenerate (DSV) or non-degenerate (NDSV) squeezed vacuum.
//! The quantum bands are discretized in the comoving wavenumber offset kappa
//! and propagated with the Bogoliubov machinery from `squeezelab_core`, with
//! classical pump mean fields supplied analytically or by split-step Fourier.
//!
//! An engineered "separable JSA" configuration is reproduced three ways: the
//! closed-form low-gain joint spectral amplitude, its leading time-ordering
//! correction (Magnus 3), and the full kappa-space solve.

pub mod analytic;
pub mod diagnostics;
pub mod generator;
pub mod grid;
pub mod io;
pub mod process;
pub mod pump;
pub mod solve;

pub use analytic::{analytic_lowgain_jsa, magnus3_schmidt, LowGainJsa, Magnus3Jsa, PmfSpec};
pub use diagnostics::{jsa_diagnostics, JsaDiagnostics};
pub use generator::{build_kappa_generator, KappaGenerator};
pub use grid::KappaGrid;
pub use process::{Band, PolingProfile, ProcessKind, PumpPulse, WaveguideProcess, SINC_GAUSS_S};
pub use pump::{evolve_pump_meanfield, PumpEnsemble};
pub use solve::{solve_waveguide, SolveOptions, WaveguideSolution};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum WaveguideError {
    #[error("invalid waveguide setup: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Linalg(#[from] squeezelab_core::linalg::LinalgError),
}

pub type Result<T> = std::result::Result<T, WaveguideError>;
