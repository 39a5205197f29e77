//! Gaussian quantum optics core: dense complex linear algebra, Bogoliubov
//! propagators built from quadratic Hamiltonians, Gaussian states, and
//! photon-counting / homodyne statistics.
//!
//! The library works in natural units (hbar = 1) internally; physical unit
//! conversions happen at the CLI boundary.

pub mod exec;
pub mod linalg;
pub mod propagator;
pub mod state;
pub mod stats;

pub use linalg::{CMat, CVec};
