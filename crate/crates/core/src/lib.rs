//! Spectral simulator for the linearized compressible Navier-Stokes-Poisson
//! system around planar Couette flow on `T x R`.
//!
//! Each Fourier mode `(k, xi)` of the perturbation evolves independently in
//! the sheared frame `X = x - y t`. The crate integrates those mode
//! systems, evaluates the weighted energies used in the stability analysis
//! and checks decay and growth envelopes numerically.

// NaN must fail the parameter checks, so `!(x > 0.0)` is intended
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod energy;
pub mod error;
pub mod harness;
pub mod numeric;
pub mod observables;
pub mod params;
pub mod symbols;

pub use dynamics::{ModeState, Trajectory, C64};
pub use error::{Error, Result};
pub use observables::{SpectralEnsemble, XiGrid};
pub use params::{Mode, PhysParams, Regime, Species};
