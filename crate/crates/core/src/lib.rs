//! Steady-state solver for globally hyperbolic moment models of the
//! Boltzmann-BGK family in one spatial dimension, accelerated by a
//! nonlinear multi-level moment (NMLM) iteration that corrects a high-order
//! model with lower-order ones.
//!
//! The crate is organised bottom-up:
//!
//! - [`moment`]: multi-indices, Hermite bases, basis-parameter projection,
//!   macroscopic quantities and equilibrium coefficients.
//! - [`kinetic`]: mesh, linear reconstruction, HLL flux, Maxwell walls and the
//!   per-cell residual operator.
//! - [`smoother`]: Heun's two-stage pseudo-time iteration.
//! - [`multilevel`]: order sequences, restriction, correction and NMLM cycles.
//! - [`benchmarks`]: Couette, Poiseuille and Fourier flows plus sweeps.
//! - [`oracle`] and [`verify`]: tensor Gauss-Hermite quadrature used to check
//!   the closed-form routines.

pub mod benchmarks;
pub mod error;
pub mod kinetic;
pub mod moment;
pub mod multilevel;
pub mod oracle;
pub mod record;
pub mod smoother;
pub mod verify;

pub use error::{Error, Result};
