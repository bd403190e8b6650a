//! Convection boundedness diagnostics for finite-volume reconstruction schemes.
//!
//! The crate maps a reconstruction scheme onto its normalised variable diagram
//! (NVD) across a perfect isolated discontinuity, derives the largest CFL number
//! for which one explicit Euler step keeps that discontinuity bounded, and runs
//! 1D/2D scalar advection problems to check the prediction.
//!
//! Modules:
//! - [`schemes`]: face reconstruction kernels (upwind, THINC, clipped THINC,
//!   WENO-JS5, WENO-Z5, TENO5).
//! - [`nvd`]: diagram sampling, boundedness report, one-step oracle.
//! - [`solver`]: periodic 1D transport and 2D solid-body rotation.
//! - [`metrics`]: bound excursions and L1 error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod metrics;
pub mod nvd;
pub mod schemes;
pub mod solver;

pub use error::{Error, Result};
