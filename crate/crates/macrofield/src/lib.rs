//! Coupled GDP/capital growth model.
//!
//! The crate is organised bottom-up:
//!
//! * [`dataset`] ingests annual national series and derives the ratio indicators.
//! * [`model`] defines the two-equation system and integrates it.
//! * [`analytic`] evaluates the closed-form constant-rate solutions.
//! * [`calibrate`] chains model points to currency and fits the phenomenological curves.
//! * [`diagnostics`] holds the quantity-equation, inflation, debt and phase analytics.
//! * [`multiworld`] couples several economies through transfer matrices.

// `!(x > 0.0)` is used on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod calibrate;
pub mod dataset;
pub mod diagnostics;
mod error;
pub mod model;
pub mod multiworld;
mod ode;

pub use error::{Error, ErrorClass, Result};

/// Guard for divisions by differences of series values.
pub const EPS_DIV: f64 = 1e-9;

/// Discriminant tolerance separating the closed-form branches.
pub const EPS_PHI: f64 = 1e-12;
