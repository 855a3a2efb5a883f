//! Relative extremal functions, cross envelopes and separately holomorphic
//! extension in one and two complex variables.
//!
//! The crate is `no_std` (with `alloc`). The `std` feature only switches the
//! error types to implement `std::error::Error`; `parallel` spreads the grid
//! sweeps and the Carleman quadrature over a rayon pool. Results do not depend
//! on the number of workers.
//!
//! Module map:
//!
//! * [`arcs`]: finite unions of arcs on the unit circle.
//! * [`potential`]: closed-form extremal function of a boundary set on the
//!   unit disc, its harmonic conjugate, Stolz angles and angular limits.
//! * [`grid`]: Dirichlet relaxation on planar grid domains, level sets and the
//!   disc-functional check.
//! * [`cross`]: 2-fold crosses and their envelopes.
//! * [`extension`]: the Gonchar-Carleman operator and Cauchy reconstructions.
//! * [`conformal`]: zipper conformal maps of level-set components.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arcs;
pub mod conformal;
pub mod cross;
mod error;
pub mod extension;
pub mod grid;
pub mod math;
mod par;
pub mod potential;
pub mod quadrature;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// A point of the complex plane.
pub type Point = Complex64;

/// 2π.
pub const TAU: f64 = core::f64::consts::TAU;
