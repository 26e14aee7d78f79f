//! Radiation force on a two-level atom near an ultrathin step-index optical
//! fiber.
//!
//! The crate is organized bottom-up:
//!
//! * numerics: [`quad`], [`roots`], [`special`] (generic over [`Real`]),
//! * electromagnetics: [`fiber`] (guided modes and drive fields),
//!   [`radiation`] (continuum modes), [`green`] (scattered Green tensor of
//!   the cylinder and its mode-sum representation),
//! * atom physics: [`emission`] (coupling coefficients and decay rates),
//!   [`atom_state`] (Bloch steady state), [`forces`] (van der Waals
//!   potentials and all force terms),
//! * [`scan`]: configuration-driven position scans that write CSV files.
//!
//! All physical quantities are SI. Vectors and tensors are given in the
//! local cylindrical basis `(r̂, φ̂, ẑ)` at the point they refer to.

pub mod atom_state;
pub mod consts;
pub mod cvec;
pub mod emission;
pub mod error;
pub mod fiber;
pub mod forces;
pub mod green;
pub mod quad;
pub mod radiation;
pub mod real;
pub mod roots;
pub mod scan;
pub mod site;
pub mod special;

pub use error::{Error, Result};
pub use real::Real;

/// Double-precision complex scalar used by the physics layer.
pub type C64 = num_complex::Complex<f64>;

/// Gauss–Legendre rule in double precision.
pub type GaussLegendre64 = quad::GaussLegendre<f64>;
/// Gauss–Legendre rule in single precision.
pub type GaussLegendre32 = quad::GaussLegendre<f32>;
/// Adaptive quadrature options in double precision.
pub type AdaptiveOptions64 = quad::AdaptiveOptions<f64>;

/// Outgoing cylinder-function sequence in double precision.
pub type HankelSeq64 = special::HankelSeq<f64>;
/// Bloch steady state in double precision.
pub type SteadyState64 = atom_state::BlochSteadyState<f64>;
/// Bloch steady state in single precision.
pub type SteadyState32 = atom_state::BlochSteadyState<f32>;
