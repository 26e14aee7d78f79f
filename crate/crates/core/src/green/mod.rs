//! Dyadic Green tensor of the dielectric cylinder.
//!
//! Conventions: the field of a point dipole `p` at `R′` is
//! `E(R) = k² G(R, R′; ω)·p / ε₀`, and `G = G⁽⁰⁾ + G⁽ᴿ⁾` with the
//! free-space part `G⁽⁰⁾ = (I + ∇∇/k₂²) e^{ik₂ρ}/(4πρ)` in the cladding.
//! Tensors are returned in mixed cylindrical bases: the row index refers to
//! the local basis at `R`, the column index to the local basis at `R′`.

mod free;
mod modesum;
mod scattered;

use serde::{Deserialize, Serialize};

use crate::cvec::{Mat3, Tensor3};
use crate::C64;

pub use free::im_free_space;
pub use modesum::{im_green_modesum, im_green_modesum_parts};
pub use scattered::{green_gradient, scattered_green, scattered_green_with_gradient, ContourOptions};

/// Point in cylindrical coordinates `(r, φ, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylPoint {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl CylPoint {
    pub fn new(r: f64, phi: f64, z: f64) -> Self {
        Self { r, phi, z }
    }

    pub fn cartesian(&self) -> [f64; 3] {
        [self.r * self.phi.cos(), self.r * self.phi.sin(), self.z]
    }
}

/// Green-tensor value at a pair of points and one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct GreenValue {
    /// `G_ij(R, R′)` (1/m).
    pub tensor: Mat3,
    /// `∂_k G_ij` with respect to the first argument, `k ∈ (r, φ/r, z)`
    /// components of the gradient (1/m²), when requested.
    pub gradient: Option<Tensor3>,
    pub at: (CylPoint, CylPoint),
    pub omega: C64,
}
