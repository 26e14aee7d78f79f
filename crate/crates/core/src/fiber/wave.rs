//! Transverse field components of a cylindrical wave `∝ e^{i(βz + lφ − ωt)}`
//! from its axial components `E_z` and `η_z = Z₀H_z` in a homogeneous region.

use crate::cvec::{Vec3, I};
use crate::C64;

/// Axial components and their first two radial derivatives at one radius.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Axial {
    pub ez: C64,
    pub dez: C64,
    pub d2ez: C64,
    pub hz: C64,
    pub dhz: C64,
    pub d2hz: C64,
}

/// Electric field, scaled magnetic field `Z₀H`, and radial derivative of
/// the electric field, all in cylindrical components.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WaveFields {
    pub e: Vec3,
    pub eta: Vec3,
    pub de: Vec3,
}

/// `kappa2 = n²k² − β²` is the transverse wavenumber squared of the region.
pub(crate) fn build(l: f64, beta: C64, k: C64, nsq: f64, kappa2: C64, r: f64, ax: &Axial) -> WaveFields {
    let inv = C64::new(1.0, 0.0) / kappa2;
    let lk = k * l;
    let bl = beta * l;
    let er = inv * (I * beta * ax.dez - lk / r * ax.hz);
    let ephi = inv * (-bl / r * ax.ez - I * k * ax.dhz);
    let hr = inv * (I * beta * ax.dhz + lk * nsq / r * ax.ez);
    let hphi = inv * (-bl / r * ax.hz + I * k * nsq * ax.dez);
    let der = inv * (I * beta * ax.d2ez - lk * (ax.dhz / r - ax.hz / (r * r)));
    let dephi = inv * (-bl * (ax.dez / r - ax.ez / (r * r)) - I * k * ax.d2hz);
    WaveFields {
        e: [er, ephi, ax.ez],
        eta: [hr, hphi, ax.hz],
        de: [der, dephi, ax.dez],
    }
}
