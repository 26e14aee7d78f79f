//! Classical guided drive fields with power normalization.

use serde::{Deserialize, Serialize};

use crate::cvec::{scale, Vec3, I};
use crate::error::{Error, Result};
use crate::C64;

use super::{FiberSpec, GuidedMode, ModeOrder};

/// Polarization of a guided drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    /// Quasicircular hybrid mode with circulation `p_L = ±1`.
    Circular(i8),
    /// Quasilinear hybrid mode with symmetry-axis angle `φ_pol` (rad).
    Linear(f64),
    /// TE and TM modes carry no polarization choice.
    None,
}

/// Drive configuration: which mode, direction, polarization, power and
/// bare detuning `Δ₀ = ω_L − ω₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveField {
    pub order: ModeOrder,
    pub f_l: i8,
    pub pol: Polarization,
    pub power: f64,
    pub detuning0: f64,
}

impl DriveField {
    pub fn validate(&self) -> Result<()> {
        if self.f_l != 1 && self.f_l != -1 {
            return Err(Error::InvalidArgument(format!("drive direction f_L = {}", self.f_l)));
        }
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(Error::InvalidArgument(format!("drive power {} W", self.power)));
        }
        let hybrid = self.order.family.is_hybrid();
        match self.pol {
            Polarization::Circular(p) if hybrid && (p == 1 || p == -1) => Ok(()),
            Polarization::Linear(a) if hybrid && a.is_finite() => Ok(()),
            Polarization::None if !hybrid => Ok(()),
            pol => Err(Error::PolarizationMismatch(format!(
                "{:?} for a {} drive",
                pol, self.order
            ))),
        }
    }
}

/// A drive resolved at its frequency: mode solved at `ω_L`, amplitude
/// constant `𝒜` fixed by the requested power.
#[derive(Debug, Clone)]
pub struct Drive {
    pub field: DriveField,
    pub mode: GuidedMode,
    /// `𝒜` (V); the profile itself carries units of 1/m.
    pub amplitude: f64,
}

impl Drive {
    pub fn new(fiber: &FiberSpec, field: DriveField, omega_l: f64) -> Result<Self> {
        field.validate()?;
        let mode = GuidedMode::solve(fiber, omega_l, field.order)?;
        let amplitude = set_power(&mode, field.power)?;
        Ok(Self {
            field,
            mode,
            amplitude,
        })
    }

    pub fn beta_l(&self) -> f64 {
        self.mode.beta
    }

    /// Field amplitude `𝓔` at `(r, φ, z)` in cylindrical components.
    pub fn amplitude_at(&self, r: f64, phi: f64, z: f64) -> Result<Vec3> {
        Ok(self.amplitude_with_gradient(r, phi, z)?.0)
    }

    /// `𝓔` and the partial derivatives `(∂_r, ∂_φ, ∂_z)` of its cylindrical
    /// components (basis vectors held fixed).
    pub fn amplitude_with_gradient(&self, r: f64, phi: f64, z: f64) -> Result<(Vec3, [Vec3; 3])> {
        let f = self.field.f_l;
        let l = self.mode.order.l as f64;
        let kz = f as f64 * self.mode.beta;
        let zphase = (I * kz * z).exp();
        let amp = C64::new(self.amplitude, 0.0);
        match self.field.pol {
            Polarization::Circular(p) => {
                let (e, de) = self.mode.profile_with_derivative(f, p, r)?;
                let ph = amp * zphase * (I * (p as f64) * l * phi).exp();
                let ev = scale(&e, ph);
                let dr = scale(&de, ph);
                let dphi = scale(&ev, I * (p as f64) * l);
                let dz = scale(&ev, I * kz);
                Ok((ev, [dr, dphi, dz]))
            }
            Polarization::None => {
                let (e, de) = self.mode.profile_with_derivative(f, 0, r)?;
                let ph = amp * zphase;
                let ev = scale(&e, ph);
                let dr = scale(&de, ph);
                let dz = scale(&ev, I * kz);
                Ok((ev, [dr, [C64::new(0.0, 0.0); 3], dz]))
            }
            Polarization::Linear(phi_pol) => {
                let (e, de) = self.mode.profile_with_derivative(f, 1, r)?;
                let ph = amp * zphase * std::f64::consts::SQRT_2;
                let (s, c) = (l * phi - phi_pol).sin_cos();
                let shape = |v: &Vec3, cs: f64, sn: f64| -> Vec3 {
                    [v[0] * cs * ph, I * v[1] * sn * ph, v[2] * cs * ph]
                };
                let ev = shape(&e, c, s);
                let dr = shape(&de, c, s);
                let dphi = shape(&e, -l * s, l * c);
                let dz = scale(&ev, I * kz);
                Ok((ev, [dr, dphi, dz]))
            }
        }
    }
}

/// Amplitude constant `𝒜` (V) for which the drive carries `power` (W).
pub fn set_power(mode: &GuidedMode, power: f64) -> Result<f64> {
    if !(power > 0.0) {
        return Err(Error::InvalidArgument(format!("power {power} W")));
    }
    let (inner, outer) = mode.power_per_unit_amplitude()?;
    Ok((power / (inner + outer).abs()).sqrt())
}
