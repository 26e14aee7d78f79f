//! Step-index fiber: geometry, guided-mode eigenproblem, normalized mode
//! profiles and classical drive fields.

mod dispersion;
mod drive;
mod guided;
pub(crate) mod wave;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dispersion::{
    beta_derivative, beta_derivative_stencil, char_residual, guided_orders, list_guided_modes,
    solve_dispersion,
};
pub use drive::{set_power, Drive, DriveField, Polarization};
pub use guided::GuidedMode;

/// Radius and refractive indices of a two-layer cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberSpec {
    pub radius: f64,
    pub n1: f64,
    pub n2: f64,
}

impl FiberSpec {
    pub fn new(radius: f64, n1: f64, n2: f64) -> Result<Self> {
        let f = Self { radius, n1, n2 };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidFiber(format!("radius {} must be positive", self.radius)));
        }
        if !(self.n2 >= 1.0 && self.n1 > self.n2 && self.n1.is_finite()) {
            return Err(Error::InvalidFiber(format!(
                "indices must satisfy n1 > n2 >= 1 (n1 = {}, n2 = {})",
                self.n1, self.n2
            )));
        }
        Ok(())
    }

    /// Normalized frequency `V = k a √(n1² − n2²)`.
    pub fn v_number(&self, omega: f64) -> f64 {
        omega / crate::consts::C * self.radius * (self.n1 * self.n1 - self.n2 * self.n2).sqrt()
    }

    /// Refractive index at radius `r`.
    pub fn index_at(&self, r: f64) -> f64 {
        if r < self.radius {
            self.n1
        } else {
            self.n2
        }
    }
}

/// Guided-mode family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModeFamily {
    HE,
    EH,
    TE,
    TM,
}

impl ModeFamily {
    pub fn is_hybrid(self) -> bool {
        matches!(self, ModeFamily::HE | ModeFamily::EH)
    }
}

impl fmt::Display for ModeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModeFamily::HE => "HE",
            ModeFamily::EH => "EH",
            ModeFamily::TE => "TE",
            ModeFamily::TM => "TM",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ModeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HE" => Ok(ModeFamily::HE),
            "EH" => Ok(ModeFamily::EH),
            "TE" => Ok(ModeFamily::TE),
            "TM" => Ok(ModeFamily::TM),
            _ => Err(Error::InvalidArgument(format!("unknown mode family {s:?}"))),
        }
    }
}

/// Family and orders of a guided mode, without direction or polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeOrder {
    pub family: ModeFamily,
    pub l: u32,
    pub m: u32,
}

impl ModeOrder {
    pub fn new(family: ModeFamily, l: u32, m: u32) -> Result<Self> {
        let ok = match family {
            ModeFamily::HE | ModeFamily::EH => l >= 1,
            ModeFamily::TE | ModeFamily::TM => l == 0,
        };
        if !ok || m == 0 {
            return Err(Error::InvalidArgument(format!("no mode {family}{l}{m}")));
        }
        Ok(Self { family, l, m })
    }

    /// Valid polarization indices: `[1, -1]` for hybrid modes, `[0]` otherwise.
    pub fn polarizations(&self) -> &'static [i8] {
        if self.family.is_hybrid() {
            &[1, -1]
        } else {
            &[0]
        }
    }
}

impl fmt::Display for ModeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.family, self.l, self.m)
    }
}

/// Fully labeled guided mode: family, orders, direction `f` and polarization `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GuidedModeId {
    pub order: ModeOrder,
    pub f: i8,
    pub p: i8,
}

impl GuidedModeId {
    pub fn new(order: ModeOrder, f: i8, p: i8) -> Result<Self> {
        if f != 1 && f != -1 {
            return Err(Error::InvalidArgument(format!("direction f = {f}")));
        }
        if !order.polarizations().contains(&p) {
            return Err(Error::InvalidArgument(format!("polarization p = {p} for {order}")));
        }
        Ok(Self { order, f, p })
    }
}
