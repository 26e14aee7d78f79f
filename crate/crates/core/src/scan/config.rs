//! Scan configuration, read from and written back to TOML.
//!
//! All physical inputs are SI and carry their unit in the key name.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::consts::C;
use crate::emission::{AtomSpec, DipoleBasis, DipoleMoment};
use crate::fiber::{DriveField, FiberSpec, ModeFamily, ModeOrder, Polarization};
use crate::forces::DetuningModel;
use crate::C64;

use super::ScanError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub fiber: FiberConfig,
    pub atom: AtomConfig,
    #[serde(default = "default_model")]
    pub detuning_model: DetuningModel,
    #[serde(default)]
    pub drives: Vec<DriveConfig>,
    pub scan: ScanAxis,
    pub outputs: Vec<Output>,
}

fn default_model() -> DetuningModel {
    DetuningModel::Bare
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    pub radius_m: f64,
    pub n1: f64,
    pub n2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub wavelength_m: f64,
    pub gamma0_over_2pi_hz: f64,
    #[serde(default)]
    pub z_m: f64,
    pub dipoles: Vec<DipoleConfig>,
}

/// Dipole orientation `re + i·im`, normalized on use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DipoleConfig {
    pub label: String,
    pub basis: DipoleBasis,
    pub re: [f64; 3],
    #[serde(default)]
    pub im: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarizationKind {
    Linear,
    Circular,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub label: String,
    pub family: ModeFamily,
    pub l: u32,
    #[serde(default = "one")]
    pub m: u32,
    /// `f_L = ±1`.
    pub direction: i8,
    pub polarization: PolarizationKind,
    /// Symmetry-axis angle of a quasilinear drive.
    #[serde(default)]
    pub phi_pol_rad: f64,
    /// Circulation `p_L = ±1` of a quasicircular drive.
    #[serde(default = "one_i8")]
    pub circulation: i8,
    pub power_w: f64,
    #[serde(default)]
    pub detuning_over_2pi_hz: f64,
}

fn one() -> u32 {
    1
}

fn one_i8() -> i8 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axis", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScanAxis {
    /// Radial scan at fixed azimuth.
    R {
        r_over_a: [f64; 2],
        samples: usize,
        #[serde(default)]
        phi_rad: f64,
    },
    /// Azimuthal scan at fixed distance from the surface.
    Phi {
        r_minus_a_m: f64,
        phi_rad: [f64; 2],
        samples: usize,
    },
    /// Polar grid in the transverse plane, radius-major order.
    RPhi {
        r_over_a: [f64; 2],
        r_samples: usize,
        phi_rad: [f64; 2],
        phi_samples: usize,
    },
}

/// Quantity selectors; each one becomes a CSV file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Output {
    Rates,
    Rabi,
    Vdw,
    ForceTerms,
    Total,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::Rates => "rates",
            Output::Rabi => "rabi",
            Output::Vdw => "vdw",
            Output::ForceTerms => "force-terms",
            Output::Total => "total",
        }
    }
}

/// One scan point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub r: f64,
    pub phi: f64,
}

fn linspace(range: [f64; 2], n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64)
        .collect()
}

fn config_error(field: &str, msg: impl std::fmt::Display) -> ScanError {
    ScanError::Config(format!("{field}: {msg}"))
}

impl ScanConfig {
    pub fn from_toml(text: &str) -> Result<Self, ScanError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ScanError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scan configuration serializes")
    }

    pub fn fiber_spec(&self) -> Result<FiberSpec, ScanError> {
        let f = &self.fiber;
        FiberSpec::new(f.radius_m, f.n1, f.n2).map_err(|e| config_error("fiber", e))
    }

    pub fn omega0(&self) -> f64 {
        2.0 * PI * C / self.atom.wavelength_m
    }

    pub fn gamma0(&self) -> f64 {
        2.0 * PI * self.atom.gamma0_over_2pi_hz
    }

    pub fn dipole(&self, i: usize) -> Result<DipoleMoment, ScanError> {
        let d = &self.atom.dipoles[i];
        let o = [0, 1, 2].map(|k| C64::new(d.re[k], d.im[k]));
        DipoleMoment::from_linewidth(o, d.basis, self.omega0(), self.gamma0())
            .map_err(|e| config_error(&format!("atom.dipoles[{i}]"), e))
    }

    pub fn atom_at(&self, dipole: DipoleMoment, p: GridPoint) -> AtomSpec {
        AtomSpec {
            omega0: self.omega0(),
            gamma0: self.gamma0(),
            dipole,
            r: p.r,
            phi: p.phi,
            z: self.atom.z_m,
        }
    }

    pub fn drive_field(&self, i: usize) -> Result<DriveField, ScanError> {
        let d = &self.drives[i];
        let field = format!("drives[{i}]");
        let order = ModeOrder::new(d.family, d.l, d.m).map_err(|e| config_error(&field, e))?;
        let pol = match d.polarization {
            PolarizationKind::Linear => Polarization::Linear(d.phi_pol_rad),
            PolarizationKind::Circular => Polarization::Circular(d.circulation),
            PolarizationKind::None => Polarization::None,
        };
        let f = DriveField {
            order,
            f_l: d.direction,
            pol,
            power: d.power_w,
            detuning0: 2.0 * PI * d.detuning_over_2pi_hz,
        };
        f.validate().map_err(|e| config_error(&field, e))?;
        Ok(f)
    }

    /// Scan points in output order.
    pub fn grid(&self) -> Vec<GridPoint> {
        let a = self.fiber.radius_m;
        match &self.scan {
            ScanAxis::R {
                r_over_a,
                samples,
                phi_rad,
            } => linspace(*r_over_a, *samples)
                .into_iter()
                .map(|x| GridPoint { r: x * a, phi: *phi_rad })
                .collect(),
            ScanAxis::Phi {
                r_minus_a_m,
                phi_rad,
                samples,
            } => linspace(*phi_rad, *samples)
                .into_iter()
                .map(|phi| GridPoint {
                    r: a + r_minus_a_m,
                    phi,
                })
                .collect(),
            ScanAxis::RPhi {
                r_over_a,
                r_samples,
                phi_rad,
                phi_samples,
            } => {
                let phis = linspace(*phi_rad, *phi_samples);
                linspace(*r_over_a, *r_samples)
                    .into_iter()
                    .flat_map(|x| phis.iter().map(move |&phi| GridPoint { r: x * a, phi }))
                    .collect()
            }
        }
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        self.fiber_spec()?;
        let at = &self.atom;
        if !(at.wavelength_m > 0.0 && at.wavelength_m.is_finite()) {
            return Err(config_error("atom.wavelength_m", "must be positive"));
        }
        if !(at.gamma0_over_2pi_hz > 0.0 && at.gamma0_over_2pi_hz.is_finite()) {
            return Err(config_error("atom.gamma0_over_2pi_hz", "must be positive"));
        }
        if at.dipoles.is_empty() {
            return Err(config_error("atom.dipoles", "at least one dipole is required"));
        }
        for i in 0..at.dipoles.len() {
            self.dipole(i)?;
        }
        for i in 0..self.drives.len() {
            self.drive_field(i)?;
        }
        if self.outputs.is_empty() {
            return Err(config_error("outputs", "no quantity selected"));
        }
        for o in &self.outputs {
            if matches!(o, Output::Rabi | Output::Total) && self.drives.is_empty() {
                return Err(config_error("outputs", format!("{} needs at least one drive", o.name())));
            }
        }
        let check_r = |field: &str, range: [f64; 2]| {
            if !(range[0] > 1.0 && range[1] > 1.0 && range.iter().all(|x| x.is_finite())) {
                Err(config_error(field, "radii must lie outside the fiber (r/a > 1)"))
            } else {
                Ok(())
            }
        };
        let check_n = |field: &str, n: usize| {
            if n < 2 {
                Err(config_error(field, "at least 2 samples are required"))
            } else {
                Ok(())
            }
        };
        match &self.scan {
            ScanAxis::R {
                r_over_a, samples, ..
            } => {
                check_r("scan.r_over_a", *r_over_a)?;
                check_n("scan.samples", *samples)?;
            }
            ScanAxis::Phi {
                r_minus_a_m,
                samples,
                phi_rad,
            } => {
                if !(*r_minus_a_m > 0.0 && r_minus_a_m.is_finite()) {
                    return Err(config_error("scan.r_minus_a_m", "must be positive"));
                }
                if !phi_rad.iter().all(|x| x.is_finite()) {
                    return Err(config_error("scan.phi_rad", "must be finite"));
                }
                check_n("scan.samples", *samples)?;
            }
            ScanAxis::RPhi {
                r_over_a,
                r_samples,
                phi_rad,
                phi_samples,
            } => {
                check_r("scan.r_over_a", *r_over_a)?;
                check_n("scan.r_samples", *r_samples)?;
                check_n("scan.phi_samples", *phi_samples)?;
                if !phi_rad.iter().all(|x| x.is_finite()) {
                    return Err(config_error("scan.phi_rad", "must be finite"));
                }
            }
        }
        Ok(())
    }
}
