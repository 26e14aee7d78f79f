//! Bundled scans for figures 2 to 21.
//!
//! Common parameters: fiber radius 350 nm, core index 1.4537 in vacuum,
//! transition wavelength 780 nm, `γ₀/2π = 6.065 MHz`, atom on the x axis.
//! Radial scans share one grid so that per-radius tensors are reused across
//! scenarios run with the same [`SiteCache`].

use std::f64::consts::PI;

use crate::fiber::ModeFamily;
use crate::forces::DetuningModel;

use super::{
    run_scan, AtomConfig, DipoleConfig, DriveConfig, FiberConfig, Output, PolarizationKind, ScanAxis,
    ScanConfig, ScanError, SiteCache, Table,
};

/// One figure: a list of panels, each a complete scan.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub summary: String,
    pub panels: Vec<ScanConfig>,
}

fn fiber() -> FiberConfig {
    FiberConfig {
        radius_m: 350e-9,
        n1: 1.4537,
        n2: 1.0,
    }
}

fn dipole(label: &str, basis: crate::emission::DipoleBasis, re: [f64; 3], im: [f64; 3]) -> DipoleConfig {
    DipoleConfig {
        label: label.into(),
        basis,
        re,
        im,
    }
}

fn cart(label: &str, re: [f64; 3], im: [f64; 3]) -> DipoleConfig {
    dipole(label, crate::emission::DipoleBasis::Cartesian, re, im)
}

fn cyl(label: &str, re: [f64; 3]) -> DipoleConfig {
    dipole(label, crate::emission::DipoleBasis::Cylindrical, re, [0.0; 3])
}

fn x() -> DipoleConfig {
    cart("x", [1.0, 0.0, 0.0], [0.0; 3])
}

fn y() -> DipoleConfig {
    cart("y", [0.0, 1.0, 0.0], [0.0; 3])
}

fn z() -> DipoleConfig {
    cart("z", [0.0, 0.0, 1.0], [0.0; 3])
}

/// `(i x̂ − ẑ)/√2`
fn ix_minus_z() -> DipoleConfig {
    cart("ix-z", [0.0, 0.0, -1.0], [1.0, 0.0, 0.0])
}

fn radial_set() -> Vec<DipoleConfig> {
    vec![cyl("r", [1.0, 0.0, 0.0]), cyl("phi", [0.0, 1.0, 0.0]), cyl("z", [0.0, 0.0, 1.0])]
}

fn atom(dipoles: Vec<DipoleConfig>) -> AtomConfig {
    AtomConfig {
        wavelength_m: 780e-9,
        gamma0_over_2pi_hz: 6.065e6,
        z_m: 0.0,
        dipoles,
    }
}

#[derive(Clone, Copy)]
enum Mode {
    He11,
    Te01,
    Tm01,
    He21,
}

const ALL_MODES: [Mode; 4] = [Mode::He11, Mode::Te01, Mode::Tm01, Mode::He21];

fn drive(mode: Mode, direction: i8, power_w: f64, detuning_over_2pi_hz: f64) -> DriveConfig {
    let (family, l, name) = match mode {
        Mode::He11 => (ModeFamily::HE, 1, "HE11"),
        Mode::Te01 => (ModeFamily::TE, 0, "TE01"),
        Mode::Tm01 => (ModeFamily::TM, 0, "TM01"),
        Mode::He21 => (ModeFamily::HE, 2, "HE21"),
    };
    let polarization = if family.is_hybrid() {
        PolarizationKind::Linear
    } else {
        PolarizationKind::None
    };
    DriveConfig {
        label: format!("{name}{}", if direction > 0 { "+" } else { "-" }),
        family,
        l,
        m: 1,
        direction,
        polarization,
        phi_pol_rad: 0.0,
        circulation: 1,
        power_w,
        detuning_over_2pi_hz,
    }
}

const P_WEAK: f64 = 1e-12;
const P_TOTAL: f64 = 100e-12;
const DELTA_TOTAL: f64 = 10e6;

fn radial() -> ScanAxis {
    ScanAxis::R {
        r_over_a: [1.05, 4.0],
        samples: 60,
        phi_rad: 0.0,
    }
}

fn azimuthal() -> ScanAxis {
    ScanAxis::Phi {
        r_minus_a_m: 200e-9,
        phi_rad: [0.0, 2.0 * PI],
        samples: 73,
    }
}

fn plane() -> ScanAxis {
    ScanAxis::RPhi {
        r_over_a: [1.05, 4.0],
        r_samples: 60,
        phi_rad: [0.0, 2.0 * PI],
        phi_samples: 37,
    }
}

struct Panel {
    name: String,
    description: &'static str,
    dipoles: Vec<DipoleConfig>,
    drives: Vec<DriveConfig>,
    model: DetuningModel,
    scan: ScanAxis,
    output: Output,
}

impl Panel {
    fn config(self) -> ScanConfig {
        ScanConfig {
            name: self.name,
            description: self.description.into(),
            fiber: fiber(),
            atom: atom(self.dipoles),
            detuning_model: self.model,
            drives: self.drives,
            scan: self.scan,
            outputs: vec![self.output],
        }
    }
}

fn panel(
    name: impl Into<String>,
    description: &'static str,
    dipoles: Vec<DipoleConfig>,
    drives: Vec<DriveConfig>,
    scan: ScanAxis,
    output: Output,
) -> Panel {
    Panel {
        name: name.into(),
        description,
        dipoles,
        drives,
        model: DetuningModel::Bare,
        scan,
        output,
    }
}

fn resonant_drives() -> Vec<DriveConfig> {
    ALL_MODES.iter().map(|&m| drive(m, 1, P_WEAK, 0.0)).collect()
}

fn both_directions(mode: Mode, power: f64, detuning: f64) -> Vec<DriveConfig> {
    vec![drive(mode, 1, power, detuning), drive(mode, -1, power, detuning)]
}

fn scenario(name: &str, summary: &str, panels: Vec<Panel>) -> Scenario {
    Scenario {
        name: name.into(),
        summary: summary.into(),
        panels: panels.into_iter().map(Panel::config).collect(),
    }
}

/// Every bundled scenario, in figure order.
pub fn scenarios() -> Vec<Scenario> {
    let mode_panels = |fig: &str, modes: &[Mode], desc: &'static str, scan: fn() -> ScanAxis| -> Vec<Panel> {
        modes
            .iter()
            .zip('a'..)
            .map(|(&m, p)| {
                panel(
                    format!("{fig}{p}"),
                    desc,
                    vec![ix_minus_z()],
                    both_directions(m, P_WEAK, 0.0),
                    scan(),
                    Output::ForceTerms,
                )
            })
            .collect()
    };
    let total = |name: &str, desc: &'static str, dipoles, drives, scan| Panel {
        model: DetuningModel::Shifted,
        ..panel(name, desc, dipoles, drives, scan, Output::Total)
    };
    vec![
        scenario(
            "fig2",
            "axial driving force vs r, resonant 1 pW drives in four modes; dipole x (a), y (b), z (c)",
            [x(), y(), z()]
                .into_iter()
                .zip('a'..)
                .map(|(d, p)| {
                    panel(
                        format!("fig2{p}"),
                        "driving-field force, resonant forward drives, P = 1 pW",
                        vec![d],
                        resonant_drives(),
                        radial(),
                        Output::ForceTerms,
                    )
                })
                .collect(),
        ),
        scenario(
            "fig3",
            "driving force components vs r for dipole (x+y+z)/sqrt3",
            vec![panel(
                "fig3",
                "driving-field force, resonant forward drives, P = 1 pW",
                vec![cart("xyz", [1.0, 1.0, 1.0], [0.0; 3])],
                resonant_drives(),
                radial(),
                Output::ForceTerms,
            )],
        ),
        scenario(
            "fig4",
            "driving force vs r at detuning -100 MHz, dipole x",
            vec![panel(
                "fig4",
                "driving-field force, forward drives detuned by -100 MHz, P = 1 pW",
                vec![x()],
                ALL_MODES.iter().map(|&m| drive(m, 1, P_WEAK, -100e6)).collect(),
                radial(),
                Output::ForceTerms,
            )],
        ),
        scenario(
            "fig5",
            "axial driving force vs r for dipole (ix-z)/sqrt2, f_L = +1 and -1; HE11 (a), TM01 (b), HE21 (c)",
            mode_panels(
                "fig5",
                &[Mode::He11, Mode::Tm01, Mode::He21],
                "driving-field force on a chiral dipole, resonant drives in both directions, P = 1 pW",
                radial,
            ),
        ),
        scenario(
            "fig6",
            "axial driving force vs phi at r - a = 200 nm, dipole (ix-z)/sqrt2; HE11 (a), TE01 (b), TM01 (c), HE21 (d)",
            mode_panels(
                "fig6",
                &ALL_MODES,
                "driving-field force on a chiral dipole vs azimuth, r - a = 200 nm",
                azimuthal,
            ),
        ),
        scenario(
            "fig7",
            "transverse-plane profile of the axial driving force, HE21 drive in both directions, dipole (ix-z)/sqrt2",
            vec![panel(
                "fig7",
                "driving-field force on a chiral dipole in the transverse plane, HE21 drive",
                vec![ix_minus_z()],
                both_directions(Mode::He21, P_WEAK, 0.0),
                plane(),
                Output::ForceTerms,
            )],
        ),
        scenario(
            "fig8",
            "axial spontaneous recoil force vs r, dipole (ix-z)/sqrt2",
            vec![panel(
                "fig8",
                "spontaneous-emission recoil force vs r",
                vec![ix_minus_z()],
                vec![],
                radial(),
                Output::ForceTerms,
            )],
        ),
        scenario(
            "fig9",
            "axial spontaneous recoil force vs phi at r - a = 200 nm, dipole (ix-z)/sqrt2",
            vec![panel(
                "fig9",
                "spontaneous-emission recoil force vs azimuth, r - a = 200 nm",
                vec![ix_minus_z()],
                vec![],
                azimuthal(),
                Output::ForceTerms,
            )],
        ),
        scenario(
            "fig10",
            "transverse-plane profile of the axial spontaneous recoil force, dipole (ix-z)/sqrt2",
            vec![panel(
                "fig10",
                "spontaneous-emission recoil force in the transverse plane",
                vec![ix_minus_z()],
                vec![],
                plane(),
                Output::ForceTerms,
            )],
        ),
        scenario(
            "fig11",
            "axial scattering force vs r, dipole (ix-z)/sqrt2, f_L = +1 and -1; HE11 (a), TM01 (b), HE21 (c)",
            mode_panels(
                "fig11",
                &[Mode::He11, Mode::Tm01, Mode::He21],
                "scattering recoil force on a chiral dipole, resonant drives in both directions, P = 1 pW",
                radial,
            ),
        ),
        scenario(
            "fig12",
            "azimuthal spontaneous recoil force vs r, dipole (x+iy)/sqrt2",
            vec![panel(
                "fig12",
                "spontaneous-emission recoil force vs r",
                vec![cart("x+iy", [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])],
                vec![],
                radial(),
                Output::ForceTerms,
            )],
        ),
        scenario(
            "fig13",
            "ground-state potential vs r for dipoles r, phi, z",
            vec![panel("fig13", "van der Waals potentials vs r", radial_set(), vec![], radial(), Output::Vdw)],
        ),
        scenario(
            "fig14",
            "excited-state potential and its resonant part vs r for dipoles r, phi, z",
            vec![panel("fig14", "van der Waals potentials vs r", radial_set(), vec![], radial(), Output::Vdw)],
        ),
        scenario(
            "fig15",
            "potentials vs phi at r - a = 200 nm for dipoles x and z",
            vec![panel(
                "fig15",
                "van der Waals potentials vs azimuth, r - a = 200 nm",
                vec![x(), z()],
                vec![],
                azimuthal(),
                Output::Vdw,
            )],
        ),
        scenario(
            "fig16",
            "transverse-plane profiles of the potentials for dipoles x and z",
            vec![panel(
                "fig16",
                "van der Waals potentials in the transverse plane",
                vec![x(), z()],
                vec![],
                plane(),
                Output::Vdw,
            )],
        ),
        scenario(
            "fig17",
            "radial van der Waals forces vs r for dipoles r, phi, z",
            vec![panel("fig17", "van der Waals forces vs r", radial_set(), vec![], radial(), Output::Vdw)],
        ),
        scenario(
            "fig18",
            "azimuthal van der Waals forces vs phi at r - a = 200 nm for dipoles x and z",
            vec![panel(
                "fig18",
                "van der Waals forces vs azimuth, r - a = 200 nm",
                vec![x(), z()],
                vec![],
                azimuthal(),
                Output::Vdw,
            )],
        ),
        scenario(
            "fig19",
            "total force vs r, dipole x, forward drives in four modes, P = 100 pW, bare detuning 10 MHz, shifted transition",
            vec![total(
                "fig19",
                "total force with level shifts, P = 100 pW, bare detuning 10 MHz",
                vec![x()],
                ALL_MODES.iter().map(|&m| drive(m, 1, P_TOTAL, DELTA_TOTAL)).collect(),
                radial(),
            )],
        ),
        scenario(
            "fig20",
            "total force vs r, dipole (ix-z)/sqrt2, HE21 drive in both directions, P = 100 pW, bare detuning 10 MHz",
            vec![total(
                "fig20",
                "total force with level shifts on a chiral dipole, HE21 drive",
                vec![ix_minus_z()],
                both_directions(Mode::He21, P_TOTAL, DELTA_TOTAL),
                radial(),
            )],
        ),
        scenario(
            "fig21",
            "total force vs phi at r - a = 200 nm, dipole (ix-z)/sqrt2, HE21 drive in both directions",
            vec![total(
                "fig21",
                "total force with level shifts on a chiral dipole vs azimuth, r - a = 200 nm",
                vec![ix_minus_z()],
                both_directions(Mode::He21, P_TOTAL, DELTA_TOTAL),
                azimuthal(),
            )],
        ),
    ]
}

/// Panels selected by `name`: a whole figure (`fig5`) or one panel (`fig5b`).
pub fn find(name: &str) -> Option<Vec<ScanConfig>> {
    let all = scenarios();
    if let Some(s) = all.iter().find(|s| s.name == name) {
        return Some(s.panels.clone());
    }
    all.into_iter()
        .flat_map(|s| s.panels)
        .find(|p| p.name == name)
        .map(|p| vec![p])
}

pub fn run_scenario(name: &str, cache: &SiteCache) -> Result<Vec<Table>, ScanError> {
    let panels = find(name).ok_or_else(|| ScanError::Config(format!("unknown scenario {name:?}")))?;
    let mut out = Vec::new();
    for p in &panels {
        out.extend(run_scan(p, cache)?);
    }
    Ok(out)
}
