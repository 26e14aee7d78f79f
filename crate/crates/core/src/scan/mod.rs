//! Configuration-driven position scans with CSV output.
//!
//! A [`ScanConfig`] names a fiber, an atom with one or more dipoles, zero or
//! more guided drives, a scan grid and a list of [`Output`] selectors. Each
//! selector produces one CSV table whose columns are the scan coordinates
//! followed by one block of quantities per curve (dipole, or drive × dipole).
//!
//! Units: forces in zN, potentials both as `U/h` in MHz and `U/k_B` in mK,
//! rates and frequencies in units of `γ₀`. Numbers are written as
//! `{:.8e}` (9 significant digits) with LF line endings, so reruns are
//! byte-identical.
//!
//! Dipole-independent tensors are cached per radius in a [`SiteCache`],
//! which can be shared between scans on the same fiber and transition.

mod config;
pub mod scenarios;

pub use config::{
    AtomConfig, DipoleConfig, DriveConfig, FiberConfig, GridPoint, Output, PolarizationKind, ScanAxis,
    ScanConfig,
};

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use thiserror::Error as ThisError;

use crate::consts::{HBAR, KB};
use crate::emission::{AtomSpec, DipoleMoment, GuidedSet};
use crate::error::Error;
use crate::fiber::{Drive, FiberSpec, ModeOrder};
use crate::forces::{
    driving_force, force_breakdown, potentials_at, steady_state_at, vdw_forces_at, DetuningModel,
};
use crate::site::{SiteRequest, SiteTensors};

/// Points closer to the surface than this (in units of `a`) are flagged.
pub const NEAR_SURFACE: f64 = 1.05;

#[derive(Debug, ThisError)]
pub enum ScanError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("at {point}: {source}")]
    Numerical {
        point: String,
        #[source]
        source: Error,
    },
    #[error("i/o: {0}")]
    Io(String),
}

/// One CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub file_name: String,
    pub text: String,
}

type SiteKey = [u64; 5];

/// Per-radius tensors shared between scans.
#[derive(Default)]
pub struct SiteCache {
    map: Mutex<HashMap<SiteKey, Arc<SiteTensors>>>,
}

fn key(fiber: &FiberSpec, omega0: f64, r: f64) -> SiteKey {
    [fiber.radius, fiber.n1, fiber.n2, omega0, r].map(f64::to_bits)
}

impl SiteCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Tensors at every radius in `radii`, computing what is missing in
    /// parallel. The result is in input order.
    pub fn sites(
        &self,
        fiber: &FiberSpec,
        guided: &GuidedSet,
        radii: &[f64],
        request: SiteRequest,
    ) -> Result<Vec<Arc<SiteTensors>>, ScanError> {
        let omega0 = guided.omega;
        let existing: Vec<Option<Arc<SiteTensors>>> = {
            let map = self.map.lock().unwrap();
            radii.iter().map(|&r| map.get(&key(fiber, omega0, r)).cloned()).collect()
        };
        let computed = radii
            .par_iter()
            .zip(existing.par_iter())
            .map(|(&r, have)| match have {
                Some(s) if s.satisfies(request) => Ok(s.clone()),
                Some(s) => {
                    let mut s = (**s).clone();
                    s.extend(fiber, request).map(|_| Arc::new(s))
                }
                None => SiteTensors::compute(fiber, guided, r, request).map(Arc::new),
            })
            .collect::<Vec<_>>();
        let mut out = Vec::with_capacity(radii.len());
        let mut map = self.map.lock().unwrap();
        for (&r, res) in radii.iter().zip(computed) {
            let site = res.map_err(|source| ScanError::Numerical {
                point: format!("r/a = {}", r / fiber.radius),
                source,
            })?;
            map.insert(key(fiber, omega0, r), site.clone());
            out.push(site);
        }
        Ok(out)
    }
}

fn fmt(x: f64) -> String {
    // `+ 0.0` folds −0 into +0
    format!("{:.8e}", x + 0.0)
}

const ZN: f64 = 1e-21;

fn zn(v: [f64; 3]) -> [f64; 3] {
    v.map(|x| x / ZN)
}

fn mhz(u: f64) -> f64 {
    u / (2.0 * std::f64::consts::PI * HBAR) / 1e6
}

fn mk(u: f64) -> f64 {
    u / KB * 1e3
}

struct Resolved {
    fiber: FiberSpec,
    guided: GuidedSet,
    dipoles: Vec<DipoleMoment>,
    drives: Vec<Drive>,
    orders: Vec<ModeOrder>,
}

fn resolve(cfg: &ScanConfig) -> Result<Resolved, ScanError> {
    cfg.validate()?;
    let fiber = cfg.fiber_spec()?;
    let omega0 = cfg.omega0();
    let numerical = |what: &str, source: Error| ScanError::Numerical {
        point: what.to_string(),
        source,
    };
    let guided = GuidedSet::solve(&fiber, omega0).map_err(|e| numerical("guided modes at omega0", e))?;
    let dipoles = (0..cfg.atom.dipoles.len())
        .map(|i| cfg.dipole(i))
        .collect::<Result<Vec<_>, _>>()?;
    let drives = (0..cfg.drives.len())
        .map(|i| {
            let field = cfg.drive_field(i)?;
            Drive::new(&fiber, field, omega0 + field.detuning0)
                .map_err(|e| numerical(&format!("drive {}", cfg.drives[i].label), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut orders: Vec<ModeOrder> = guided.modes.iter().map(|m| m.order).collect();
    orders.dedup();
    Ok(Resolved {
        fiber,
        guided,
        dipoles,
        drives,
        orders,
    })
}

fn request_for(cfg: &ScanConfig) -> SiteRequest {
    let shifted = cfg.detuning_model == DetuningModel::Shifted && !cfg.drives.is_empty();
    let needs = cfg.outputs.iter().any(|o| match o {
        Output::Vdw | Output::Total => true,
        Output::Rabi | Output::ForceTerms => shifted,
        Output::Rates => false,
    });
    SiteRequest {
        vdw: needs,
        resonant: needs,
    }
}

/// `(label, quantity names)` per curve and the column values per point.
struct Block {
    columns: Vec<String>,
    compute: Box<dyn Fn(&SiteTensors, GridPoint) -> Result<Vec<f64>, Error> + Sync + 'static>,
}

fn curve_columns(label: &str, names: &[&str]) -> Vec<String> {
    names.iter().map(|n| format!("{label}:{n}")).collect()
}

fn blocks_for(cfg: &ScanConfig, res: &Resolved, output: Output) -> Vec<Block> {
    let model = cfg.detuning_model;
    let gamma0 = cfg.gamma0();
    let mut blocks = Vec::new();
    let atom_at = {
        let cfg = cfg.clone();
        move |d: DipoleMoment, p: GridPoint| -> AtomSpec { cfg.atom_at(d, p) }
    };
    let dipole_curves: Vec<(String, DipoleMoment)> = cfg
        .atom
        .dipoles
        .iter()
        .zip(&res.dipoles)
        .map(|(c, d)| (c.label.clone(), *d))
        .collect();
    let drive_curves: Vec<(String, Drive, DipoleMoment)> = cfg
        .drives
        .iter()
        .zip(&res.drives)
        .flat_map(|(dc, drive)| {
            dipole_curves
                .iter()
                .map(move |(dl, d)| (format!("{}/{}", dc.label, dl), drive.clone(), *d))
        })
        .collect();
    match output {
        Output::Rates => {
            for (label, d) in dipole_curves {
                let mut names: Vec<String> = ["gamma_total_g0", "gamma_guided_g0", "gamma_rad_g0"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                for o in &res.orders {
                    names.push(format!("{o}_fwd_g0"));
                    names.push(format!("{o}_bwd_g0"));
                }
                let orders = res.orders.clone();
                let at = atom_at.clone();
                blocks.push(Block {
                    columns: names.iter().map(|n| format!("{label}:{n}")).collect(),
                    compute: Box::new(move |site, p| {
                        let r = site.rates.rates(&at(d, p).d_local());
                        let mut v = vec![r.gamma_total / gamma0, r.gamma_g / gamma0, r.gamma_r / gamma0];
                        for o in &orders {
                            v.push(r.directional(*o, 1) / gamma0);
                            v.push(r.directional(*o, -1) / gamma0);
                        }
                        Ok(v)
                    }),
                });
            }
        }
        Output::Rabi => {
            for (label, drive, d) in drive_curves {
                let at = atom_at.clone();
                blocks.push(Block {
                    columns: curve_columns(
                        &label,
                        &["rabi_abs_g0", "rabi_re_g0", "rabi_im_g0", "saturation", "rho_ee", "detuning_g0"],
                    ),
                    compute: Box::new(move |site, p| {
                        let st = steady_state_at(site, &drive, &at(d, p), model)?;
                        Ok(vec![
                            st.rabi.norm() / gamma0,
                            st.rabi.re / gamma0,
                            st.rabi.im / gamma0,
                            st.saturation,
                            st.rho_ee,
                            st.detuning / gamma0,
                        ])
                    }),
                });
            }
        }
        Output::Vdw => {
            for (label, d) in dipole_curves {
                let at = atom_at.clone();
                blocks.push(Block {
                    columns: curve_columns(
                        &label,
                        &[
                            "Ug_MHz", "Ue_MHz", "Ue_off_MHz", "Ue_res_MHz", "Ug_mK", "Ue_mK", "Ue_off_mK",
                            "Ue_res_mK", "Fe_r_zN", "Fe_phi_zN", "Fg_r_zN", "Fg_phi_zN",
                        ],
                    ),
                    compute: Box::new(move |site, p| {
                        let dl = at(d, p).d_local();
                        let u = potentials_at(site, &dl)?;
                        let f = vdw_forces_at(site, &dl)?;
                        let us = [u.u_g, u.u_e, u.u_e_off, u.u_e_res];
                        let mut v: Vec<f64> = us.iter().map(|&x| mhz(x)).collect();
                        v.extend(us.iter().map(|&x| mk(x)));
                        v.extend([f.excited[0] / ZN, f.excited[1] / ZN, f.ground[0] / ZN, f.ground[1] / ZN]);
                        Ok(v)
                    }),
                });
            }
        }
        Output::ForceTerms if cfg.drives.is_empty() => {
            for (label, d) in dipole_curves {
                let at = atom_at.clone();
                blocks.push(Block {
                    columns: curve_columns(&label, &["spon_r_zN", "spon_phi_zN", "spon_z_zN"]),
                    compute: Box::new(move |site, p| Ok(zn(site.rates.recoil_force(&at(d, p).d_local())).to_vec())),
                });
            }
        }
        Output::ForceTerms => {
            for (label, drive, d) in drive_curves {
                let at = atom_at.clone();
                blocks.push(Block {
                    columns: curve_columns(
                        &label,
                        &[
                            "drv_r_zN",
                            "drv_phi_zN",
                            "drv_z_zN",
                            "spon_r_zN",
                            "spon_phi_zN",
                            "spon_z_zN",
                            "scatt_r_zN",
                            "scatt_phi_zN",
                            "scatt_z_zN",
                            "rho_ee",
                        ],
                    ),
                    compute: Box::new(move |site, p| {
                        let atom = at(d, p);
                        let st = steady_state_at(site, &drive, &atom, model)?;
                        let drv = zn(driving_force(&drive, &atom, &st)?);
                        let spon = zn(site.rates.recoil_force(&atom.d_local()));
                        let mut v = drv.to_vec();
                        v.extend(spon);
                        v.extend(spon.map(|x| x * st.rho_ee));
                        v.push(st.rho_ee);
                        Ok(v)
                    }),
                });
            }
        }
        Output::Total => {
            for (label, drive, d) in drive_curves {
                let at = atom_at.clone();
                blocks.push(Block {
                    columns: curve_columns(
                        &label,
                        &["F_r_zN", "F_phi_zN", "F_z_zN", "vdw_r_zN", "vdw_phi_zN", "rho_ee", "detuning_g0"],
                    ),
                    compute: Box::new(move |site, p| {
                        let b = force_breakdown(site, &drive, &at(d, p), model)?;
                        let vdw_r = b.rho_ee * b.vdw_e[0] + b.rho_gg * b.vdw_g[0];
                        let vdw_phi = b.rho_ee * b.vdw_e[1] + b.rho_gg * b.vdw_g[1];
                        let mut v = zn(b.total).to_vec();
                        v.extend([vdw_r / ZN, vdw_phi / ZN, b.rho_ee, b.detuning / gamma0]);
                        Ok(v)
                    }),
                });
            }
        }
    }
    blocks
}

fn header(cfg: &ScanConfig, output: Output) -> String {
    let mut h = String::new();
    h.push_str(&format!("# fiberforce scan {} ({})\n", cfg.name, output.name()));
    if !cfg.description.is_empty() {
        h.push_str(&format!("# {}\n", cfg.description));
    }
    h.push_str("# units: forces in zN; potentials as U/h in MHz and U/k_B in mK; rates, Rabi frequency and detuning in units of gamma0\n");
    h.push_str(&format!(
        "# near_surface = 1 marks points with r < {NEAR_SURFACE} a (asymptotic regime)\n"
    ));
    h.push_str("# resolved configuration:\n");
    for line in cfg.to_toml().lines() {
        h.push_str("#   ");
        h.push_str(line);
        h.push('\n');
    }
    h
}

fn coordinate_columns(cfg: &ScanConfig) -> Vec<String> {
    let mut c: Vec<String> = ["r_over_a", "r_minus_a_nm", "phi_rad"].iter().map(|s| s.to_string()).collect();
    if matches!(cfg.scan, ScanAxis::RPhi { .. }) {
        c.push("x_over_a".into());
        c.push("y_over_a".into());
    }
    c.push("near_surface".into());
    c
}

fn coordinates(cfg: &ScanConfig, p: GridPoint) -> Vec<String> {
    let a = cfg.fiber.radius_m;
    let mut c = vec![fmt(p.r / a), fmt((p.r - a) * 1e9), fmt(p.phi)];
    if matches!(cfg.scan, ScanAxis::RPhi { .. }) {
        c.push(fmt(p.r / a * p.phi.cos()));
        c.push(fmt(p.r / a * p.phi.sin()));
    }
    c.push(if p.r < NEAR_SURFACE * a { "1" } else { "0" }.to_string());
    c
}

fn write_csv(head: &str, columns: &[String], rows: &[Vec<String>]) -> Result<String, ScanError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(head.as_bytes().to_vec());
    let io = |e: csv::Error| ScanError::Io(e.to_string());
    w.write_record(columns).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| ScanError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

/// Runs one scan and returns one table per output selector.
pub fn run_scan(cfg: &ScanConfig, cache: &SiteCache) -> Result<Vec<Table>, ScanError> {
    let res = resolve(cfg)?;
    let grid = cfg.grid();
    let mut radii: Vec<f64> = Vec::new();
    for p in &grid {
        if !radii.iter().any(|r| r.to_bits() == p.r.to_bits()) {
            radii.push(p.r);
        }
    }
    let sites = cache.sites(&res.fiber, &res.guided, &radii, request_for(cfg))?;
    let site_of = |r: f64| {
        let i = radii.iter().position(|x| x.to_bits() == r.to_bits()).unwrap();
        sites[i].clone()
    };
    let mut tables = Vec::new();
    for &output in &cfg.outputs {
        let blocks = blocks_for(cfg, &res, output);
        let mut columns = coordinate_columns(cfg);
        for b in &blocks {
            columns.extend(b.columns.iter().cloned());
        }
        let rows = grid
            .par_iter()
            .map(|&p| {
                let site = site_of(p.r);
                let mut row = coordinates(cfg, p);
                for b in &blocks {
                    let vals = (b.compute)(&site, p).map_err(|source| ScanError::Numerical {
                        point: format!("r/a = {}, phi = {} rad", p.r / cfg.fiber.radius_m, p.phi),
                        source,
                    })?;
                    for v in vals {
                        if !v.is_finite() {
                            return Err(ScanError::Numerical {
                                point: format!("r/a = {}, phi = {} rad", p.r / cfg.fiber.radius_m, p.phi),
                                source: Error::NoConvergence(format!("non-finite {} value", output.name())),
                            });
                        }
                        row.push(fmt(v));
                    }
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>, ScanError>>()?;
        tables.push(Table {
            file_name: format!("{}_{}.csv", cfg.name, output.name()),
            text: write_csv(&header(cfg, output), &columns, &rows)?,
        });
    }
    Ok(tables)
}

pub fn write_tables(dir: &Path, tables: &[Table]) -> Result<(), ScanError> {
    std::fs::create_dir_all(dir).map_err(|e| ScanError::Io(format!("{}: {e}", dir.display())))?;
    for t in tables {
        let path = dir.join(&t.file_name);
        std::fs::write(&path, &t.text).map_err(|e| ScanError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
