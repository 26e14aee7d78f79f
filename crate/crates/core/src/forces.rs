//! Van der Waals potentials and the force terms acting on the driven atom.
//!
//! The position-dependent input is a [`SiteTensors`] at the atom's radius;
//! all functions here only contract it with the local dipole `d` (in the
//! cylindrical basis at the atom). Gradients are taken with the dipole held
//! fixed in space and reported as `(F_r, F_φ, F_z)`.
//!
//! With `G` the scattered Green tensor and `Γ_k = ∂_k G(R, R′)|_{R′=R}`
//! its first-argument gradient, the pieces are
//!
//! * `U_g = d·T·d*`, `T = (ω₀/πε₀c²) ∫₀^∞ du u²/(ω₀² + u²) G(iu)`,
//! * `U_e^off = −U_g`, `U_e^res = −(ω₀²/ε₀c²) d·Re G(ω₀)·d*`,
//! * `∇(d·G(R, R)·d*) = d·(Γ + Γᵀ)·d*` by reciprocity,
//! * `F^spon = −(2ω₀²/ε₀c²) Im(d·Im Γ(ω₀)·d*)` on the Green route; the
//!   mode-sum route lives in [`RateTensors::recoil_force`].
//!
//! [`RateTensors::recoil_force`]: crate::emission::RateTensors::recoil_force

use serde::{Deserialize, Serialize};

use crate::atom_state::{effective_detuning, rabi_frequency, rabi_gradient, BlochSteadyState};
use crate::consts::{C, EPS0, HBAR, MU0};
use crate::cvec::{bilinear, conj, mat_im, mat_re, transpose, Mat3, Tensor3, Vec3};
use crate::emission::{AtomSpec, GuidedSet};
use crate::error::{Error, Result};
use crate::fiber::{Drive, FiberSpec};
use crate::site::{SiteRequest, SiteTensors};
use crate::C64;

/// Saturation above which the weak-excitation force is refused.
pub const WEAK_SATURATION_LIMIT: f64 = 0.05;

/// Energy-level shifts (J) induced by the fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VdwPotentials {
    pub u_g: f64,
    pub u_e: f64,
    pub u_e_off: f64,
    pub u_e_res: f64,
}

/// `−∇U` (N) for the excited and ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VdwForces {
    pub excited: [f64; 3],
    pub ground: [f64; 3],
    /// Off-resonant part of `excited`, equal to `−ground`.
    pub excited_off: [f64; 3],
}

/// Which transition frequency the drive detuning refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetuningModel {
    /// `Δ = Δ₀`, no level shifts.
    Bare,
    /// `Δ = Δ₀ − (U_e − U_g)/ħ`.
    Shifted,
}

/// All force terms at one position (N, cylindrical components).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ForceBreakdown {
    pub drv: [f64; 3],
    pub spon: [f64; 3],
    /// `ρ_ee F^spon`.
    pub scatt: [f64; 3],
    pub vdw_e: [f64; 3],
    pub vdw_g: [f64; 3],
    /// `ρ_ee F^(vdW)e,off + ρ_gg F^(vdW)g`.
    pub vdw_off_weighted: [f64; 3],
    pub total: [f64; 3],
    pub rho_ee: f64,
    pub rho_gg: f64,
    pub saturation: f64,
    /// Detuning used for the steady state (rad/s).
    pub detuning: f64,
    /// Total decay rate `Γ` (rad/s).
    pub gamma: f64,
}

/// Spontaneous recoil force on both routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SponRecoil {
    pub modes: [f64; 3],
    pub green: [f64; 3],
}

fn sym_grad(d: &Vec3, g: &Mat3) -> f64 {
    let dc = conj(d);
    (bilinear(d, g, &dc) + bilinear(d, &transpose(g), &dc)).re
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scaled(a: [f64; 3], s: f64) -> [f64; 3] {
    a.map(|x| x * s)
}

pub fn potentials_at(site: &SiteTensors, d: &Vec3) -> Result<VdwPotentials> {
    let t = &site.vdw()?.t_off;
    let g = &site.resonant()?.g;
    let dc = conj(d);
    let u_g = bilinear(d, t, &dc).re;
    let w = site.omega0;
    let u_e_res = -w * w / (EPS0 * C * C) * bilinear(d, &mat_re(g), &dc).re;
    let u_e_off = -u_g;
    Ok(VdwPotentials {
        u_g,
        u_e: u_e_off + u_e_res,
        u_e_off,
        u_e_res,
    })
}

pub fn vdw_forces_at(site: &SiteTensors, d: &Vec3) -> Result<VdwForces> {
    let grad = site
        .vdw()?
        .grad_off
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("van der Waals gradients were not computed".into()))?;
    let res = &site.resonant()?.grad;
    let w = site.omega0;
    let mut ground = [0.0; 3];
    let mut excited = [0.0; 3];
    for k in 0..3 {
        let du_g = sym_grad(d, &grad[k]);
        let du_res = -w * w / (EPS0 * C * C) * sym_grad(d, &mat_re(&res[k]));
        ground[k] = -du_g;
        excited[k] = du_g - du_res;
    }
    // identically zero by translation symmetry; drop the roundoff
    ground[2] = 0.0;
    excited[2] = 0.0;
    Ok(VdwForces {
        excited,
        ground,
        excited_off: ground.map(|x| -x),
    })
}

/// Recoil force from the Green-tensor gradient at `ω₀`.
pub fn spon_recoil_green_at(site: &SiteTensors, d: &Vec3) -> Result<[f64; 3]> {
    let grad: &Tensor3 = &site.resonant()?.grad;
    let w = site.omega0;
    let dc = conj(d);
    let mut f = [0.0; 3];
    for k in 0..3 {
        f[k] = -2.0 * w * w / (EPS0 * C * C) * bilinear(d, &mat_im(&grad[k]), &dc).im;
    }
    Ok(f)
}

/// Rabi frequency and its gradient at the atom.
pub fn rabi_at(drive: &Drive, atom: &AtomSpec) -> Result<(C64, [C64; 3])> {
    let (field, dfield) = drive.amplitude_with_gradient(atom.r, atom.phi, atom.z)?;
    let d = atom.d_local();
    Ok((rabi_frequency(&d, &field), rabi_gradient(&d, &field, &dfield, atom.r)))
}

/// `F^drv = ħ Re(ρ_ge ∇Ω)`.
pub fn driving_force(drive: &Drive, atom: &AtomSpec, state: &BlochSteadyState<f64>) -> Result<[f64; 3]> {
    let (_, grad) = rabi_at(drive, atom)?;
    let rho_ge = state.rho_ge();
    Ok(grad.map(|g| HBAR * (rho_ge * g).re))
}

fn detuning_for(site: &SiteTensors, drive: &Drive, d: &Vec3, model: DetuningModel) -> Result<f64> {
    let delta0 = drive.field.detuning0;
    Ok(match model {
        DetuningModel::Bare => delta0,
        DetuningModel::Shifted => {
            let u = potentials_at(site, d)?;
            effective_detuning(delta0, u.u_e, u.u_g)
        }
    })
}

/// Steady state of the atom at `site` under `drive`.
pub fn steady_state_at(
    site: &SiteTensors,
    drive: &Drive,
    atom: &AtomSpec,
    model: DetuningModel,
) -> Result<BlochSteadyState<f64>> {
    let d = atom.d_local();
    let gamma = site.rates.rates(&d).gamma_total;
    let (rabi, _) = rabi_at(drive, atom)?;
    let delta = detuning_for(site, drive, &d, model)?;
    Ok(BlochSteadyState::new(rabi, delta, gamma))
}

/// Total force `F^drv + ρ_ee F^spon + ρ_ee F^(vdW)e + ρ_gg F^(vdW)g` with
/// the recoil term from the mode sums.
pub fn force_breakdown(
    site: &SiteTensors,
    drive: &Drive,
    atom: &AtomSpec,
    model: DetuningModel,
) -> Result<ForceBreakdown> {
    let d = atom.d_local();
    let state = steady_state_at(site, drive, atom, model)?;
    let drv = driving_force(drive, atom, &state)?;
    let spon = site.rates.recoil_force(&d);
    let vdw = vdw_forces_at(site, &d)?;
    let (ree, rgg) = (state.rho_ee, state.rho_gg);
    let scatt = scaled(spon, ree);
    let vdw_off_weighted = add(scaled(vdw.excited_off, ree), scaled(vdw.ground, rgg));
    let total = add(
        add(drv, scatt),
        add(scaled(vdw.excited, ree), scaled(vdw.ground, rgg)),
    );
    Ok(ForceBreakdown {
        drv,
        spon,
        scatt,
        vdw_e: vdw.excited,
        vdw_g: vdw.ground,
        vdw_off_weighted,
        total,
        rho_ee: ree,
        rho_gg: rgg,
        saturation: state.saturation,
        detuning: state.detuning,
        gamma: state.gamma,
    })
}

/// Total force written as `F^drv + (ρ_ee − ρ_gg)∇U_g + 2ρ_ee(ω₀²/ε₀c²)
/// Re(d·Γ(ω₀)·d*)`, which uses the Green route for every radiative term.
/// Agrees with [`force_breakdown`] up to the recoil-route difference.
pub fn total_force_green_form(
    site: &SiteTensors,
    drive: &Drive,
    atom: &AtomSpec,
    model: DetuningModel,
) -> Result<[f64; 3]> {
    let d = atom.d_local();
    let dc = conj(&d);
    let state = steady_state_at(site, drive, atom, model)?;
    let drv = driving_force(drive, atom, &state)?;
    let vdw = vdw_forces_at(site, &d)?;
    let res = &site.resonant()?.grad;
    let w = site.omega0;
    let mut f = drv;
    for k in 0..3 {
        let grad_ug = -vdw.ground[k];
        f[k] += (state.rho_ee - state.rho_gg) * grad_ug
            + state.rho_ee * 2.0 * w * w / (EPS0 * C * C) * bilinear(&d, &res[k], &dc).re;
    }
    Ok(f)
}

/// Force on the induced dipole in the weak-excitation limit, with
/// `℘_i = −d_i* Ω/(Δ + iΓ/2)`:
/// `F = ½ Re(℘*·∇𝓔) + (ω₀²μ₀/2) Re(℘*·Γ(ω₀)·℘)`.
pub fn weak_excitation_at(
    site: &SiteTensors,
    drive: &Drive,
    atom: &AtomSpec,
    model: DetuningModel,
) -> Result<[f64; 3]> {
    let d = atom.d_local();
    let state = steady_state_at(site, drive, atom, model)?;
    if state.saturation >= WEAK_SATURATION_LIMIT {
        return Err(Error::SaturationTooHigh(state.saturation));
    }
    let denom = C64::new(state.detuning, state.gamma / 2.0);
    let wp: Vec3 = conj(&d).map(|di| -di * state.rabi / denom);
    let wp_c = conj(&wp);
    let (field, dfield) = drive.amplitude_with_gradient(atom.r, atom.phi, atom.z)?;
    let grad_e = rabi_gradient(&wp_c, &field, &dfield, atom.r);
    let res = &site.resonant()?.grad;
    let w = site.omega0;
    let mut f = [0.0; 3];
    for k in 0..3 {
        f[k] = 0.5 * (HBAR * grad_e[k]).re + w * w * MU0 / 2.0 * bilinear(&wp_c, &res[k], &wp).re;
    }
    Ok(f)
}

fn site_for(fiber: &FiberSpec, atom: &AtomSpec, request: SiteRequest) -> Result<SiteTensors> {
    atom.validate(fiber)?;
    let guided = GuidedSet::solve(fiber, atom.omega0)?;
    SiteTensors::compute(fiber, &guided, atom.r, request)
}

pub fn vdw_potentials(fiber: &FiberSpec, atom: &AtomSpec) -> Result<VdwPotentials> {
    atom.validate(fiber)?;
    let guided = GuidedSet::solve(fiber, atom.omega0)?;
    let rates = crate::emission::RateTensors::compute(fiber, &guided, atom.r)?;
    let site = SiteTensors {
        r: atom.r,
        omega0: atom.omega0,
        rates,
        vdw: Some(crate::site::vdw_tensors(fiber, atom.omega0, atom.r, false)?),
        resonant: Some(crate::site::resonant_tensors(fiber, atom.omega0, atom.r)?),
    };
    potentials_at(&site, &atom.d_local())
}

pub fn vdw_force(fiber: &FiberSpec, atom: &AtomSpec) -> Result<VdwForces> {
    vdw_forces_at(&site_for(fiber, atom, SiteRequest::ALL)?, &atom.d_local())
}

pub fn spon_recoil_force(fiber: &FiberSpec, atom: &AtomSpec) -> Result<SponRecoil> {
    let site = site_for(
        fiber,
        atom,
        SiteRequest {
            vdw: false,
            resonant: true,
        },
    )?;
    let d = atom.d_local();
    Ok(SponRecoil {
        modes: site.rates.recoil_force(&d),
        green: spon_recoil_green_at(&site, &d)?,
    })
}

/// Force breakdown with the level-shifted detuning.
pub fn total_force(fiber: &FiberSpec, drive: &Drive, atom: &AtomSpec) -> Result<ForceBreakdown> {
    force_breakdown(&site_for(fiber, atom, SiteRequest::ALL)?, drive, atom, DetuningModel::Shifted)
}

pub fn weak_excitation_force(fiber: &FiberSpec, drive: &Drive, atom: &AtomSpec) -> Result<[f64; 3]> {
    weak_excitation_at(&site_for(fiber, atom, SiteRequest::ALL)?, drive, atom, DetuningModel::Shifted)
}
