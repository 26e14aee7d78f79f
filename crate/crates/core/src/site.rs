//! Dipole-independent tensors at one radius.
//!
//! Everything the force and rate formulas need at a radius `r` is a
//! contraction of a few tensors with the local dipole components. By the
//! rotational and translational symmetry of the fiber these tensors do not
//! depend on `φ` or `z`, so scans over `φ`, `z` or dipole orientation reuse
//! one [`SiteTensors`] per radius.

use std::f64::consts::PI;

use crate::consts::{C, EPS0};
use crate::cvec::{mat_add_assign, mat_max_abs, tensor_max_abs, zero_mat, zero_tensor, Mat3, Tensor3};
use crate::emission::{GuidedSet, RateTensors};
use crate::error::{Error, Result};
use crate::fiber::FiberSpec;
use crate::green::{scattered_green, scattered_green_with_gradient, ContourOptions, CylPoint};
use crate::quad::GaussLegendre;
use crate::C64;

/// Relative convergence target of the imaginary-frequency integral.
pub const VDW_TOL: f64 = 1e-8;
const VDW_START: usize = 16;
const VDW_MAX: usize = 1024;
/// The reflected field at `iu` is bounded by `exp(−2u n₂ (r − a)/c)`; the
/// integral is cut where this reaches `exp(−VDW_DECAY)`.
const VDW_DECAY: f64 = 60.0;

/// Off-resonant van der Waals tensors at one radius:
/// `T = (ω₀/πε₀c²) ∫₀^∞ du u²/(ω₀² + u²) G⁽ᴿ⁾(R, R; iu)` and the same
/// integral of the first-argument gradient.
#[derive(Debug, Clone)]
pub struct VdwTensors {
    pub t_off: Mat3,
    pub grad_off: Option<Tensor3>,
    /// Nodes used by the converged rule.
    pub nodes: usize,
}

/// Scattered Green tensor and its first-argument gradient at `ω₀`.
#[derive(Debug, Clone)]
pub struct ResonantTensors {
    pub g: Mat3,
    pub grad: Tensor3,
}

#[derive(Debug, Clone)]
pub struct SiteTensors {
    pub r: f64,
    pub omega0: f64,
    pub rates: RateTensors,
    pub vdw: Option<VdwTensors>,
    pub resonant: Option<ResonantTensors>,
}

/// Which parts of [`SiteTensors`] to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteRequest {
    pub vdw: bool,
    pub resonant: bool,
}

impl SiteRequest {
    pub const RATES: Self = Self {
        vdw: false,
        resonant: false,
    };
    pub const ALL: Self = Self {
        vdw: true,
        resonant: true,
    };
}

fn gl_vdw(fiber: &FiberSpec, omega0: f64, r: f64, n: usize, gradient: bool) -> Result<(Mat3, Tensor3)> {
    let p = CylPoint::new(r, 0.0, 0.0);
    let opts = ContourOptions::default();
    let rule = GaussLegendre::<f64>::new(n);
    let pref = omega0 * omega0 / (PI * EPS0 * C * C);
    let u_max = VDW_DECAY * C / (2.0 * fiber.n2 * (r - fiber.radius));
    let theta_max = (u_max / omega0).atan();
    let nodes: Vec<(f64, f64)> = rule.mapped(0.0, theta_max).collect();
    use rayon::prelude::*;
    let vals = nodes
        .par_iter()
        .map(|&(theta, w)| {
            let tan = theta.tan();
            let w_im = C64::new(0.0, omega0 * tan);
            let g = if gradient {
                scattered_green_with_gradient(fiber, w_im, p, p, opts)?
            } else {
                scattered_green(fiber, w_im, p, p)?
            };
            Ok((w * tan * tan * pref, g))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = zero_mat();
    let mut grad = zero_tensor();
    for (w, g) in &vals {
        let s = C64::new(*w, 0.0);
        mat_add_assign(&mut t, &g.tensor, s);
        if let Some(gg) = &g.gradient {
            for k in 0..3 {
                mat_add_assign(&mut grad[k], &gg[k], s);
            }
        }
    }
    Ok((t, grad))
}

/// Off-resonant tensors with `u = ω₀ tan θ` and Gauss–Legendre in `θ`,
/// doubling the node count until successive rules agree to [`VDW_TOL`].
pub fn vdw_tensors(fiber: &FiberSpec, omega0: f64, r: f64, gradient: bool) -> Result<VdwTensors> {
    let mut n = VDW_START;
    let mut prev = gl_vdw(fiber, omega0, r, n, gradient)?;
    loop {
        n *= 2;
        let next = gl_vdw(fiber, omega0, r, n, gradient)?;
        let mut dt = next.0;
        mat_add_assign(&mut dt, &prev.0, C64::new(-1.0, 0.0));
        let mut dg = next.1;
        for k in 0..3 {
            mat_add_assign(&mut dg[k], &prev.1[k], C64::new(-1.0, 0.0));
        }
        let ok_t = mat_max_abs(&dt) <= VDW_TOL * mat_max_abs(&next.0);
        let ok_g = tensor_max_abs(&dg) <= VDW_TOL * tensor_max_abs(&next.1);
        if ok_t && ok_g {
            return Ok(VdwTensors {
                t_off: next.0,
                grad_off: gradient.then_some(next.1),
                nodes: n,
            });
        }
        if n >= VDW_MAX {
            return Err(Error::NoConvergence(format!(
                "imaginary-frequency quadrature at r = {r:e} m"
            )));
        }
        prev = next;
    }
}

pub fn resonant_tensors(fiber: &FiberSpec, omega0: f64, r: f64) -> Result<ResonantTensors> {
    let p = CylPoint::new(r, 0.0, 0.0);
    let g = scattered_green_with_gradient(fiber, C64::new(omega0, 0.0), p, p, ContourOptions::default())?;
    Ok(ResonantTensors {
        g: g.tensor,
        grad: g.gradient.expect("gradient requested"),
    })
}

impl SiteTensors {
    pub fn compute(fiber: &FiberSpec, guided: &GuidedSet, r: f64, request: SiteRequest) -> Result<Self> {
        let omega0 = guided.omega;
        let mut site = Self {
            r,
            omega0,
            rates: RateTensors::compute(fiber, guided, r)?,
            vdw: None,
            resonant: None,
        };
        site.extend(fiber, request)?;
        Ok(site)
    }

    pub fn satisfies(&self, request: SiteRequest) -> bool {
        let vdw_ok = !request.vdw || self.vdw.as_ref().is_some_and(|v| v.grad_off.is_some());
        vdw_ok && (!request.resonant || self.resonant.is_some())
    }

    /// Adds whatever `request` needs and is not present yet.
    pub fn extend(&mut self, fiber: &FiberSpec, request: SiteRequest) -> Result<()> {
        if request.vdw && !self.vdw.as_ref().is_some_and(|v| v.grad_off.is_some()) {
            self.vdw = Some(vdw_tensors(fiber, self.omega0, self.r, true)?);
        }
        if request.resonant && self.resonant.is_none() {
            self.resonant = Some(resonant_tensors(fiber, self.omega0, self.r)?);
        }
        Ok(())
    }

    pub fn vdw(&self) -> Result<&VdwTensors> {
        self.vdw
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("van der Waals tensors were not computed".into()))
    }

    pub fn resonant(&self) -> Result<&ResonantTensors> {
        self.resonant
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("resonant Green tensors were not computed".into()))
    }
}
