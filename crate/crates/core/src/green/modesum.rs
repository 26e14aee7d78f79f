//! `Im G(R, R′; ω)` as a sum over guided modes plus an integral over the
//! radiation continuum:
//!
//! `Im G = (c²/4ω) [Σ_μ β′ e_μ(R) ⊗ e_μ*(R′) + ∫dβ Σ_{lp} e_ν(R) ⊗ e_ν*(R′)]`,
//!
//! with the phases `e^{i(fβ(z−z′) + pl(φ−φ′))}` included in the profiles.

use std::cell::Cell;

use super::{CylPoint, GreenValue};
use crate::consts::C;
use crate::cvec::{conj, mat_add_assign, mat_max_abs, outer, zero_mat, Mat3, I};
use crate::emission::{beta_nodes, radiation_l_sum, GuidedSet, BETA_RULE_TOL};
use crate::error::{Error, Result};
use crate::fiber::FiberSpec;
use crate::C64;

fn guided_part(guided: &GuidedSet, at: &CylPoint, from: &CylPoint) -> Result<Mat3> {
    let mut g = zero_mat();
    let pref = C * C / (4.0 * guided.omega);
    for mode in &guided.modes {
        let l = mode.order.l as f64;
        for f in [1i8, -1] {
            for &p in mode.order.polarizations() {
                let e = mode.profile(f, p, at.r)?;
                let e2 = mode.profile(f, p, from.r)?;
                let phase = (I * (f as f64 * mode.beta * (at.z - from.z) + p as f64 * l * (at.phi - from.phi))).exp();
                mat_add_assign(&mut g, &outer(&e, &conj(&e2)), phase * pref * mode.beta_prime);
            }
        }
    }
    Ok(g)
}

fn radiation_at(fiber: &FiberSpec, omega: f64, beta: f64, at: &CylPoint, from: &CylPoint) -> Result<Mat3> {
    let mut g = zero_mat();
    let total = Cell::new(0.0f64);
    radiation_l_sum(fiber, omega, beta, &|| total.get(), |l, modes| {
        let phase = (I * (beta * (at.z - from.z) + l as f64 * (at.phi - from.phi))).exp();
        let mut shell = zero_mat();
        for mode in modes {
            let e = mode.profile(at.r)?;
            let e2 = mode.profile(from.r)?;
            mat_add_assign(&mut shell, &outer(&e, &conj(&e2)), phase);
        }
        mat_add_assign(&mut g, &shell, C64::new(1.0, 0.0));
        total.set(mat_max_abs(&g));
        Ok(mat_max_abs(&shell))
    })?;
    Ok(g)
}

fn radiation_part(fiber: &FiberSpec, omega: f64, at: &CylPoint, from: &CylPoint) -> Result<Mat3> {
    use rayon::prelude::*;
    let kn2 = omega / C * fiber.n2;
    let pref = C * C / (4.0 * omega);
    let rule = |n: usize| -> Result<Mat3> {
        let parts: Vec<(f64, Mat3)> = beta_nodes(kn2, n)
            .par_iter()
            .map(|&(beta, w)| Ok((w, radiation_at(fiber, omega, beta, at, from)?)))
            .collect::<Result<_>>()?;
        let mut g = zero_mat();
        for (w, m) in &parts {
            mat_add_assign(&mut g, m, C64::new(w * pref, 0.0));
        }
        Ok(g)
    };
    let mut n = 200;
    let mut prev = rule(n)?;
    loop {
        n *= 2;
        let next = rule(n)?;
        let mut diff = next;
        mat_add_assign(&mut diff, &prev, C64::new(-1.0, 0.0));
        if mat_max_abs(&diff) <= BETA_RULE_TOL * mat_max_abs(&next) {
            return Ok(next);
        }
        if n > 6400 {
            return Err(Error::NoConvergence("radiation beta rule in mode sum".into()));
        }
        prev = next;
    }
}

/// Guided and radiation contributions to `Im G(R, R′; ω₀)` separately.
pub fn im_green_modesum_parts(fiber: &FiberSpec, omega0: f64, at: CylPoint, from: CylPoint) -> Result<(Mat3, Mat3)> {
    fiber.validate()?;
    if !(omega0 > 0.0) {
        return Err(Error::InvalidArgument(format!("frequency {omega0} must be positive")));
    }
    let guided = GuidedSet::solve(fiber, omega0)?;
    Ok((guided_part(&guided, &at, &from)?, radiation_part(fiber, omega0, &at, &from)?))
}

/// `Im G(R, R′; ω₀)` (free-space plus scattered) from the mode expansion.
pub fn im_green_modesum(fiber: &FiberSpec, omega0: f64, at: CylPoint, from: CylPoint) -> Result<GreenValue> {
    let (g, r) = im_green_modesum_parts(fiber, omega0, at, from)?;
    let mut tensor = g;
    mat_add_assign(&mut tensor, &r, C64::new(1.0, 0.0));
    Ok(GreenValue {
        tensor,
        gradient: None,
        at: (at, from),
        omega: C64::new(omega0, 0.0),
    })
}
