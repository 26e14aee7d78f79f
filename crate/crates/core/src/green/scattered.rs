//! Scattered part of the Green tensor from the cylindrical-harmonic
//! expansion.
//!
//! For each azimuthal order `l` and axial wavenumber `h` the incident field
//! of the dipole is written in terms of its axial components, the 2×2
//! boundary system at `r = a` gives the scattered `E_z`, `η_z = Z₀H_z`
//! amplitudes, and the transverse components follow from the axial ones.
//! All radial functions are carried as ratios `H_l(κr)/H_l(κa)` so that no
//! Bessel function is ever formed at large order.
//!
//! On the real frequency axis the `h` integral runs along a contour pushed
//! off the real axis (below the guided-mode poles at `h = +β`, above those
//! at `h = −β`) for `|Re h| < T` and along the real axis beyond; on the
//! imaginary axis the integrand is smooth and real-axis quadrature is used.

use std::cell::Cell;
use std::f64::consts::PI;

use super::{CylPoint, GreenValue};
use crate::consts::C;
use crate::cvec::{zero_mat, zero_tensor, Mat3, Tensor3, I, ZERO};
use crate::error::{Error, Result};
use crate::fiber::FiberSpec;
use crate::quad::{adaptive_gk, AdaptiveOptions};
use crate::special::{j_log_derivatives, jh_product, HankelSeq};
use crate::C64;

/// Integration-path and tolerance settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    /// Relative tolerance of the adaptive `h` quadrature.
    pub rel_tol: f64,
    /// Deformation height `δ` in units of `|k|`.
    pub height: f64,
    /// Deformed segment half-length `T` in units of `n1 |k|`.
    pub extent: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-11,
            height: 0.15,
            extent: 1.3,
        }
    }
}

const L_TOL: f64 = 1e-15;
const L_CAP: usize = 40_000;
/// `exp(−DECAY)` is the relative size at which the evanescent tail is cut.
const DECAY: f64 = 80.0;

struct Setup {
    a: f64,
    n1sq: f64,
    n2sq: f64,
    k: C64,
    k1sq: C64,
    k2sq: C64,
    r: f64,
    rp: f64,
    dphi: f64,
    dz: f64,
    gradient: bool,
    /// Largest harmonic term seen so far in this evaluation; the series at
    /// any `h` is truncated relative to it, so the far tail of the `h`
    /// integral does not demand full relative accuracy.
    scale: Cell<f64>,
}

fn outgoing_sqrt(z: C64) -> C64 {
    let s = z.sqrt();
    if s.im < 0.0 || (s.im == 0.0 && s.re < 0.0) {
        -s
    } else {
        s
    }
}

impl Setup {
    fn dim(&self) -> usize {
        if self.gradient {
            36
        } else {
            9
        }
    }

    /// Sum over `l` of the integrand at `+h` and `−h`, times `jac`, written
    /// into `out` (9 tensor components, then 27 gradient components).
    fn integrand(&self, h: C64, jac: C64, out: &mut [C64]) -> Result<()> {
        let kappa = outgoing_sqrt(self.k2sq - h * h);
        let kappa1 = (self.k1sq - h * h).sqrt();
        let rmax = self.r.max(self.rp);
        let ratio = (self.r * self.rp / (self.a * self.a)).ln();
        let mut lmax = ((kappa.norm() * rmax + 40.0 / ratio).ceil() as usize).max(8);
        loop {
            if lmax > L_CAP {
                return Err(Error::NoConvergence(format!(
                    "harmonic series at h = {h} needs more than {L_CAP} orders"
                )));
            }
            out.iter_mut().for_each(|z| *z = ZERO);
            if self.sum_orders(h, kappa, kappa1, jac, lmax, out)? {
                return Ok(());
            }
            lmax *= 2;
        }
    }

    /// Returns `false` if the series has not converged by `lmax`.
    fn sum_orders(&self, h: C64, kappa: C64, kappa1: C64, jac: C64, lmax: usize, out: &mut [C64]) -> Result<bool> {
        let a = self.a;
        let seq_a = HankelSeq::new(kappa * a, lmax)?;
        let seq_r = HankelSeq::new(kappa * self.r, lmax)?;
        let ratio_r = seq_r.ratio_to(&seq_a);
        let (seq_rp, ratio_rp) = if self.rp == self.r {
            (None, ratio_r.clone())
        } else {
            let s = HankelSeq::new(kappa * self.rp, lmax)?;
            let rt = s.ratio_to(&seq_a);
            (Some(s), rt)
        };
        let dj_a = j_log_derivatives(kappa * a, lmax)?;
        let dj_1 = j_log_derivatives(kappa1 * a, lmax)?;
        let k = self.k;
        let k2 = k * k;
        let kappa_sq = kappa * kappa;
        let kappa1_sq = kappa1 * kappa1;
        let mut quiet = 0;
        let mut running = 0.0f64;
        for m in 0..=lmax {
            let d_ja = dj_a[m];
            let d_ha = seq_a.log_derivative(m);
            let d_1 = dj_1[m];
            let d_hr = seq_r.log_derivative(m);
            let h2_r = seq_r.second_log_derivative(m);
            let d_hrp = match &seq_rp {
                Some(s) => s.log_derivative(m),
                None => d_hr,
            };
            let jh = jh_product(kappa * a, d_ja, d_ha);
            let pre = I / (8.0 * PI) * jh * ratio_rp[m];
            let hat_r = ratio_r[m];
            let q1 = -I * k * d_1 / kappa1;
            let qj = -I * k * d_ja / kappa;
            let qh = -I * k * d_ha / kappa;
            let r1 = I * k * self.n1sq * d_1 / kappa1;
            let rj = I * k * self.n2sq * d_ja / kappa;
            let rh = I * k * self.n2sq * d_ha / kappa;
            let mut shell = 0.0f64;
            let orders: &[f64] = if m == 0 { &[0.0] } else { &[1.0, -1.0] };
            for &sl in orders {
                let l = sl * m as f64;
                for sh in [1.0, -1.0] {
                    let hh = h * sh;
                    let p1 = -hh * l / (a * kappa1_sq);
                    let p2 = -hh * l / (a * kappa_sq);
                    let (a11, a12, a21) = (p1 - p2, q1 - qh, r1 - rh);
                    let det = a11 * a11 - a12 * a21;
                    let phase = (I * (l * self.dphi + hh * self.dz)).exp() * jac / k2;
                    for j in 0..3 {
                        // incident axial amplitudes for p = unit vector j at R′
                        let (alpha, beta) = match j {
                            0 => (
                                pre * (-I * hh * kappa * d_hrp) / self.n2sq,
                                pre * I * k * (I * l / self.rp),
                            ),
                            1 => (pre * (-hh * l / self.rp) / self.n2sq, pre * I * k * kappa * d_hrp),
                            _ => (pre * kappa_sq / self.n2sq, ZERO),
                        };
                        let b1 = (p2 - p1) * alpha + (qj - q1) * beta;
                        let b2 = (rj - r1) * alpha + (p2 - p1) * beta;
                        let c = (b1 * a11 - a12 * b2) / det;
                        let d = (a11 * b2 - a21 * b1) / det;
                        let f = hat_r * phase;
                        let ez = c * f;
                        let er = (I * hh * kappa * d_hr * c - l * k / self.r * d) * f / kappa_sq;
                        let ephi = (-hh * l / self.r * c - I * k * kappa * d_hr * d) * f / kappa_sq;
                        out[j] += er;
                        out[3 + j] += ephi;
                        out[6 + j] += ez;
                        shell = shell.max(er.norm()).max(ephi.norm()).max(ez.norm());
                        if self.gradient {
                            let inv_r = 1.0 / self.r;
                            let t = kappa * d_hr * inv_r - inv_r * inv_r;
                            let dez = c * kappa * d_hr * f;
                            let der = (I * hh * kappa_sq * h2_r * c - l * k * t * d) * f / kappa_sq;
                            let dephi = (-hh * l * t * c - I * k * kappa_sq * h2_r * d) * f / kappa_sq;
                            let e = [er, ephi, ez];
                            let dr = [der, dephi, dez];
                            let dp = [
                                (I * l * er - ephi) * inv_r,
                                (I * l * ephi + er) * inv_r,
                                I * l * ez * inv_r,
                            ];
                            for i in 0..3 {
                                out[9 + 3 * i + j] += dr[i];
                                out[18 + 3 * i + j] += dp[i];
                                out[27 + 3 * i + j] += I * hh * e[i];
                            }
                        }
                    }
                }
            }
            running = running.max(shell);
            if !running.is_finite() {
                return Err(Error::Special(format!("non-finite harmonic term at h = {h}, l = {m}")));
            }
            self.scale.set(self.scale.get().max(running));
            if m >= 2 && shell <= L_TOL * self.scale.get() {
                quiet += 1;
                if quiet >= 2 {
                    return Ok(true);
                }
            } else {
                quiet = 0;
            }
        }
        Ok(false)
    }
}

fn unpack(v: &[C64], gradient: bool) -> (Mat3, Option<Tensor3>) {
    let mut g = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = v[3 * i + j];
        }
    }
    if !gradient {
        return (g, None);
    }
    let mut t = zero_tensor();
    for kk in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                t[kk][i][j] = v[9 + 9 * kk + 3 * i + j];
            }
        }
    }
    (g, Some(t))
}

fn evaluate(
    fiber: &FiberSpec,
    omega: C64,
    at: CylPoint,
    from: CylPoint,
    gradient: bool,
    opts: ContourOptions,
) -> Result<GreenValue> {
    fiber.validate()?;
    for p in [&at, &from] {
        if !(p.r > fiber.radius) {
            return Err(Error::InsideFiber {
                r: p.r,
                a: fiber.radius,
            });
        }
    }
    if omega.im < 0.0 || omega.norm() == 0.0 || !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "frequency {omega} must be nonzero with Im ω ≥ 0"
        )));
    }
    let k = omega / C;
    let setup = Setup {
        a: fiber.radius,
        n1sq: fiber.n1 * fiber.n1,
        n2sq: fiber.n2 * fiber.n2,
        k,
        k1sq: k * k * fiber.n1 * fiber.n1,
        k2sq: k * k * fiber.n2 * fiber.n2,
        r: at.r,
        rp: from.r,
        dphi: at.phi - from.phi,
        dz: at.z - from.z,
        gradient,
        scale: Cell::new(0.0),
    };
    let dim = setup.dim();
    let quad = AdaptiveOptions {
        abs_tol: 0.0,
        rel_tol: opts.rel_tol,
        max_intervals: 4000,
    };
    let gap = at.r + from.r - 2.0 * fiber.radius;
    let h_max = DECAY / gap + fiber.n1 * k.norm();
    let mut total = vec![ZERO; dim];
    let mut failure = None;
    let sign = if omega.re == 0.0 { 0.0 } else { omega.re.signum() };
    let t_dev = if sign == 0.0 {
        0.0
    } else {
        (opts.extent * fiber.n1 * k.norm()).min(h_max)
    };
    if t_dev > 0.0 {
        let delta = opts.height * k.norm();
        let res = adaptive_gk(dim, 0.0, t_dev, quad, |t, o| {
            let w = PI * t / t_dev;
            let h = C64::new(t, -delta * sign * w.sin());
            let jac = C64::new(1.0, -delta * sign * PI / t_dev * w.cos());
            if let Err(e) = setup.integrand(h, jac, o) {
                failure.get_or_insert(e);
            }
        })?;
        for (t, v) in total.iter_mut().zip(&res.value) {
            *t += *v;
        }
    }
    if h_max > t_dev {
        let res = adaptive_gk(dim, t_dev, h_max, quad, |t, o| {
            if let Err(e) = setup.integrand(C64::new(t, 0.0), C64::new(1.0, 0.0), o) {
                failure.get_or_insert(e);
            }
        })?;
        for (t, v) in total.iter_mut().zip(&res.value) {
            *t += *v;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let (tensor, gradient) = unpack(&total, gradient);
    Ok(GreenValue {
        tensor,
        gradient,
        at: (at, from),
        omega,
    })
}

/// Scattered Green tensor `G⁽ᴿ⁾(R, R′; ω)` for `ω` on the real axis or in
/// the upper half plane (including the imaginary axis).
pub fn scattered_green(fiber: &FiberSpec, omega: C64, at: CylPoint, from: CylPoint) -> Result<GreenValue> {
    evaluate(fiber, omega, at, from, false, ContourOptions::default())
}

/// As [`scattered_green`], also returning the gradient with respect to the
/// first argument.
pub fn scattered_green_with_gradient(
    fiber: &FiberSpec,
    omega: C64,
    at: CylPoint,
    from: CylPoint,
    opts: ContourOptions,
) -> Result<GreenValue> {
    evaluate(fiber, omega, at, from, true, opts)
}

/// `∂_k G⁽ᴿ⁾_ij(R, R′)` with respect to the first argument, at `R′ = R`.
pub fn green_gradient(fiber: &FiberSpec, omega: C64, at: CylPoint) -> Result<Tensor3> {
    let v = evaluate(fiber, omega, at, at, true, ContourOptions::default())?;
    Ok(v.gradient.expect("gradient requested"))
}
