//! Eigenvalue equation of the step-index fiber.
//!
//! Roots are sought in the transverse core parameter `u = a√(n1²k² − β²)` on
//! `(0, V)`, with `w = √(V² − u²)`. The hybrid equation is split into its
//! HE and EH branches and multiplied through by `J_l(u)` so that the scanned
//! function has no poles.

use crate::consts::C;
use crate::error::{Error, Result};
use crate::roots::{bisect, scan_brackets};
use crate::special::{bessel_j, bessel_k};
use crate::C64;

use super::{FiberSpec, GuidedModeId, ModeFamily, ModeOrder};

const SCAN_CELLS: usize = 10_000;

fn jv(l: i32, x: f64) -> f64 {
    bessel_j(l, C64::new(x, 0.0)).map(|z| z.re).unwrap_or(f64::NAN)
}

fn kv(l: i32, x: f64) -> f64 {
    bessel_k(l, C64::new(x, 0.0)).map(|z| z.re).unwrap_or(f64::NAN)
}

/// Characteristic function and the magnitude of its largest term.
fn characteristic(
    fiber: &FiberSpec,
    k: f64,
    family: ModeFamily,
    l: u32,
    u: f64,
    w: f64,
) -> (f64, f64) {
    let (n1s, n2s) = (fiber.n1 * fiber.n1, fiber.n2 * fiber.n2);
    match family {
        ModeFamily::TE | ModeFamily::TM => {
            let (j0, j1) = (jv(0, u), jv(1, u));
            let (k0, k1) = (kv(0, w), kv(1, w));
            let (c1, c2) = if family == ModeFamily::TE {
                (1.0, 1.0)
            } else {
                (n1s, n2s)
            };
            let t1 = c1 * j1 * w * k0;
            let t2 = c2 * u * j0 * k1;
            (t1 + t2, t1.abs().max(t2.abs()))
        }
        ModeFamily::HE | ModeFamily::EH => {
            let li = l as i32;
            let lf = l as f64;
            let j = jv(li, u);
            let jp = jv(li - 1, u) - lf / u * j;
            // K_l'/(w K_l) = −l/w² − t
            let t = kv(li - 1, w) / (w * kv(li, w));
            let kr = -lf / (w * w) - t;
            let beta = (n2s * k * k + (w / fiber.radius).powi(2)).sqrt();
            let geo = 1.0 / (u * u) + 1.0 / (w * w);
            let aniso = (n1s - n2s) / (2.0 * n1s) * kr;
            let spin = lf * beta / (fiber.n1 * k) * geo;
            let root = (aniso * aniso + spin * spin).sqrt();
            let avg = (n1s + n2s) / (2.0 * n1s) * kr;
            let t1 = jp / u;
            let bracket = if family == ModeFamily::HE {
                // avg + root cancels near cutoff; use (root² − avg²)/(root − avg)
                // with the leading 1/w⁴ terms of root² − avg² removed analytically.
                let ak = fiber.radius * k;
                let x = n2s * (1.0 / (u * u) - t / lf) * (2.0 / (w * w) + 1.0 / (u * u) + t / lf)
                    + (w / ak).powi(2) * geo * geo;
                lf * lf / n1s * x / (root - avg)
            } else {
                avg - root
            };
            let t2 = j * bracket;
            (t1 + t2, t1.abs().max(t2.abs()))
        }
    }
}

/// Relative residual of the characteristic function at a given `β`.
pub fn char_residual(fiber: &FiberSpec, omega: f64, order: ModeOrder, beta: f64) -> f64 {
    let k = omega / C;
    let u = fiber.radius * (fiber.n1 * fiber.n1 * k * k - beta * beta).sqrt();
    let w = fiber.radius * (beta * beta - fiber.n2 * fiber.n2 * k * k).sqrt();
    let (f, scale) = characteristic(fiber, k, order.family, order.l, u, w);
    f.abs() / scale
}

/// Roots as `w = a√(β² − n2²k²)`, ordered by increasing `u`.
fn family_roots(fiber: &FiberSpec, omega: f64, family: ModeFamily, l: u32) -> Result<Vec<f64>> {
    let k = omega / C;
    let v = fiber.v_number(omega);
    let in_u = |u: f64| characteristic(fiber, k, family, l, u, (v * v - u * u).sqrt()).0;
    let in_w = |w: f64| characteristic(fiber, k, family, l, (v * v - w * w).sqrt(), w).0;
    let mut roots = Vec::new();
    for (lo, hi) in scan_brackets(0.0, v, SCAN_CELLS, in_u) {
        let u = bisect(lo, hi, 4.0 * f64::EPSILON, 400, in_u)?;
        roots.push((v * v - u * u).sqrt());
    }
    // Weakly guided roots (thin fibers, modes just above cutoff) sit inside
    // the last scan cell; follow w geometrically toward zero there.
    let u_last = v * SCAN_CELLS as f64 / (SCAN_CELLS + 1) as f64;
    let mut prev_w = (v * v - u_last * u_last).sqrt();
    let mut prev_f = in_w(prev_w);
    for _ in 0..200 {
        let w = prev_w * 0.5;
        let fw = in_w(w);
        if !fw.is_finite() || w < 1e-300 {
            break;
        }
        if prev_f.is_finite() && prev_f.signum() != fw.signum() {
            roots.push(bisect(w, prev_w, 4.0 * f64::EPSILON, 400, in_w)?);
            break;
        }
        prev_w = w;
        prev_f = fw;
    }
    Ok(roots)
}

/// Propagation constant `β` of mode `(family, l, m)` at angular frequency `omega`.
pub fn solve_dispersion(
    fiber: &FiberSpec,
    omega: f64,
    family: ModeFamily,
    l: u32,
    m: u32,
) -> Result<f64> {
    let order = ModeOrder::new(family, l, m)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!("omega = {omega}")));
    }
    fiber.validate()?;
    let roots = family_roots(fiber, omega, family, l)?;
    let w = *roots
        .get(m as usize - 1)
        .ok_or(Error::ModeBelowCutoff { family, l, m, omega })?;
    let k = omega / C;
    let beta = (fiber.n2 * fiber.n2 * k * k + (w / fiber.radius).powi(2)).sqrt();
    let resid = char_residual(fiber, omega, order, beta);
    if !(resid < 1e-10) {
        return Err(Error::NoConvergence(format!(
            "{order}: characteristic residual {resid:e} at beta = {beta:e}"
        )));
    }
    Ok(beta)
}

/// Every guided mode order above cutoff, ordered by (family, l, m).
pub fn guided_orders(fiber: &FiberSpec, omega: f64) -> Vec<ModeOrder> {
    let mut out = Vec::new();
    for family in [ModeFamily::HE, ModeFamily::EH, ModeFamily::TE, ModeFamily::TM] {
        let ls: Box<dyn Iterator<Item = u32>> = if family.is_hybrid() {
            Box::new(1..)
        } else {
            Box::new(0..1)
        };
        for l in ls {
            let n = family_roots(fiber, omega, family, l).map(|r| r.len()).unwrap_or(0);
            if n == 0 {
                break;
            }
            for m in 1..=n as u32 {
                out.push(ModeOrder { family, l, m });
            }
        }
    }
    out
}

/// Every guided mode above cutoff with both directions and all
/// polarizations, ordered by (family, l, m, f, p) with `f` and `p` listed
/// as `+1` before `−1`.
pub fn list_guided_modes(fiber: &FiberSpec, omega: f64) -> Vec<GuidedModeId> {
    let mut out = Vec::new();
    for order in guided_orders(fiber, omega) {
        for f in [1, -1] {
            for &p in order.polarizations() {
                out.push(GuidedModeId { order, f, p });
            }
        }
    }
    out
}

/// `dβ/dω` by central differences with step `1e-6 ω`; `points` is 3 or 5.
pub fn beta_derivative_stencil(
    fiber: &FiberSpec,
    omega: f64,
    order: ModeOrder,
    points: usize,
) -> Result<f64> {
    let d = 1e-6 * omega;
    let b = |s: f64| solve_dispersion(fiber, omega + s * d, order.family, order.l, order.m);
    match points {
        3 => Ok((b(1.0)? - b(-1.0)?) / (2.0 * d)),
        5 => Ok((b(-2.0)? - 8.0 * b(-1.0)? + 8.0 * b(1.0)? - b(2.0)?) / (12.0 * d)),
        _ => Err(Error::InvalidArgument(format!("{points}-point stencil"))),
    }
}

/// `β' = dβ/dω` from the five-point stencil.
pub fn beta_derivative(fiber: &FiberSpec, omega: f64, order: ModeOrder) -> Result<f64> {
    beta_derivative_stencil(fiber, omega, order, 5)
}
