//! Radiation (continuum) modes of the two-layer cylinder.
//!
//! For each `(ω, β, l)` with `|β| < k n2` there are two independent
//! solutions regular at the axis. Inside the core `E_z = A J_l(hr)`,
//! `η_z = B J_l(hr)`; outside both are combinations of `J_l(qr)` and
//! `Y_l(qr)` fixed by tangential continuity. The continuum normalization
//! reduces to a Hermitian form in `(A, B)` built from the outer
//! coefficients,
//!
//! `N = (2πω/q²) [n2²(|C_E|² + |D_E|²) + |C_H|² + |D_H|²]`,
//!
//! and the two polarizations `p = ±` are its orthonormal eigenvectors.
//! `p = +` is the eigenvector dominated by `A` (E-like), and each
//! eigenvector's first nonzero component is made real and positive.

use crate::consts::C;
use crate::cvec::{Vec3, I};
use crate::error::{Error, Result};
use crate::fiber::wave::{build, Axial, WaveFields};
use crate::fiber::FiberSpec;
use crate::special::{real_with_derivatives, Kind};
use crate::C64;

/// Continuum mode label `ν = (ω, β, l, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadModeId {
    pub omega: f64,
    pub beta: f64,
    pub l: i32,
    pub p: i8,
}

/// A normalized radiation mode.
#[derive(Debug, Clone)]
pub struct RadiationMode {
    pub fiber: FiberSpec,
    pub id: RadModeId,
    h: f64,
    q: f64,
    /// `(A, B)`: coefficients of `J_l(hr)` in `E_z`, `η_z` inside.
    inner: [C64; 2],
    /// `(C_E, D_E, C_H, D_H)`: coefficients of `J_l(qr)`, `Y_l(qr)` outside.
    outer: [C64; 4],
}

struct Basis {
    h: f64,
    q: f64,
    /// outer coefficients for (A, B) = (1, 0) and (0, 1)
    cols: [[C64; 4]; 2],
}

fn basis(fiber: &FiberSpec, omega: f64, beta: f64, l: i32) -> Result<Basis> {
    let k = omega / C;
    let limit = k * fiber.n2;
    if !(beta.abs() < limit) {
        return Err(Error::EvanescentBeta { beta, limit });
    }
    let a = fiber.radius;
    let (n1s, n2s) = (fiber.n1 * fiber.n1, fiber.n2 * fiber.n2);
    let h = (n1s * k * k - beta * beta).sqrt();
    let q = ((limit - beta.abs()) * (limit + beta.abs())).sqrt();
    let lf = l as f64;
    let (ji, jpi, _) = real_with_derivatives(Kind::J, l, h * a)?;
    let (jo, jpo, _) = real_with_derivatives(Kind::J, l, q * a)?;
    let (yo, ypo, _) = real_with_derivatives(Kind::Y, l, q * a)?;
    let wr = 2.0 / (std::f64::consts::PI * q * a);
    let ik = I * k;
    let mut cols = [[C64::new(0.0, 0.0); 4]; 2];
    for (col, (ca, cb)) in [(1.0, 0.0), (0.0, 1.0)].into_iter().enumerate() {
        let (ea, hb) = (C64::new(ca, 0.0), C64::new(cb, 0.0));
        let ez = ea * ji;
        let hz = hb * ji;
        let dez = ea * h * jpi;
        let dhz = hb * h * jpi;
        let ephi = (-beta * lf / a * ez - ik * dhz) / (h * h);
        let hphi = (-beta * lf / a * hz + ik * n1s * dez) / (h * h);
        // outside derivatives from continuity of E_φ and η_φ
        let dhz_out = (-beta * lf / a * ez - q * q * ephi) / ik;
        let dez_out = (q * q * hphi + beta * lf / a * hz) / (ik * n2s);
        let solve = |f: C64, fp: C64| {
            let c = (f * ypo - yo * fp / q) / wr;
            let d = (jo * fp / q - jpo * f) / wr;
            (c, d)
        };
        let (ce, de) = solve(ez, dez_out);
        let (ch, dh) = solve(hz, dhz_out);
        cols[col] = [ce, de, ch, dh];
    }
    if cols.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Special(format!("radiation basis overflow at l = {l}, qa = {:e}", q * a)));
    }
    Ok(Basis { h, q, cols })
}

fn form(omega: f64, q: f64, n2s: f64, x: &[C64; 4], y: &[C64; 4]) -> C64 {
    let s = n2s * (x[0] * y[0].conj() + x[1] * y[1].conj()) + x[2] * y[2].conj() + x[3] * y[3].conj();
    s * (2.0 * std::f64::consts::PI * omega / (q * q))
}

/// Both polarizations `[p = +, p = −]` of the radiation modes at `(ω, β, l)`.
pub fn radiation_modes(fiber: &FiberSpec, omega: f64, beta: f64, l: i32) -> Result<[RadiationMode; 2]> {
    let mut b = basis(fiber, omega, beta, l)?;
    // the outer coefficients grow like Y_l(qa) near grazing incidence, so the
    // Gram matrix is formed from rescaled columns
    let scale = b.cols.iter().flatten().fold(0.0f64, |m, z| m.max(z.norm()));
    for z in b.cols.iter_mut().flatten() {
        *z /= scale;
    }
    let n2s = fiber.n2 * fiber.n2;
    let m11 = form(omega, b.q, n2s, &b.cols[0], &b.cols[0]).re;
    let m22 = form(omega, b.q, n2s, &b.cols[1], &b.cols[1]).re;
    let m12 = form(omega, b.q, n2s, &b.cols[1], &b.cols[0]);
    // M = [[m11, m12], [m12*, m22]] acting on (A, B)
    let half = 0.5 * (m11 - m22);
    let disc = (half * half + m12.norm_sqr()).sqrt();
    let mean = 0.5 * (m11 + m22);
    // the small eigenvalue comes from det M (Cauchy–Binet, no cancellation)
    let w = [n2s, n2s, 1.0, 1.0];
    let mut det = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let minor = b.cols[0][i] * b.cols[1][j] - b.cols[0][j] * b.cols[1][i];
            det += w[i] * w[j] * minor.norm_sqr();
        }
    }
    det *= (2.0 * std::f64::consts::PI * omega / (b.q * b.q)).powi(2);
    let lam = [mean + disc, det / (mean + disc)];
    let v0 = if m12.norm() <= 1e-15 * (m11.abs() + m22.abs()) {
        if m11 >= m22 {
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        } else {
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        }
    } else {
        // (M − λ) v = 0 → v ∝ (m12, λ − m11) or (λ − m22, m12*)
        let c1 = [m12, C64::new(lam[0] - m11, 0.0)];
        let c2 = [C64::new(lam[0] - m22, 0.0), m12.conj()];
        let pick = if c1[0].norm_sqr() + c1[1].norm_sqr() >= c2[0].norm_sqr() + c2[1].norm_sqr() {
            c1
        } else {
            c2
        };
        let n = (pick[0].norm_sqr() + pick[1].norm_sqr()).sqrt();
        [pick[0] / n, pick[1] / n]
    };
    let vecs = [v0, [-v0[1].conj(), v0[0].conj()]];
    let mut modes = Vec::with_capacity(2);
    for (v, &lv) in vecs.iter().zip(&lam) {
        let lead = if v[0].norm() > 0.0 { v[0] } else { v[1] };
        let phase = lead.conj() / lead.norm();
        let s = phase / lv.sqrt();
        let scaled = [v[0] * s, v[1] * s];
        let inner = [scaled[0] / scale, scaled[1] / scale];
        let mut outer = [C64::new(0.0, 0.0); 4];
        for (i, o) in outer.iter_mut().enumerate() {
            *o = b.cols[0][i] * scaled[0] + b.cols[1][i] * scaled[1];
        }
        modes.push((inner, outer));
    }
    // p = + is the A-dominated eigenvector
    if modes[0].0[0].norm() < modes[1].0[0].norm() {
        modes.swap(0, 1);
    }
    let make = |(inner, outer): ([C64; 2], [C64; 4]), p: i8| RadiationMode {
        fiber: *fiber,
        id: RadModeId { omega, beta, l, p },
        h: b.h,
        q: b.q,
        inner,
        outer,
    };
    let mut it = modes.into_iter();
    let plus = make(it.next().unwrap(), 1);
    let minus = make(it.next().unwrap(), -1);
    Ok([plus, minus])
}

/// Profile `(e_r, e_φ, e_z)` of radiation mode `id` at radius `r`.
pub fn radiation_profile(fiber: &FiberSpec, id: RadModeId, r: f64) -> Result<Vec3> {
    if id.p != 1 && id.p != -1 {
        return Err(Error::InvalidArgument(format!("radiation polarization p = {}", id.p)));
    }
    let [plus, minus] = radiation_modes(fiber, id.omega, id.beta, id.l)?;
    if id.p == 1 {
        plus.profile(r)
    } else {
        minus.profile(r)
    }
}

impl RadiationMode {
    pub fn profile(&self, r: f64) -> Result<Vec3> {
        let e = self.fields(r)?.e;
        if e.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Special(format!("radiation field overflow at l = {}", self.id.l)));
        }
        Ok(e)
    }

    pub(crate) fn fields(&self, r: f64) -> Result<WaveFields> {
        let k = C64::new(self.id.omega / C, 0.0);
        let l = self.id.l;
        let beta = C64::new(self.id.beta, 0.0);
        if r < self.fiber.radius {
            let x = self.h;
            let (v, d, dd) = real_with_derivatives(Kind::J, l, x * r)?;
            let [a, b] = self.inner;
            let ax = Axial {
                ez: a * v,
                dez: a * d * x,
                d2ez: a * dd * x * x,
                hz: b * v,
                dhz: b * d * x,
                d2hz: b * dd * x * x,
            };
            Ok(build(l as f64, beta, k, self.fiber.n1.powi(2), C64::new(x * x, 0.0), r, &ax))
        } else {
            let x = self.q;
            let (jv, jd, jdd) = real_with_derivatives(Kind::J, l, x * r)?;
            let (yv, yd, ydd) = real_with_derivatives(Kind::Y, l, x * r)?;
            let [ce, de, ch, dh] = self.outer;
            let ax = Axial {
                ez: ce * jv + de * yv,
                dez: (ce * jd + de * yd) * x,
                d2ez: (ce * jdd + de * ydd) * x * x,
                hz: ch * jv + dh * yv,
                dhz: (ch * jd + dh * yd) * x,
                d2hz: (ch * jdd + dh * ydd) * x * x,
            };
            Ok(build(l as f64, beta, k, self.fiber.n2.powi(2), C64::new(x * x, 0.0), r, &ax))
        }
    }

    /// `(C_E, D_E, C_H, D_H)`.
    pub fn outer_coefficients(&self) -> [C64; 4] {
        self.outer
    }

    /// `(A, B)`.
    pub fn inner_coefficients(&self) -> [C64; 2] {
        self.inner
    }

    /// Coefficient of `δ(ω − ω')` in the overlap `∫n² e^{(ν)}·e^{(ν')*} dA`
    /// between two modes sharing `β` and `l`.
    pub fn delta_overlap(&self, other: &RadiationMode) -> C64 {
        form(
            self.id.omega,
            self.q,
            self.fiber.n2 * self.fiber.n2,
            &self.outer,
            &other.outer,
        )
    }

    pub fn transverse_wavenumbers(&self) -> (f64, f64) {
        (self.h, self.q)
    }
}
