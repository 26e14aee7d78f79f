//! Normalized guided-mode profiles.

use crate::consts::{C, Z0};
use crate::cvec::{conj, norm_sqr, Vec3, I};
use crate::error::{Error, Result};
use crate::quad::{adaptive_gk, AdaptiveOptions};
use crate::special::{real_with_derivatives, Kind};
use crate::C64;

use super::dispersion::{beta_derivative, solve_dispersion};
use super::wave::{build, Axial, WaveFields};
use super::{FiberSpec, ModeFamily, ModeOrder};

/// A solved guided mode with its normalized profile.
///
/// The stored profile is the `f = +1, p = +1` member of the family
/// (`p = 0` for TE/TM); [`GuidedMode::profile`] applies the `(f, p)`
/// mirror signs. The overall phase makes `e_r` real and positive just
/// outside the surface (`e_φ` for TE modes).
#[derive(Debug, Clone)]
pub struct GuidedMode {
    pub fiber: FiberSpec,
    pub order: ModeOrder,
    pub omega: f64,
    pub beta: f64,
    pub beta_prime: f64,
    h: f64,
    q: f64,
    /// Coefficients of `J_l(hr)` in `E_z` and `η_z` inside the core.
    ez_in: C64,
    hz_in: C64,
    /// `J_l(ha)/K_l(qa)`.
    outer_scale: f64,
}

impl GuidedMode {
    pub fn solve(fiber: &FiberSpec, omega: f64, order: ModeOrder) -> Result<Self> {
        let beta = solve_dispersion(fiber, omega, order.family, order.l, order.m)?;
        let beta_prime = beta_derivative(fiber, omega, order)?;
        Self::with_beta(fiber, omega, order, beta, beta_prime)
    }

    fn with_beta(
        fiber: &FiberSpec,
        omega: f64,
        order: ModeOrder,
        beta: f64,
        beta_prime: f64,
    ) -> Result<Self> {
        let k = omega / C;
        let a = fiber.radius;
        let h = (fiber.n1 * fiber.n1 * k * k - beta * beta).sqrt();
        let q = (beta * beta - fiber.n2 * fiber.n2 * k * k).sqrt();
        let l = order.l as i32;
        let lf = order.l as f64;
        let (j, jp, _) = real_with_derivatives(Kind::J, l, h * a)?;
        let (kk, kp, _) = real_with_derivatives(Kind::K, l, q * a)?;
        let (ez_in, hz_in) = match order.family {
            ModeFamily::TE => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
            ModeFamily::TM => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            ModeFamily::HE | ModeFamily::EH => {
                // continuity of E_φ fixes η_z/E_z
                let a1 = C64::new(-beta * lf * j / (a * h * h), 0.0);
                let b1 = -I * k * jp / h;
                let a2 = C64::new(beta * lf * j / (a * q * q), 0.0);
                let b2 = I * k * (kp / kk) * j / q;
                (C64::new(1.0, 0.0), (a2 - a1) / (b1 - b2))
            }
        };
        let mut mode = Self {
            fiber: *fiber,
            order,
            omega,
            beta,
            beta_prime,
            h,
            q,
            ez_in,
            hz_in,
            outer_scale: j / kk,
        };
        let norm = mode.unnormalized_norm()?;
        let probe = mode.fields(a)?.e;
        let anchor = if order.family == ModeFamily::TE {
            probe[1]
        } else {
            probe[0]
        };
        let fix = anchor.conj() / anchor.norm() / norm.sqrt();
        mode.ez_in *= fix;
        mode.hz_in *= fix;
        Ok(mode)
    }

    fn unnormalized_norm(&self) -> Result<f64> {
        let v = self.radial_integral(|_, w: &WaveFields, n2: f64| n2 * norm_sqr(&w.e))?;
        Ok(v.0 + v.1)
    }

    /// `(∫_0^a, ∫_a^∞)` of `2πr g(r)` with adaptive Gauss–Kronrod.
    fn radial_integral<G>(&self, g: G) -> Result<(f64, f64)>
    where
        G: Fn(f64, &WaveFields, f64) -> f64,
    {
        let a = self.fiber.radius;
        let opts = AdaptiveOptions {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_intervals: 4000,
        };
        let mut fail: Option<Error> = None;
        let inner = adaptive_gk(1, 0.0, a, opts, |r, out| match self.fields(r) {
            Ok(w) => out[0] = C64::new(2.0 * std::f64::consts::PI * r * g(r, &w, self.fiber.n1.powi(2)), 0.0),
            Err(e) => fail = Some(e),
        })?;
        let q = self.q;
        let outer = adaptive_gk(1, 0.0, 1.0, opts, |s, out| {
            let r = a + s / (1.0 - s) / q;
            let jac = 1.0 / (q * (1.0 - s) * (1.0 - s));
            match self.fields(r) {
                Ok(w) => {
                    let v = 2.0 * std::f64::consts::PI * r * g(r, &w, self.fiber.n2.powi(2)) * jac;
                    out[0] = C64::new(if v.is_finite() { v } else { 0.0 }, 0.0);
                }
                Err(e) => fail = Some(e),
            }
        })?;
        if let Some(e) = fail {
            return Err(e);
        }
        Ok((inner.value[0].re, outer.value[0].re))
    }

    pub(crate) fn fields(&self, r: f64) -> Result<WaveFields> {
        let a = self.fiber.radius;
        let l = self.order.l as i32;
        let k = self.omega / C;
        let ax = |c: f64, v: f64, d: f64, dd: f64, x: f64| Axial {
            ez: self.ez_in * c * v,
            dez: self.ez_in * c * d * x,
            d2ez: self.ez_in * c * dd * x * x,
            hz: self.hz_in * c * v,
            dhz: self.hz_in * c * d * x,
            d2hz: self.hz_in * c * dd * x * x,
        };
        if r < a {
            let (v, d, dd) = real_with_derivatives(Kind::J, l, self.h * r)?;
            let axial = ax(1.0, v, d, dd, self.h);
            Ok(build(
                l as f64,
                C64::new(self.beta, 0.0),
                C64::new(k, 0.0),
                self.fiber.n1.powi(2),
                C64::new(self.h * self.h, 0.0),
                r,
                &axial,
            ))
        } else {
            let (v, d, dd) = real_with_derivatives(Kind::K, l, self.q * r)?;
            let axial = ax(self.outer_scale, v, d, dd, self.q);
            Ok(build(
                l as f64,
                C64::new(self.beta, 0.0),
                C64::new(k, 0.0),
                self.fiber.n2.powi(2),
                C64::new(-self.q * self.q, 0.0),
                r,
                &axial,
            ))
        }
    }

    /// Reference profile `(e_r, e_φ, e_z)` of the `f = +1, p = +1` mode (1/m).
    pub fn reference_profile(&self, r: f64) -> Result<Vec3> {
        Ok(self.fields(r)?.e)
    }

    /// Profile `(e_r, p e_φ, f e_z)` of the mode with direction `f` and
    /// polarization `p` (use `p = 0` for TE/TM), without the phase factor
    /// `e^{i(fβz + plφ)}`.
    pub fn profile(&self, f: i8, p: i8, r: f64) -> Result<Vec3> {
        Ok(mirror(&self.fields(r)?.e, f, p))
    }

    /// Profile and its radial derivative for the `(f, p)` mode.
    pub fn profile_with_derivative(&self, f: i8, p: i8, r: f64) -> Result<(Vec3, Vec3)> {
        let w = self.fields(r)?;
        Ok((mirror(&w.e, f, p), mirror(&w.de, f, p)))
    }

    /// Scaled magnetic profile `Z₀h` of the reference mode.
    pub fn reference_magnetic_profile(&self, r: f64) -> Result<Vec3> {
        Ok(self.fields(r)?.eta)
    }

    /// `∫ n²|e|² dA`, split into core and cladding parts.
    pub fn normalization_integral(&self) -> Result<(f64, f64)> {
        self.radial_integral(|_, w, n2| n2 * norm_sqr(&w.e))
    }

    /// Axial Poynting flux `(1/2)∫Re(E×H*)·ẑ dA` (W) carried by the profile
    /// for a unit amplitude `𝒜 = 1 V`, split into core and cladding parts.
    pub fn power_per_unit_amplitude(&self) -> Result<(f64, f64)> {
        self.radial_integral(|_, w, _| {
            let eta = conj(&w.eta);
            (w.e[0] * eta[1] - w.e[1] * eta[0]).re / (2.0 * Z0)
        })
    }

    pub fn transverse_wavenumbers(&self) -> (f64, f64) {
        (self.h, self.q)
    }

    pub fn k(&self) -> f64 {
        self.omega / C
    }
}

fn mirror(e: &Vec3, f: i8, p: i8) -> Vec3 {
    let pe = if p == 0 { 1.0 } else { p as f64 };
    [e[0], e[1] * pe, e[2] * f as f64]
}
