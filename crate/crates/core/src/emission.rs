//! Atom–mode coupling coefficients and spontaneous-emission rates.
//!
//! Rates are assembled from dipole-independent tensors evaluated once per
//! radius ([`RateTensors`]); contracting them with a dipole gives the
//! guided rates per family and direction, the β-resolved radiation rate
//! and the recoil force of spontaneous emission.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::consts::{dipole_squared, C, EPS0, HBAR};
use crate::cvec::{
    bilinear, cart_to_cyl, conj, dot, mat_add_assign, mat_max_abs, outer, zero_mat, Mat3, Vec3, I,
};
use crate::error::{Error, Result};
use crate::fiber::{guided_orders, FiberSpec, GuidedMode, ModeOrder};
use crate::quad::GaussLegendre;
use crate::radiation::{radiation_modes, RadiationMode};
use crate::C64;

/// Basis in which a dipole orientation is specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DipoleBasis {
    /// Fixed Cartesian components `(x, y, z)`.
    Cartesian,
    /// Components `(r, φ, z)` in the local basis at the atom's azimuth.
    Cylindrical,
}

/// Transition dipole matrix element `d = d·d̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleMoment {
    pub orientation: Vec3,
    pub basis: DipoleBasis,
    /// `|d|` (C m).
    pub magnitude: f64,
}

impl DipoleMoment {
    /// Normalizes `orientation` to `d̂·d̂* = 1`.
    pub fn new(orientation: Vec3, basis: DipoleBasis, magnitude: f64) -> Result<Self> {
        let n = orientation.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidArgument("dipole orientation must be nonzero".into()));
        }
        if !(magnitude > 0.0) {
            return Err(Error::InvalidArgument(format!("dipole magnitude {magnitude}")));
        }
        Ok(Self {
            orientation: orientation.map(|z| z / n),
            basis,
            magnitude,
        })
    }

    /// Dipole whose magnitude reproduces the free-space linewidth `gamma0`
    /// at transition frequency `omega0`.
    pub fn from_linewidth(orientation: Vec3, basis: DipoleBasis, omega0: f64, gamma0: f64) -> Result<Self> {
        Self::new(orientation, basis, dipole_squared(omega0, gamma0).sqrt())
    }

    /// Local cylindrical components of `d` (C m) at azimuth `phi`.
    pub fn local(&self, phi: f64) -> Vec3 {
        let v = match self.basis {
            DipoleBasis::Cartesian => cart_to_cyl(&self.orientation, phi),
            DipoleBasis::Cylindrical => self.orientation,
        };
        v.map(|z| z * self.magnitude)
    }

    pub fn is_real(&self) -> bool {
        // real up to a global phase
        let lead = self
            .orientation
            .iter()
            .copied()
            .fold(C64::new(0.0, 0.0), |acc, z| if z.norm() > acc.norm() { z } else { acc });
        let ph = lead.conj() / lead.norm();
        self.orientation.iter().all(|z| (z * ph).im.abs() < 1e-15)
    }
}

/// Transition frequency, linewidth, dipole and position of the atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpec {
    pub omega0: f64,
    pub gamma0: f64,
    pub dipole: DipoleMoment,
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl AtomSpec {
    pub fn validate(&self, fiber: &FiberSpec) -> Result<()> {
        if !(self.r > fiber.radius) {
            return Err(Error::InsideFiber {
                r: self.r,
                a: fiber.radius,
            });
        }
        if !(self.gamma0 > 0.0 && self.omega0 > 0.0) {
            return Err(Error::InvalidArgument("omega0 and gamma0 must be positive".into()));
        }
        Ok(())
    }

    /// Dipole in local cylindrical components at the atom.
    pub fn d_local(&self) -> Vec3 {
        self.dipole.local(self.phi)
    }
}

/// All guided modes supported at one frequency.
#[derive(Debug, Clone)]
pub struct GuidedSet {
    pub omega: f64,
    pub modes: Vec<GuidedMode>,
}

impl GuidedSet {
    pub fn solve(fiber: &FiberSpec, omega: f64) -> Result<Self> {
        let modes = guided_orders(fiber, omega)
            .into_iter()
            .map(|o| GuidedMode::solve(fiber, omega, o))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { omega, modes })
    }
}

/// `e` of the `(f, p)` mode and its azimuthal derivative companion
/// `ẽ = (i m e_r − e_φ, i m e_φ + e_r, i m e_z)` with `m` the azimuthal phase
/// index, so that `∂_φ(d·e e^{imφ}) = (d·ẽ) e^{imφ}` for a Cartesian-fixed `d`.
fn with_rotation(e: &Vec3, m: f64) -> Vec3 {
    [
        I * m * e[0] - e[1],
        I * m * e[1] + e[0],
        I * m * e[2],
    ]
}

/// Coupling coefficient `G_μ = √(ωβ'/(4πε₀ħ)) (d·e) e^{i(fβz + plφ)}` of
/// guided mode `(f, p)`.
pub fn coupling_guided(mode: &GuidedMode, f: i8, p: i8, atom: &AtomSpec) -> Result<C64> {
    let e = mode.profile(f, p, atom.r)?;
    let d = atom.d_local();
    let phase = I * (f as f64 * mode.beta * atom.z + p as f64 * mode.order.l as f64 * atom.phi);
    let c = (mode.omega * mode.beta_prime / (4.0 * PI * EPS0 * HBAR)).sqrt();
    Ok(dot(&d, &e) * phase.exp() * c)
}

/// Counter-rotating coefficient `G̃_μ` (uses `d*`).
pub fn coupling_guided_counter(mode: &GuidedMode, f: i8, p: i8, atom: &AtomSpec) -> Result<C64> {
    let e = mode.profile(f, p, atom.r)?;
    let d = conj(&atom.d_local());
    let phase = I * (f as f64 * mode.beta * atom.z + p as f64 * mode.order.l as f64 * atom.phi);
    let c = (mode.omega * mode.beta_prime / (4.0 * PI * EPS0 * HBAR)).sqrt();
    Ok(dot(&d, &e) * phase.exp() * c)
}

/// Coupling coefficient `G_ν = √(ω/(4πε₀ħ)) (d·e) e^{i(βz + lφ)}`.
pub fn coupling_radiation(mode: &RadiationMode, atom: &AtomSpec) -> Result<C64> {
    let e = mode.profile(atom.r)?;
    let d = atom.d_local();
    let phase = I * (mode.id.beta * atom.z + mode.id.l as f64 * atom.phi);
    let c = (mode.id.omega / (4.0 * PI * EPS0 * HBAR)).sqrt();
    Ok(dot(&d, &e) * phase.exp() * c)
}

/// Dipole-independent emission tensors of one guided family and direction.
#[derive(Debug, Clone)]
pub struct GuidedChannel {
    pub order: ModeOrder,
    pub f: i8,
    pub beta: f64,
    pub beta_prime: f64,
    /// `Σ_p e ⊗ e*`.
    pub m: Mat3,
    /// `Σ_p e* ⊗ ẽ`.
    pub q: Mat3,
}

/// Dipole-independent radiation tensors at one node of the β quadrature.
#[derive(Debug, Clone)]
pub struct RadiationSample {
    pub beta: f64,
    /// Quadrature weight in β (rad/m).
    pub weight: f64,
    /// `Σ_{lp} e ⊗ e*`.
    pub m: Mat3,
    /// `Σ_{lp} e* ⊗ ẽ`.
    pub q: Mat3,
}

/// Emission tensors at one radius and frequency.
#[derive(Debug, Clone)]
pub struct RateTensors {
    pub omega: f64,
    pub r: f64,
    pub guided: Vec<GuidedChannel>,
    pub radiation: Vec<RadiationSample>,
}

/// Relative tolerance of the azimuthal-order sums.
pub const L_SUM_TOL: f64 = 1e-13;
/// Relative agreement required between successive β rules.
pub const BETA_RULE_TOL: f64 = 1e-7;
const MAX_L: i32 = 400;

/// Sums `accumulate(l, modes)` over `l = 0, ±1, ±2, …` for the radiation
/// modes at `(ω, β)`. The sum stops once two consecutive |l| shells each
/// change the monitored magnitude by less than `L_SUM_TOL` of the total
/// (and |l| ≥ 4). `accumulate` returns the magnitude of its contribution.
pub(crate) fn radiation_l_sum<F>(fiber: &FiberSpec, omega: f64, beta: f64, total: &dyn Fn() -> f64, mut accumulate: F) -> Result<()>
where
    F: FnMut(i32, &[RadiationMode; 2]) -> Result<f64>,
{
    let mut quiet = 0;
    for shell in 0..=MAX_L {
        let mut contrib = 0.0;
        let ls: &[i32] = if shell == 0 { &[0] } else { &[shell, -shell] };
        let mut exhausted = false;
        for &l in ls {
            match radiation_modes(fiber, omega, beta, l) {
                Ok(modes) => match accumulate(l, &modes) {
                    Ok(c) => contrib += c,
                    Err(Error::Special(_)) if shell > 4 => exhausted = true,
                    Err(e) => return Err(e),
                },
                // Y_l overflow at tiny qa and large l: the shell is negligible
                Err(Error::Special(_)) if shell > 4 => exhausted = true,
                Err(e) => return Err(e),
            }
        }
        if exhausted {
            return Ok(());
        }
        if shell >= 4 && contrib <= L_SUM_TOL * total() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence(format!(
        "radiation l-sum at beta = {beta:e} did not converge by |l| = {MAX_L}"
    )))
}

fn radiation_sample(fiber: &FiberSpec, omega: f64, r: f64, beta: f64, weight: f64) -> Result<RadiationSample> {
    let mut m = zero_mat();
    let mut q = zero_mat();
    let mut running = 0.0f64;
    let total = std::cell::Cell::new(0.0f64);
    radiation_l_sum(fiber, omega, beta, &|| total.get(), |l, modes| {
        let mut shell = zero_mat();
        for mode in modes {
            let e = mode.profile(r)?;
            let et = with_rotation(&e, l as f64);
            let mm = outer(&e, &conj(&e));
            mat_add_assign(&mut shell, &mm, C64::new(1.0, 0.0));
            mat_add_assign(&mut q, &outer(&conj(&e), &et), C64::new(1.0, 0.0));
        }
        mat_add_assign(&mut m, &shell, C64::new(1.0, 0.0));
        running = mat_max_abs(&m);
        total.set(running);
        Ok(mat_max_abs(&shell))
    })?;
    Ok(RadiationSample { beta, weight, m, q })
}

/// Nodes `(β, weight)` of the radiation-band rule with `n` points per half.
///
/// β = k n2 sin θ with θ = ±(π/2)(1 − (1 − u)³): the cubic clustering
/// smooths the q ln q behavior of the integrand at grazing incidence.
pub(crate) fn beta_nodes(kn2: f64, n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::<f64>::new(n);
    let mut nodes = Vec::with_capacity(2 * n);
    for sign in [-1.0, 1.0] {
        for (u, w) in rule.mapped(0.0, 1.0) {
            let v = 1.0 - u;
            let theta = PI / 2.0 * (1.0 - v * v * v);
            let dtheta = 1.5 * PI * v * v;
            if theta.cos() < 1e-7 {
                // below double-precision resolution of q; weight is O(1e-12)
                continue;
            }
            nodes.push((sign * kn2 * theta.sin(), w * dtheta * kn2 * theta.cos()));
        }
    }
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    nodes
}

fn radiation_rule(fiber: &FiberSpec, omega: f64, r: f64, n: usize) -> Result<Vec<RadiationSample>> {
    use rayon::prelude::*;
    beta_nodes(omega / C * fiber.n2, n)
        .par_iter()
        .map(|&(beta, w)| radiation_sample(fiber, omega, r, beta, w))
        .collect()
}

fn integrated(samples: &[RadiationSample]) -> [Mat3; 3] {
    let mut out = [zero_mat(); 3];
    for s in samples {
        mat_add_assign(&mut out[0], &s.m, C64::new(s.weight, 0.0));
        mat_add_assign(&mut out[1], &s.m, C64::new(s.weight * s.beta, 0.0));
        mat_add_assign(&mut out[2], &s.q, C64::new(s.weight, 0.0));
    }
    out
}

impl RateTensors {
    pub fn compute(fiber: &FiberSpec, guided: &GuidedSet, r: f64) -> Result<Self> {
        if !(r > fiber.radius) {
            return Err(Error::InsideFiber { r, a: fiber.radius });
        }
        let omega = guided.omega;
        let mut channels = Vec::new();
        for mode in &guided.modes {
            for f in [1i8, -1] {
                let mut m = zero_mat();
                let mut q = zero_mat();
                for &p in mode.order.polarizations() {
                    let e = mode.profile(f, p, r)?;
                    let et = with_rotation(&e, p as f64 * mode.order.l as f64);
                    mat_add_assign(&mut m, &outer(&e, &conj(&e)), C64::new(1.0, 0.0));
                    mat_add_assign(&mut q, &outer(&conj(&e), &et), C64::new(1.0, 0.0));
                }
                channels.push(GuidedChannel {
                    order: mode.order,
                    f,
                    beta: mode.beta,
                    beta_prime: mode.beta_prime,
                    m,
                    q,
                });
            }
        }
        let mut n = 200;
        let mut prev = radiation_rule(fiber, omega, r, n)?;
        loop {
            n *= 2;
            let next = radiation_rule(fiber, omega, r, n)?;
            let (a, b) = (integrated(&prev), integrated(&next));
            let scale = mat_max_abs(&b[0]);
            let diff = (0..3).fold(0.0f64, |acc, i| {
                let mut d = b[i];
                mat_add_assign(&mut d, &a[i], C64::new(-1.0, 0.0));
                acc.max(mat_max_abs(&d))
            });
            prev = next;
            if diff <= BETA_RULE_TOL * scale {
                break;
            }
            if n > 6400 {
                return Err(Error::NoConvergence(format!("beta quadrature at r = {r:e}")));
            }
        }
        Ok(Self {
            omega,
            r,
            guided: channels,
            radiation: prev,
        })
    }

    /// `(∫M dβ, ∫β M dβ, ∫Q dβ)` over the radiation band.
    pub fn radiation_integrals(&self) -> [Mat3; 3] {
        integrated(&self.radiation)
    }

    /// Rates for dipole `d` given in local cylindrical components (C m).
    pub fn rates(&self, d: &Vec3) -> RateBreakdown {
        let dc = conj(d);
        let mut per_channel = Vec::new();
        let mut gamma_g = 0.0;
        for ch in &self.guided {
            let g = self.omega * ch.beta_prime / (2.0 * EPS0 * HBAR) * bilinear(d, &ch.m, &dc).re;
            gamma_g += g;
            per_channel.push(DirectionalRate {
                order: ch.order,
                f: ch.f,
                beta: ch.beta,
                rate: g,
            });
        }
        let pref = self.omega / (2.0 * EPS0 * HBAR);
        let beta_resolved: Vec<(f64, f64, f64)> = self
            .radiation
            .iter()
            .map(|s| (s.beta, s.weight, pref * bilinear(d, &s.m, &dc).re))
            .collect();
        let gamma_r = beta_resolved.iter().map(|(_, w, g)| w * g).sum();
        RateBreakdown {
            gamma_g,
            gamma_r,
            gamma_total: gamma_g + gamma_r,
            per_family_directional: per_channel,
            beta_resolved,
        }
    }

    /// Spontaneous-emission recoil force `(F_r, F_φ, F_z)` (N) from the mode
    /// sums; `F_r` vanishes identically in this representation.
    pub fn recoil_force(&self, d: &Vec3) -> [f64; 3] {
        let rates = self.rates(d);
        let mut fz = 0.0;
        for ch in &rates.per_family_directional {
            fz -= HBAR * ch.beta * ch.f as f64 * ch.rate;
        }
        for (beta, w, g) in &rates.beta_resolved {
            fz -= HBAR * beta * w * g;
        }
        let dc = conj(d);
        let mut im = 0.0;
        for ch in &self.guided {
            im += self.omega * ch.beta_prime / (4.0 * PI * EPS0 * HBAR) * bilinear(&dc, &ch.q, d).im;
        }
        for s in &self.radiation {
            im += self.omega / (4.0 * PI * EPS0 * HBAR) * s.weight * bilinear(&dc, &s.q, d).im;
        }
        let fphi = -2.0 * PI * HBAR / self.r * im;
        [0.0, fphi, fz]
    }
}

/// Emission rate into one guided family and direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionalRate {
    pub order: ModeOrder,
    pub f: i8,
    pub beta: f64,
    pub rate: f64,
}

/// Decomposition of the spontaneous-emission rate (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct RateBreakdown {
    pub gamma_g: f64,
    pub gamma_r: f64,
    pub gamma_total: f64,
    /// `γ_gN^(f)` for every guided family `N` and direction `f`.
    pub per_family_directional: Vec<DirectionalRate>,
    /// `(β, quadrature weight, γ_r^(β))` on the β rule.
    pub beta_resolved: Vec<(f64, f64, f64)>,
}

impl RateBreakdown {
    pub fn directional(&self, order: ModeOrder, f: i8) -> f64 {
        self.per_family_directional
            .iter()
            .filter(|c| c.order == order && c.f == f)
            .map(|c| c.rate)
            .sum()
    }
}

/// Decay rates of `atom` next to `fiber` at the bare transition frequency.
pub fn decay_rates(fiber: &FiberSpec, atom: &AtomSpec) -> Result<RateBreakdown> {
    atom.validate(fiber)?;
    let guided = GuidedSet::solve(fiber, atom.omega0)?;
    let t = RateTensors::compute(fiber, &guided, atom.r)?;
    Ok(t.rates(&atom.d_local()))
}

/// Free-space decay rate `d²ω³/(3πε₀ħc³)` of a dipole `d` (C m).
pub fn free_space_rate(omega0: f64, d: f64) -> f64 {
    d * d * omega0.powi(3) / (3.0 * PI * EPS0 * HBAR * C.powi(3))
}
