//! Internal state of the driven two-level atom: Rabi frequency of the
//! guided drive, shifted detuning and the steady state of the Bloch
//! equations.

use num_complex::Complex;

use crate::consts::HBAR;
use crate::cvec::{dot, Vec3};
use crate::real::Real;
use crate::C64;

/// `Ω = d·𝓔/ħ` for a dipole and field amplitude in the same local basis.
pub fn rabi_frequency(d: &Vec3, field: &Vec3) -> C64 {
    dot(d, field) / HBAR
}

/// `∇Ω` as `(∂_r, (1/r)∂_φ, ∂_z)` for a dipole held fixed in space.
///
/// `d` and `field` are local cylindrical components at the atom and
/// `dfield` holds the partial derivatives of the field components with the
/// basis vectors frozen; the azimuthal term picks up the rotation of
/// `r̂, φ̂` with `φ`.
pub fn rabi_gradient(d: &Vec3, field: &Vec3, dfield: &[Vec3; 3], r: f64) -> [C64; 3] {
    let [dr, dphi, dz] = dfield;
    let rotated = [dphi[0] - field[1], dphi[1] + field[0], dphi[2]];
    [
        dot(d, dr) / HBAR,
        dot(d, &rotated) / (HBAR * r),
        dot(d, dz) / HBAR,
    ]
}

/// Detuning from the shifted transition, `Δ = Δ₀ − (U_e − U_g)/ħ`.
pub fn effective_detuning(detuning0: f64, u_e: f64, u_g: f64) -> f64 {
    detuning0 - (u_e - u_g) / HBAR
}

/// Steady state of the two-level Bloch equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSteadyState<T> {
    pub rho_ee: T,
    pub rho_gg: T,
    pub rho_eg: Complex<T>,
    /// `s = (|Ω|²/2)/(Δ² + Γ²/4)`.
    pub saturation: T,
    pub rabi: Complex<T>,
    pub detuning: T,
    pub gamma: T,
}

impl<T: Real> BlochSteadyState<T> {
    /// Fixed point for Rabi frequency `rabi`, detuning `Δ = ω_L − ω̃₀` and
    /// total decay rate `gamma`.
    pub fn new(rabi: Complex<T>, detuning: T, gamma: T) -> Self {
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let w2 = rabi.norm_sqr();
        let base = detuning * detuning + gamma * gamma / four;
        let den = base + w2 / two;
        let rho_ee = w2 / four / den;
        let i = Complex::new(T::zero(), T::one());
        let rho_eg = i * rabi * Complex::new(gamma, two * detuning) / (four * den);
        Self {
            rho_ee,
            rho_gg: T::one() - rho_ee,
            rho_eg,
            saturation: w2 / two / base,
            rabi,
            detuning,
            gamma,
        }
    }

    pub fn rho_ge(&self) -> Complex<T> {
        self.rho_eg.conj()
    }

    /// Time derivatives `(ρ̇_ee, ρ̇_gg, ρ̇_ge)` of the Bloch equations at
    /// this state; they vanish at the fixed point.
    pub fn residual(&self) -> (T, T, Complex<T>) {
        bloch_derivatives(self.rho_ee, self.rho_gg, self.rho_ge(), self.rabi, self.detuning, self.gamma)
    }
}

/// Right-hand side of the Bloch equations in the rotating frame.
pub fn bloch_derivatives<T: Real>(
    rho_ee: T,
    rho_gg: T,
    rho_ge: Complex<T>,
    rabi: Complex<T>,
    detuning: T,
    gamma: T,
) -> (T, T, Complex<T>) {
    let two = T::lit(2.0);
    let i = Complex::new(T::zero(), T::one());
    let half_i = i / two;
    let rho_eg = rho_ge.conj();
    let pump = half_i * (rabi * rho_ge - rabi.conj() * rho_eg);
    let dee = pump.re - gamma * rho_ee;
    let dgg = -pump.re + gamma * rho_ee;
    let dge = half_i * rabi.conj() * (rho_ee - rho_gg) - Complex::new(gamma / two, detuning) * rho_ge;
    (dee, dgg, dge)
}
