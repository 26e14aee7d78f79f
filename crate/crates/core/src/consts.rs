//! CODATA physical constants (SI).

/// Speed of light in vacuum (m/s).
pub const C: f64 = 299_792_458.0;
/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 8.854_187_812_8e-12;
/// Vacuum permeability (H/m), consistent with `1/(EPS0 C^2)`.
pub const MU0: f64 = 1.0 / (EPS0 * C * C);
/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant (J/K).
pub const KB: f64 = 1.380_649e-23;
/// Vacuum impedance (Ω).
pub const Z0: f64 = MU0 * C;

/// Squared dipole matrix element `d²` (C² m²) of a two-level transition
/// with natural linewidth `gamma0` (rad/s) at angular frequency `omega0`.
pub fn dipole_squared(omega0: f64, gamma0: f64) -> f64 {
    3.0 * std::f64::consts::PI * EPS0 * HBAR * C.powi(3) * gamma0 / omega0.powi(3)
}
