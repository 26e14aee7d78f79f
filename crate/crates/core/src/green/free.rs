//! Imaginary part of the free-space Green tensor in a homogeneous medium.

use std::f64::consts::PI;

use super::CylPoint;
use crate::consts::C;
use crate::cvec::{Mat3, ZERO};
use crate::C64;

/// Spherical Bessel functions `(j₀, j₂)`; power series below `x = 2`.
fn j0_j2(x: f64) -> (f64, f64) {
    if x >= 2.0 {
        let (s, c) = x.sin_cos();
        let j0 = s / x;
        return (j0, (3.0 / (x * x) - 1.0) * j0 - 3.0 * c / (x * x));
    }
    let series = |n: i32| {
        // x^n Σ_k (−x²/2)^k / (k! (2n + 2k + 1)!!)
        let mut dfact = 1.0;
        for i in (1..=2 * n + 1).step_by(2) {
            dfact *= i as f64;
        }
        let mut term = x.powi(n) / dfact;
        let mut sum = term;
        for k in 1..40 {
            term *= -x * x / 2.0 / (k as f64 * (2 * n + 2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    };
    (series(0), series(2))
}

/// `Im G⁽⁰⁾(R, R′; ω)` in the cladding of index `n2`, in the mixed local
/// bases at `R` (rows) and `R′` (columns):
/// `(k₂/4π)[(2j₀ − j₂)/3 I + j₂ ρ̂ρ̂]` with `ρ = R − R′`.
pub fn im_free_space(n2: f64, omega: f64, at: &CylPoint, from: &CylPoint) -> Mat3 {
    let k2 = n2 * omega / C;
    let (a, b) = (at.cartesian(), from.cartesian());
    let rho = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dist = (rho[0] * rho[0] + rho[1] * rho[1] + rho[2] * rho[2]).sqrt();
    let (j0, j2) = j0_j2(k2 * dist);
    let mut cart = [[0.0; 3]; 3];
    for i in 0..3 {
        cart[i][i] += (2.0 * j0 - j2) / 3.0;
        if dist > 0.0 {
            for j in 0..3 {
                cart[i][j] += j2 * rho[i] * rho[j] / (dist * dist);
            }
        }
    }
    let rot = |phi: f64| {
        let (s, c) = phi.sin_cos();
        [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]]
    };
    let (ra, rb) = (rot(at.phi), rot(from.phi));
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut v = 0.0;
            for p in 0..3 {
                for q in 0..3 {
                    v += ra[i][p] * cart[p][q] * rb[j][q];
                }
            }
            out[i][j] = C64::new(k2 / (4.0 * PI) * v, 0.0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_matches_closed_form_at_crossover() {
        let x = 2.0f64;
        let (s, c) = x.sin_cos();
        let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
        let (a, b) = j0_j2(x * (1.0 - 1e-15));
        assert!((a - s / x).abs() < 1e-14);
        assert!((b - j2).abs() < 1e-14);
    }

    #[test]
    fn coincidence_limit() {
        let omega = 2.0 * PI * C / 780e-9;
        let p = CylPoint::new(1e-6, 0.4, 0.0);
        let g = im_free_space(1.0, omega, &p, &p);
        let k = omega / C;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { k / (6.0 * PI) } else { 0.0 };
                assert!((g[i][j].re - want).abs() < 1e-15 * k);
            }
        }
    }
}
