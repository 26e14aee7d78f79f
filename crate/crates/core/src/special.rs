//! Cylinder functions of integer order.
//!
//! Single values of J, Y, I, K and H⁽¹⁾ come from the Amos-algorithm port in
//! `complex_bessel`. For the long harmonic sums of the scattered Green tensor
//! the functions themselves overflow or underflow long before the sums
//! converge, so this module also provides *normalized* sequences: ratios
//! `H_l(x)/H_{l-1}(x)` by forward recurrence, logarithmic derivatives of J by
//! a continued fraction plus backward recurrence, and the product
//! `J_l(x) H_l(x)` from the Wronskian. All of these stay O(1) for any order.

use complex_bessel as cb;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

fn wrap<T: Real>(r: std::result::Result<Complex<T>, cb::Error>, what: &str) -> Result<Complex<T>> {
    r.map_err(|e| Error::Special(format!("{what}: {e}")))
}

fn order<T: Real>(n: i32) -> T {
    T::from_i32(n).unwrap()
}

/// J_n(z).
pub fn bessel_j<T: Real>(n: i32, z: Complex<T>) -> Result<Complex<T>> {
    wrap(cb::besselj(order(n), z), "J")
}

/// Y_n(z).
pub fn bessel_y<T: Real>(n: i32, z: Complex<T>) -> Result<Complex<T>> {
    wrap(cb::bessely(order(n), z), "Y")
}

/// I_n(z).
pub fn bessel_i<T: Real>(n: i32, z: Complex<T>) -> Result<Complex<T>> {
    wrap(cb::besseli(order(n), z), "I")
}

/// K_n(z).
pub fn bessel_k<T: Real>(n: i32, z: Complex<T>) -> Result<Complex<T>> {
    wrap(cb::besselk(order(n), z), "K")
}

/// H⁽¹⁾_n(z).
pub fn hankel1<T: Real>(n: i32, z: Complex<T>) -> Result<Complex<T>> {
    wrap(cb::hankel1(order(n), z), "H1")
}

/// e^{-iz} H⁽¹⁾_n(z).
pub fn hankel1_scaled<T: Real>(n: i32, z: Complex<T>) -> Result<Complex<T>> {
    wrap(cb::hankel1_scaled(order(n), z), "H1 scaled")
}

/// Real-argument value, first and second derivative of J_l, Y_l, K_l or I_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    J,
    Y,
    K,
    I,
}

/// `(Z_l(x), Z_l'(x), Z_l''(x))` for a real argument `x > 0`.
pub fn real_with_derivatives(kind: Kind, l: i32, x: f64) -> Result<(f64, f64, f64)> {
    let z = Complex::new(x, 0.0);
    let (v, vm) = match kind {
        Kind::J => (bessel_j(l, z)?, bessel_j(l - 1, z)?),
        Kind::Y => (bessel_y(l, z)?, bessel_y(l - 1, z)?),
        Kind::K => (bessel_k(l, z)?, bessel_k(l - 1, z)?),
        Kind::I => (bessel_i(l, z)?, bessel_i(l - 1, z)?),
    };
    let (v, vm) = (v.re, vm.re);
    let lf = l as f64;
    let (d, dd) = match kind {
        // Z' = Z_{l-1} - (l/x) Z ; Z'' = -Z'/x - (1 - l²/x²) Z
        Kind::J | Kind::Y => {
            let d = vm - lf / x * v;
            (d, -d / x - (1.0 - lf * lf / (x * x)) * v)
        }
        // K' = -K_{l-1} - (l/x) K ; K'' = -K'/x + (1 + l²/x²) K
        Kind::K => {
            let d = -vm - lf / x * v;
            (d, -d / x + (1.0 + lf * lf / (x * x)) * v)
        }
        Kind::I => {
            let d = vm - lf / x * v;
            (d, -d / x + (1.0 + lf * lf / (x * x)) * v)
        }
    };
    Ok((v, d, dd))
}

/// Ratios `J_{n+1}(x)/J_n(x)` by the modified Lentz continued fraction.
fn j_ratio_cf<T: Real>(n: usize, x: Complex<T>) -> Result<Complex<T>> {
    let tiny = T::lit(1e-300).max(T::min_positive_value());
    let two = T::lit(2.0);
    let b = |k: usize| Complex::new(two * T::from_usize(n + k).unwrap(), T::zero()) / x;
    let mut f = b(1);
    if f.norm() == T::zero() {
        f = Complex::new(tiny, T::zero());
    }
    let mut c = f;
    let mut d = Complex::new(T::zero(), T::zero());
    let eps = T::epsilon();
    let cap = 200_000usize;
    for k in 2..cap {
        let bk = b(k);
        d = bk - d;
        if d.norm() == T::zero() {
            d = Complex::new(tiny, T::zero());
        }
        c = bk - Complex::new(T::one(), T::zero()) / c;
        if c.norm() == T::zero() {
            c = Complex::new(tiny, T::zero());
        }
        d = Complex::new(T::one(), T::zero()) / d;
        let delta = c * d;
        f = f * delta;
        if (delta - Complex::new(T::one(), T::zero())).norm() < eps {
            return Ok(Complex::new(T::one(), T::zero()) / f);
        }
    }
    Err(Error::NoConvergence(format!(
        "J ratio continued fraction at order {n}, |x| = {:?}",
        x.norm()
    )))
}

/// Logarithmic derivatives `J_l'(x)/J_l(x)` for `l = 0..=lmax`.
pub fn j_log_derivatives<T: Real>(x: Complex<T>, lmax: usize) -> Result<Vec<Complex<T>>> {
    if x.norm() == T::zero() {
        return Err(Error::Special("J log-derivative at x = 0".into()));
    }
    let two = T::lit(2.0);
    // ratios[l] = J_l / J_{l-1}, l = 1..=lmax+1
    let mut ratios = vec![Complex::new(T::zero(), T::zero()); lmax + 2];
    ratios[lmax + 1] = j_ratio_cf(lmax, x)?;
    for l in (1..=lmax).rev() {
        let lf = T::from_usize(l).unwrap();
        let denom = Complex::new(two * lf, T::zero()) / x - ratios[l + 1];
        ratios[l] = Complex::new(T::one(), T::zero()) / denom;
    }
    Ok((0..=lmax)
        .map(|l| Complex::new(T::from_usize(l).unwrap(), T::zero()) / x - ratios[l + 1])
        .collect())
}

/// Normalized outgoing-wave data at one argument `x` (upper half plane).
#[derive(Debug, Clone)]
pub struct HankelSeq<T> {
    pub x: Complex<T>,
    /// `ratio[l] = H_l(x)/H_{l-1}(x)` for `l = 1..=lmax+1`; `ratio[0]` unused.
    pub ratio: Vec<Complex<T>>,
    /// `e^{-ix} H_0(x)`.
    pub h0_scaled: Complex<T>,
}

impl<T: Real> HankelSeq<T> {
    pub fn new(x: Complex<T>, lmax: usize) -> Result<Self> {
        if x.norm() == T::zero() {
            return Err(Error::Special("Hankel sequence at x = 0".into()));
        }
        let h0 = hankel1_scaled(0, x)?;
        let h1 = hankel1_scaled(1, x)?;
        let two = T::lit(2.0);
        let mut ratio = vec![Complex::new(T::zero(), T::zero()); lmax + 2];
        ratio[1] = h1 / h0;
        for l in 1..=lmax {
            let lf = T::from_usize(l).unwrap();
            ratio[l + 1] =
                Complex::new(two * lf, T::zero()) / x - Complex::new(T::one(), T::zero()) / ratio[l];
        }
        Ok(Self {
            x,
            ratio,
            h0_scaled: h0,
        })
    }

    pub fn lmax(&self) -> usize {
        self.ratio.len() - 2
    }

    /// `H_l'(x)/H_l(x)`.
    pub fn log_derivative(&self, l: usize) -> Complex<T> {
        Complex::new(T::from_usize(l).unwrap(), T::zero()) / self.x - self.ratio[l + 1]
    }

    /// `H_l''(x)/H_l(x)`.
    pub fn second_log_derivative(&self, l: usize) -> Complex<T> {
        let d = self.log_derivative(l);
        let lf = T::from_usize(l).unwrap();
        let one = Complex::new(T::one(), T::zero());
        -d / self.x - (one - Complex::new(lf * lf, T::zero()) / (self.x * self.x))
    }

    /// `H_l(self.x) / H_l(base.x)` for `l = 0..=lmax`.
    pub fn ratio_to(&self, base: &HankelSeq<T>) -> Vec<Complex<T>> {
        let n = self.lmax().min(base.lmax());
        let i = Complex::new(T::zero(), T::one());
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = (i * (self.x - base.x)).exp() * self.h0_scaled / base.h0_scaled;
        out.push(cur);
        for l in 1..=n {
            cur = cur * self.ratio[l] / base.ratio[l];
            out.push(cur);
        }
        out
    }
}

/// `J_l(x) H_l(x)` from the Wronskian `J H' - J' H = 2i/(πx)`.
pub fn jh_product<T: Real>(x: Complex<T>, dj: Complex<T>, dh: Complex<T>) -> Complex<T> {
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    two_i / (x * T::PI() * (dh - dj))
}
