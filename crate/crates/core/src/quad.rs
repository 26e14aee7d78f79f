//! Quadrature rules: fixed Gauss–Legendre and adaptive Gauss–Kronrod (7/15)
//! for vector-valued complex integrands.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::Real;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds an `n`-point rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let one = T::one();
        let two = T::lit(2.0);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::from_usize(n).unwrap();
        let m = n.div_ceil(2);
        for i in 0..m {
            let fi = T::from_usize(i).unwrap();
            // Tricomi initial guess
            let mut x = (T::PI() * (fi + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = two / ((one - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`, in ascending node order.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    /// Integrates a real scalar function over `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        self.mapped(a, b).fold(T::zero(), |acc, (x, w)| acc + w * f(x))
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_usize(n).unwrap();
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for [`adaptive_gk`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for AdaptiveOptions<T> {
    fn default() -> Self {
        Self {
            abs_tol: T::zero(),
            rel_tol: T::lit(1e-10),
            max_intervals: 2000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone)]
pub struct QuadResult<T> {
    pub value: Vec<Complex<T>>,
    pub error: T,
    pub evaluations: usize,
}

struct Segment<T> {
    a: T,
    b: T,
    value: Vec<Complex<T>>,
    error: T,
}

fn max_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

fn gk15<T: Real, F>(f: &mut F, a: T, b: T, dim: usize, buf: &mut [Complex<T>]) -> Segment<T>
where
    F: FnMut(T, &mut [Complex<T>]),
{
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let mut kron = vec![Complex::new(T::zero(), T::zero()); dim];
    let mut gauss = vec![Complex::new(T::zero(), T::zero()); dim];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let xs: &[T] = if j == 7 {
            &[T::zero()][..]
        } else {
            &[T::lit(-x), T::lit(x)][..]
        };
        for &s in xs {
            let t = mid + half * s;
            buf.iter_mut()
                .for_each(|z| *z = Complex::new(T::zero(), T::zero()));
            f(t, buf);
            let wk = T::lit(wk);
            for (k, v) in buf.iter().enumerate() {
                kron[k] = kron[k] + *v * wk;
            }
            if j % 2 == 1 {
                let wg = T::lit(WG[j / 2]);
                for (k, v) in buf.iter().enumerate() {
                    gauss[k] = gauss[k] + *v * wg;
                }
            }
        }
    }
    let value: Vec<_> = kron.iter().map(|z| *z * half).collect();
    let diff: Vec<_> = kron
        .iter()
        .zip(&gauss)
        .map(|(k, g)| (*k - *g) * half)
        .collect();
    Segment {
        a,
        b,
        value,
        error: max_norm(&diff),
    }
}

/// Adaptive Gauss–Kronrod integration of a `dim`-component complex
/// integrand over `[a, b]`. The integrand writes its value into the output
/// slice (pre-zeroed). Subdivision is deterministic: the segment with the
/// largest error estimate is bisected first.
pub fn adaptive_gk<T: Real, F>(
    dim: usize,
    a: T,
    b: T,
    opts: AdaptiveOptions<T>,
    mut f: F,
) -> Result<QuadResult<T>>
where
    F: FnMut(T, &mut [Complex<T>]),
{
    let mut buf = vec![Complex::new(T::zero(), T::zero()); dim];
    let mut segs = vec![gk15(&mut f, a, b, dim, &mut buf)];
    let mut evaluations = 15;
    loop {
        let mut total = vec![Complex::new(T::zero(), T::zero()); dim];
        let mut err = T::zero();
        for s in &segs {
            for (t, v) in total.iter_mut().zip(&s.value) {
                *t = *t + *v;
            }
            err = err + s.error;
        }
        let target = opts.abs_tol.max(opts.rel_tol * max_norm(&total));
        if err <= target {
            return Ok(QuadResult {
                value: total,
                error: err,
                evaluations,
            });
        }
        if segs.len() >= opts.max_intervals {
            return Err(Error::NoConvergence(format!(
                "adaptive quadrature on [{:?}, {:?}] stalled at error {:?} (target {:?})",
                a, b, err, target
            )));
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, s)| {
                if s.error > be {
                    (i, s.error)
                } else {
                    (bi, be)
                }
            });
        let s = segs.swap_remove(worst);
        let m = (s.a + s.b) / T::lit(2.0);
        segs.push(gk15(&mut f, s.a, m, dim, &mut buf));
        segs.push(gk15(&mut f, m, s.b, dim, &mut buf));
        evaluations += 30;
    }
}

/// Scalar convenience wrapper around [`adaptive_gk`].
pub fn adaptive_real<T: Real, F: FnMut(T) -> T>(
    a: T,
    b: T,
    opts: AdaptiveOptions<T>,
    mut f: F,
) -> Result<T> {
    let r = adaptive_gk(1, a, b, opts, |x, out| {
        out[0] = Complex::new(f(x), T::zero());
    })?;
    Ok(r.value[0].re)
}
