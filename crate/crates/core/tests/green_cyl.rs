use std::f64::consts::PI;

use fiberforce::consts::C;
use fiberforce::cvec::{cart_to_cyl, cyl_to_cart, mat_max_abs, Mat3};
use fiberforce::fiber::FiberSpec;
use fiberforce::green::{
    green_gradient, im_free_space, im_green_modesum, im_green_modesum_parts, scattered_green,
    scattered_green_with_gradient, ContourOptions, CylPoint,
};
use fiberforce::{Error, C64};
use proptest::prelude::*;

const A: f64 = 350e-9;
const LAMBDA: f64 = 780e-9;

fn fiber() -> FiberSpec {
    FiberSpec::new(A, 1.4537, 1.0).unwrap()
}

fn omega0() -> f64 {
    2.0 * PI * C / LAMBDA
}

fn w() -> C64 {
    C64::new(omega0(), 0.0)
}

fn max_diff(a: &Mat3, b: &Mat3) -> f64 {
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

#[test]
fn modesum_matches_scattered_imaginary_part() {
    let f = fiber();
    for (n, x) in [1.07, 1.3, 1.7, 2.3, 2.9].into_iter().enumerate() {
        let p = CylPoint::new(x * A, 0.2 * n as f64, 0.0);
        let g = scattered_green(&f, w(), p, p).unwrap();
        let m = im_green_modesum(&f, omega0(), p, p).unwrap();
        let free = im_free_space(f.n2, omega0(), &p, &p);
        let mut im_r = [[C64::new(0.0, 0.0); 3]; 3];
        let mut via_modes = im_r;
        for i in 0..3 {
            for j in 0..3 {
                im_r[i][j] = C64::new(g.tensor[i][j].im, 0.0);
                via_modes[i][j] = C64::new(m.tensor[i][j].re - free[i][j].re, 0.0);
            }
        }
        let scale = mat_max_abs(&im_r);
        assert!(max_diff(&im_r, &via_modes) < 1e-6 * scale, "r/a = {x}");
    }
}

#[test]
fn modesum_matches_at_separated_points() {
    let f = fiber();
    let p = CylPoint::new(1.4 * A, 0.1, 0.0);
    let q = CylPoint::new(1.9 * A, -0.5, 120e-9);
    let g = scattered_green(&f, w(), p, q).unwrap();
    let gm = scattered_green(&f, C64::new(-omega0(), 0.0), p, q).unwrap();
    let m = im_green_modesum(&f, omega0(), p, q).unwrap();
    let free = im_free_space(f.n2, omega0(), &p, &q);
    // elementwise Im G⁽ᴿ⁾ = (G(ω) − G(ω)*)/2i, with G(ω)* = G(−ω)
    let mut diff = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let im = (g.tensor[i][j] - gm.tensor[i][j]) / C64::new(0.0, 2.0);
            diff = diff.max((im - (m.tensor[i][j] - free[i][j])).norm());
            scale = scale.max(im.norm());
        }
    }
    assert!(diff < 1e-6 * scale, "{diff:e} vs {scale:e}");
}

#[test]
fn guided_contribution_is_positive_on_diagonal() {
    let p = CylPoint::new(1.2 * A, 0.0, 0.0);
    let (guided, _) = im_green_modesum_parts(&fiber(), omega0(), p, p).unwrap();
    for i in 0..3 {
        assert!(guided[i][i].re > 0.0);
    }
}

#[test]
fn axial_reversal_transposes_modesum() {
    let f = fiber();
    let p = CylPoint::new(1.5 * A, 0.0, 90e-9);
    let q = CylPoint::new(1.5 * A, 0.0, 0.0);
    let fwd = im_green_modesum(&f, omega0(), p, q).unwrap().tensor;
    let back = im_green_modesum(&f, omega0(), q, p).unwrap().tensor;
    let scale = mat_max_abs(&fwd);
    for i in 0..3 {
        for j in 0..3 {
            assert!((fwd[i][j] - back[j][i]).norm() < 1e-9 * scale);
        }
    }
}

#[test]
fn coincidence_off_diagonals_vanish() {
    let f = fiber();
    for x in [1.1, 2.0] {
        let p = CylPoint::new(x * A, 0.7, -40e-9);
        let g = scattered_green(&f, w(), p, p).unwrap().tensor;
        let scale = (0..3).fold(0.0f64, |m, i| m.max(g[i][i].norm()));
        for (i, j) in [(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)] {
            assert!(g[i][j].norm() <= 1e-10 * scale);
        }
    }
}

#[test]
fn imaginary_axis_coincidence_is_real() {
    let f = fiber();
    for u in [0.3, 1.0, 5.0] {
        let p = CylPoint::new(1.3 * A, 0.0, 0.0);
        let g = scattered_green(&f, C64::new(0.0, u * omega0()), p, p).unwrap().tensor;
        let scale = mat_max_abs(&g);
        for row in &g {
            for z in row {
                assert!(z.im.abs() <= 1e-10 * scale);
            }
        }
        // the scattered field of an image-like response is attractive
        for i in 0..3 {
            assert!(g[i][i].re < 0.0);
        }
    }
}

#[test]
fn schwarz_reflection() {
    let f = fiber();
    let p = CylPoint::new(1.25 * A, 0.3, 0.0);
    let q = CylPoint::new(1.6 * A, 1.1, 50e-9);
    let eps = 0.05 * omega0();
    let g1 = scattered_green(&f, C64::new(omega0(), eps), p, q).unwrap().tensor;
    let g2 = scattered_green(&f, C64::new(-omega0(), eps), p, q).unwrap().tensor;
    let scale = mat_max_abs(&g1);
    for i in 0..3 {
        for j in 0..3 {
            assert!((g1[i][j].conj() - g2[i][j]).norm() < 1e-8 * scale);
        }
    }
}

#[test]
fn far_from_fiber_scattering_fades() {
    let f = fiber();
    let near = scattered_green(&f, w(), CylPoint::new(1.1 * A, 0.0, 0.0), CylPoint::new(1.1 * A, 0.0, 0.0))
        .unwrap()
        .tensor;
    let far = scattered_green(&f, w(), CylPoint::new(10.0 * A, 0.0, 0.0), CylPoint::new(10.0 * A, 0.0, 0.0))
        .unwrap()
        .tensor;
    assert!(mat_max_abs(&far) < 0.05 * mat_max_abs(&near));
    let free = im_free_space(1.0, omega0(), &CylPoint::new(0.0, 0.0, 0.0), &CylPoint::new(0.0, 0.0, 0.0));
    for i in 0..3 {
        assert!(far[i][i].im.abs() < 0.02 * free[i][i].re);
    }
}

#[test]
fn rejects_points_inside_the_fiber() {
    let p = CylPoint::new(0.9 * A, 0.0, 0.0);
    let q = CylPoint::new(1.5 * A, 0.0, 0.0);
    assert!(matches!(scattered_green(&fiber(), w(), p, q), Err(Error::InsideFiber { .. })));
    assert!(matches!(scattered_green(&fiber(), w(), q, p), Err(Error::InsideFiber { .. })));
}

/// `G(at, from)` with rows re-expressed in the local basis at `phi_ref`.
fn rows_in_basis(f: &FiberSpec, at: CylPoint, from: CylPoint, phi_ref: f64) -> Mat3 {
    let opts = ContourOptions {
        rel_tol: 1e-13,
        ..Default::default()
    };
    let g = scattered_green_with_gradient(f, w(), at, from, opts).unwrap().tensor;
    let mut out = g;
    for j in 0..3 {
        let col = [g[0][j], g[1][j], g[2][j]];
        let v = cart_to_cyl(&cyl_to_cart(&col, at.phi), phi_ref);
        for i in 0..3 {
            out[i][j] = v[i];
        }
    }
    out
}

fn richardson(f: &dyn Fn(f64) -> Mat3, step: f64) -> Mat3 {
    let central = |s: f64| {
        let (p, m) = (f(s), f(-s));
        let mut d = p;
        for i in 0..3 {
            for j in 0..3 {
                d[i][j] = (p[i][j] - m[i][j]) / (2.0 * s);
            }
        }
        d
    };
    let (d1, d2) = (central(step), central(step / 2.0));
    let mut out = d1;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (4.0 * d2[i][j] - d1[i][j]) / 3.0;
        }
    }
    out
}

#[test]
fn gradient_matches_finite_differences() {
    let f = fiber();
    let p = CylPoint::new(1.3 * A, 0.4, 0.0);
    let grad = green_gradient(&f, w(), p).unwrap();
    let step = 1e-5 * LAMBDA;
    let fd_r = richardson(&|s| rows_in_basis(&f, CylPoint { r: p.r + s, ..p }, p, p.phi), step);
    let fd_phi = richardson(
        &|s| rows_in_basis(&f, CylPoint { phi: p.phi + s / p.r, ..p }, p, p.phi),
        step,
    );
    let fd_z = richardson(&|s| rows_in_basis(&f, CylPoint { z: p.z + s, ..p }, p, p.phi), step);
    let scale = grad.iter().fold(0.0f64, |m, t| m.max(mat_max_abs(t)));
    for (k, fd) in [fd_r, fd_phi, fd_z].iter().enumerate() {
        let d = max_diff(&grad[k], fd);
        assert!(d < 1e-5 * scale, "component {k}: {d:e} vs {scale:e}");
    }
}

#[test]
fn one_argument_z_derivative_differs_from_translation() {
    let f = fiber();
    let p = CylPoint::new(1.3 * A, 0.0, 0.0);
    let grad = green_gradient(&f, w(), p).unwrap();
    // moving both points together leaves the tensor unchanged
    let shifted = CylPoint { z: 1e-7, ..p };
    let g0 = scattered_green(&f, w(), p, p).unwrap().tensor;
    let g1 = scattered_green(&f, w(), shifted, shifted).unwrap().tensor;
    assert!(max_diff(&g0, &g1) <= 1e-12 * mat_max_abs(&g0));
    // the derivative in the first argument alone is not zero
    assert!(mat_max_abs(&grad[2]) > 1e-3 * mat_max_abs(&grad[0]));
    // and it cannot push a real dipole: d·Im ∂_z G·d vanishes
    for d in [[1.0, 0.0, 0.0], [0.6, 0.0, 0.8], [0.3, -0.5, 0.81]] {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += d[i] * grad[2][i][j].im * d[j];
            }
        }
        assert!(s.abs() <= 1e-10 * mat_max_abs(&grad[2]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn reciprocity(
        r1 in 1.05f64..3.0, r2 in 1.05f64..3.0,
        p1 in -PI..PI, p2 in -PI..PI,
        z in -300e-9f64..300e-9,
        imaginary in any::<bool>(),
    ) {
        let f = fiber();
        let omega = if imaginary { C64::new(0.0, omega0()) } else { w() };
        let a = CylPoint::new(r1 * A, p1, z);
        let b = CylPoint::new(r2 * A, p2, 0.0);
        let gab = scattered_green(&f, omega, a, b).unwrap().tensor;
        let gba = scattered_green(&f, omega, b, a).unwrap().tensor;
        let scale = mat_max_abs(&gab).max(mat_max_abs(&gba));
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((gab[i][j] - gba[j][i]).norm() < 1e-8 * scale);
            }
        }
    }
}
