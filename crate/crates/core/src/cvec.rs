//! Complex 3-vectors, 3×3 tensors and 3×3×3 gradient tensors in the local
//! cylindrical basis.

use crate::C64;

pub type Vec3 = [C64; 3];
pub type Mat3 = [[C64; 3]; 3];
/// `t[k][i][j] = ∂_k M_ij`, with `k` running over `(r, φ, z)`.
pub type Tensor3 = [Mat3; 3];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn zero3() -> Vec3 {
    [ZERO; 3]
}

pub fn zero_mat() -> Mat3 {
    [[ZERO; 3]; 3]
}

pub fn zero_tensor() -> Tensor3 {
    [zero_mat(); 3]
}

/// Plain bilinear product `a·b` (no conjugation).
pub fn dot(a: &Vec3, b: &Vec3) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm_sqr(a: &Vec3) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

pub fn scale(a: &Vec3, s: C64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn conj(a: &Vec3) -> Vec3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

/// `a ⊗ b`.
pub fn outer(a: &Vec3, b: &Vec3) -> Mat3 {
    let mut m = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[i] * b[j];
        }
    }
    m
}

pub fn mat_add_assign(m: &mut Mat3, other: &Mat3, s: C64) {
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] += other[i][j] * s;
        }
    }
}

pub fn mat_scale(m: &Mat3, s: C64) -> Mat3 {
    let mut out = *m;
    out.iter_mut().flatten().for_each(|z| *z *= s);
    out
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = zero_mat();
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    let mut out = zero3();
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    out
}

/// `a·M·b` (no conjugation).
pub fn bilinear(a: &Vec3, m: &Mat3, b: &Vec3) -> C64 {
    dot(a, &mat_vec(m, b))
}

pub fn mat_max_abs(m: &Mat3) -> f64 {
    m.iter().flatten().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn tensor_max_abs(t: &Tensor3) -> f64 {
    t.iter().fold(0.0, |acc, m| acc.max(mat_max_abs(m)))
}

pub fn mat_re(m: &Mat3) -> Mat3 {
    let mut out = *m;
    out.iter_mut().flatten().for_each(|z| *z = C64::new(z.re, 0.0));
    out
}

pub fn mat_im(m: &Mat3) -> Mat3 {
    let mut out = *m;
    out.iter_mut().flatten().for_each(|z| *z = C64::new(z.im, 0.0));
    out
}

/// Contracts `a_i T_kij b_j` for each `k`.
pub fn contract(a: &Vec3, t: &Tensor3, b: &Vec3) -> Vec3 {
    [bilinear(a, &t[0], b), bilinear(a, &t[1], b), bilinear(a, &t[2], b)]
}

/// Cylindrical components at azimuth `phi` of a Cartesian vector.
pub fn cart_to_cyl(v: &Vec3, phi: f64) -> Vec3 {
    let (s, c) = phi.sin_cos();
    [v[0] * c + v[1] * s, -v[0] * s + v[1] * c, v[2]]
}

/// Cartesian components of a vector given in the cylindrical basis at `phi`.
pub fn cyl_to_cart(v: &Vec3, phi: f64) -> Vec3 {
    let (s, c) = phi.sin_cos();
    [v[0] * c - v[1] * s, v[0] * s + v[1] * c, v[2]]
}

pub fn re3(v: &Vec3) -> [f64; 3] {
    [v[0].re, v[1].re, v[2].re]
}
