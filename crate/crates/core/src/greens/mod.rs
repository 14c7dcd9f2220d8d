//! Dyadic Green tensors: free space and the scattering part outside a
//! dielectric sphere.

use num_complex::Complex64;

use crate::error::Result;

mod free_space;
mod sphere;

pub use free_space::{free_space_diag, free_space_green, FreeSpace};
pub(crate) use sphere::sphere_trace_sum;
pub use sphere::{
    mie_b_m, mie_b_n, mie_coefficients, sphere_scattering_green_diag, NMaxPolicy, Oscillator,
    PermittivityModel, SphereDiag, SphereScattering, SphereSpec, N_MAX_CAP, N_MAX_REL_TOL,
};

pub type Vec3 = [f64; 3];
pub type Tensor3 = [[Complex64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenKind {
    Full,
    ScatteringOnly,
}

/// Anything that can produce G(r1, r2, ω) for Im ω ≥ 0.
pub trait GreenSource: Send + Sync {
    fn evaluate(&self, r1: Vec3, r2: Vec3, omega: Complex64) -> Result<Tensor3>;
    fn kind(&self) -> GreenKind;
}

pub fn zero_tensor() -> Tensor3 {
    [[Complex64::new(0.0, 0.0); 3]; 3]
}

pub fn transpose(t: &Tensor3) -> Tensor3 {
    let mut out = zero_tensor();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = t[j][i];
        }
    }
    out
}

pub fn matmul(a: &Tensor3, b: &Tensor3) -> Tensor3 {
    let mut out = zero_tensor();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn trace(t: &Tensor3) -> Complex64 {
    t[0][0] + t[1][1] + t[2][2]
}

/// u · T · v for real vectors.
pub fn bilinear(u: Vec3, t: &Tensor3, v: Vec3) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            s += u[i] * t[i][j] * v[j];
        }
    }
    s
}

/// Largest entry modulus.
pub fn max_abs(t: &Tensor3) -> f64 {
    t.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm3(a: Vec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// `p I - q e e` for a unit vector `e`.
pub(crate) fn split_tensor(p: Complex64, q: Complex64, e: Vec3) -> Tensor3 {
    let mut out = zero_tensor();
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { p } else { Complex64::new(0.0, 0.0) };
            out[i][j] = delta - q * e[i] * e[j];
        }
    }
    out
}
