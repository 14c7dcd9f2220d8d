use num_complex::Complex64;

use super::{norm3, split_tensor, sub, GreenKind, GreenSource, Tensor3, Vec3};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_omega(omega: Complex64) -> Result<()> {
    if !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::NonFiniteArgument);
    }
    if omega == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroFrequency);
    }
    if omega.im < 0.0 {
        return Err(Error::LowerHalfPlane);
    }
    Ok(())
}

/// Longitudinal and transverse components (G_ll, G_tt) at separation `l`.
pub fn free_space_diag(
    l: f64,
    omega: Complex64,
    constants: &PhysicalConstants,
) -> Result<(Complex64, Complex64)> {
    check_omega(omega)?;
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::CoincidentPoints);
    }
    let (p, q) = pq(l, omega, constants.c());
    let pre = prefactor(l, omega, constants.c());
    Ok((pre * (p - q), pre * p))
}

fn pq(l: f64, omega: Complex64, c: f64) -> (Complex64, Complex64) {
    let x = -I * omega * l / c;
    (1.0 + x + x * x, 3.0 + 3.0 * x + x * x)
}

fn prefactor(l: f64, omega: Complex64, c: f64) -> Complex64 {
    -c * c * (I * omega * l / c).exp() / (4.0 * std::f64::consts::PI * omega * omega * l.powi(3))
}

/// Free-space Green tensor between `r_a` and `r_b`.
pub fn free_space_green(
    r_a: Vec3,
    r_b: Vec3,
    omega: Complex64,
    constants: &PhysicalConstants,
) -> Result<Tensor3> {
    check_omega(omega)?;
    let d = sub(r_b, r_a);
    let l = norm3(d);
    if l == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let e = [d[0] / l, d[1] / l, d[2] / l];
    let (p, q) = pq(l, omega, constants.c());
    let pre = prefactor(l, omega, constants.c());
    Ok(split_tensor(pre * p, pre * q, e))
}

/// Free space as a `GreenSource`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeSpace {
    pub constants: PhysicalConstants,
}

impl FreeSpace {
    pub fn new(constants: PhysicalConstants) -> Self {
        Self { constants }
    }
}

impl GreenSource for FreeSpace {
    fn evaluate(&self, r1: Vec3, r2: Vec3, omega: Complex64) -> Result<Tensor3> {
        free_space_green(r1, r2, omega, &self.constants)
    }

    fn kind(&self) -> GreenKind {
        GreenKind::Full
    }
}
