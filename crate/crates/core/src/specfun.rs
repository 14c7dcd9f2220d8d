//! Spherical Bessel and Hankel functions of integer order on complex arguments.
//!
//! Sequences are assembled from ratio recurrences: `j_n/j_{n-1}` by a downward
//! continued fraction (Miller), `h_n/h_{n-1}` upward. Hankel values are carried
//! as [`ScaledHankel`] so that `exp(-Im z)` decay and the `z^{-(n+1)}` blow-up
//! at small argument never leave the floating-point range.

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported order.
pub const MAX_ORDER: usize = 200;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `value * exp(scale_exponent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledHankel {
    pub value: Complex64,
    pub scale_exponent: f64,
}

impl ScaledHankel {
    pub fn new(value: Complex64, scale_exponent: f64) -> Self {
        Self {
            value,
            scale_exponent,
        }
        .normalized()
    }

    pub fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            scale_exponent: 0.0,
        }
    }

    /// Unscaled value; may over- or underflow.
    pub fn to_complex(self) -> Complex64 {
        if self.value == Complex64::new(0.0, 0.0) {
            return self.value;
        }
        self.value * self.scale_exponent.exp()
    }

    pub fn norm(self) -> f64 {
        self.to_complex().norm()
    }

    /// Natural log of the modulus, finite even when `to_complex` is not.
    pub fn ln_norm(self) -> f64 {
        self.value.norm().ln() + self.scale_exponent
    }

    pub fn scale(self, by: Complex64) -> Self {
        Self {
            value: self.value * by,
            scale_exponent: self.scale_exponent,
        }
        .normalized()
    }

    pub fn powi(self, n: i32) -> Self {
        Self {
            value: self.value.powi(n),
            scale_exponent: self.scale_exponent * n as f64,
        }
        .normalized()
    }

    fn normalized(self) -> Self {
        let m = self.value.norm();
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        if !(1e-100..=1e100).contains(&m) {
            let l = m.ln();
            Self {
                value: self.value / m,
                scale_exponent: self.scale_exponent + l,
            }
        } else {
            self
        }
    }
}

impl Mul for ScaledHankel {
    type Output = ScaledHankel;
    fn mul(self, rhs: ScaledHankel) -> ScaledHankel {
        Self {
            value: self.value * rhs.value,
            scale_exponent: self.scale_exponent + rhs.scale_exponent,
        }
        .normalized()
    }
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            order: n,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

fn check_finite(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFiniteArgument);
    }
    Ok(())
}

/// sin z and cos z multiplied by exp(-|Im z|).
fn scaled_sin_cos(z: Complex64) -> (Complex64, Complex64) {
    let y = z.im;
    if y.abs() < 300.0 {
        let s = (-y.abs()).exp();
        return (z.sin() * s, z.cos() * s);
    }
    let (a, b) = if y > 0.0 {
        // e^{iz} e^{-y}, e^{-iz} e^{-y}
        (
            Complex64::from_polar((-2.0 * y).exp(), z.re),
            Complex64::from_polar(1.0, -z.re),
        )
    } else {
        (
            Complex64::from_polar(1.0, z.re),
            Complex64::from_polar((2.0 * y).exp(), -z.re),
        )
    };
    ((a - b) / (2.0 * I), (a + b) / 2.0)
}

/// `rho[k] = j_k(z) / j_{k-1}(z)` for `k = 1..=n_max`; `rho[0]` is unused.
pub(crate) fn j_ratios(n_max: usize, z: Complex64) -> Vec<Complex64> {
    let mut rho = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if n_max == 0 || z == Complex64::new(0.0, 0.0) {
        return rho;
    }
    let az = z.norm();
    let start = n_max.max(az.ceil() as usize) + 40 + (4.0 * az.cbrt()).ceil() as usize;
    let mut next = Complex64::new(0.0, 0.0);
    for k in (1..=start).rev() {
        let cur = 1.0 / ((2 * k + 1) as f64 / z - next);
        if k <= n_max {
            rho[k] = cur;
        }
        next = cur;
    }
    rho
}

/// `sigma[k] = h_k(z) / h_{k-1}(z)` for `k = 1..=n_max`.
pub(crate) fn h_ratios(n_max: usize, z: Complex64) -> Vec<Complex64> {
    let mut sigma = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if n_max == 0 {
        return sigma;
    }
    sigma[1] = 1.0 / z - I;
    for k in 1..n_max {
        sigma[k + 1] = (2 * k + 1) as f64 / z - 1.0 / sigma[k];
    }
    sigma
}

/// j_0..=j_{n_max} scaled by exp(-|Im z|).
fn j_sequence_scaled(n_max: usize, z: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if z == Complex64::new(0.0, 0.0) {
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    let rho = j_ratios(n_max.max(1), z);
    let (s, c) = scaled_sin_cos(z);
    let j0 = s / z;
    if z.norm() < 1.0 {
        out[0] = j0;
        for k in 1..=n_max {
            out[k] = out[k - 1] * rho[k];
        }
        return out;
    }
    let j1 = s / (z * z) - c / z;
    if j0.norm() >= j1.norm() {
        out[0] = j0;
        for k in 1..=n_max {
            out[k] = out[k - 1] * rho[k];
        }
    } else {
        out[0] = j1 / rho[1];
        if n_max >= 1 {
            out[1] = j1;
            for k in 2..=n_max {
                out[k] = out[k - 1] * rho[k];
            }
        }
    }
    out
}

/// Spherical Bessel functions j_0(z)..=j_{n_max}(z).
pub fn sph_bessel_j_seq(n_max: usize, z: Complex64) -> Result<Vec<Complex64>> {
    check_order(n_max)?;
    check_finite(z)?;
    let scale = z.im.abs().exp();
    Ok(j_sequence_scaled(n_max, z)
        .into_iter()
        .map(|v| v * scale)
        .collect())
}

pub fn sph_bessel_j(n: usize, z: Complex64) -> Result<Complex64> {
    Ok(sph_bessel_j_seq(n, z)?[n])
}

/// d/dz [z j_n(z)] = z j_{n-1}(z) - n j_n(z).
pub fn riccati_j_prime(n: usize, z: Complex64) -> Result<Complex64> {
    check_order(n)?;
    check_finite(z)?;
    if n == 0 {
        return Ok(z.cos());
    }
    let j = sph_bessel_j_seq(n, z)?;
    Ok(z * j[n - 1] - n as f64 * j[n])
}

fn check_hankel_arg(z: Complex64) -> Result<()> {
    check_finite(z)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroArgument);
    }
    if z.im < 0.0 {
        return Err(Error::LowerHalfPlane);
    }
    Ok(())
}

/// h_0^{(1)}..=h_{n_max}^{(1)} in scaled form.
pub fn sph_hankel1_seq(n_max: usize, z: Complex64) -> Result<Vec<ScaledHankel>> {
    check_order(n_max)?;
    check_hankel_arg(z)?;
    let sigma = h_ratios(n_max, z);
    // h_0 = -i e^{iz} / z
    let h0 = ScaledHankel::new(-I * Complex64::from_polar(1.0, z.re) / z, -z.im);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(h0);
    for k in 1..=n_max {
        let prev = out[k - 1];
        out.push(prev.scale(sigma[k]));
    }
    Ok(out)
}

pub fn sph_hankel1(n: usize, z: Complex64) -> Result<ScaledHankel> {
    Ok(sph_hankel1_seq(n, z)?[n])
}

/// d/dz [z h_n^{(1)}(z)] in scaled form.
pub fn riccati_h_prime(n: usize, z: Complex64) -> Result<ScaledHankel> {
    check_order(n)?;
    check_hankel_arg(z)?;
    if n == 0 {
        return Ok(ScaledHankel::new(Complex64::from_polar(1.0, z.re), -z.im));
    }
    let sigma = h_ratios(n, z);
    let h = sph_hankel1_seq(n, z)?;
    Ok(h[n].scale(z / sigma[n] - n as f64))
}

/// Logarithmic derivatives psi_n'/psi_n of the Riccati-Bessel psi_n = z j_n.
pub(crate) fn psi_log_derivative(n_max: usize, z: Complex64) -> Vec<Complex64> {
    let rho = j_ratios(n_max, z);
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                z.cos() / z.sin()
            } else {
                1.0 / rho[n] - n as f64 / z
            }
        })
        .collect()
}

/// Logarithmic derivatives xi_n'/xi_n of xi_n = z h_n^{(1)}.
pub(crate) fn xi_log_derivative(n_max: usize, z: Complex64) -> Vec<Complex64> {
    let sigma = h_ratios(n_max, z);
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                I
            } else {
                1.0 / sigma[n] - n as f64 / z
            }
        })
        .collect()
}

/// Ratios j_n(z)/h_n^{(1)}(z), scaled. `Im z >= 0`, `z != 0`.
pub(crate) fn j_over_h(n_max: usize, z: Complex64) -> Vec<ScaledHankel> {
    let rho = j_ratios(n_max, z);
    let sigma = h_ratios(n_max, z);
    // j_0/h_0 = i sin z e^{-iz} = (1 - e^{-2iz})/2
    let r0 = if z.im > 1.0 {
        let v = (Complex64::new((-2.0 * z.im).exp(), 0.0)
            - Complex64::from_polar(1.0, -2.0 * z.re))
            / 2.0;
        ScaledHankel::new(v, 2.0 * z.im)
    } else {
        ScaledHankel::new(I * z.sin() * (-I * z).exp(), 0.0)
    };
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(r0);
    for n in 1..=n_max {
        let prev = out[n - 1];
        out.push(prev.scale(rho[n] / sigma[n]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn closed_forms_at_one() {
        assert!(rel(sph_bessel_j(0, c(1.0)).unwrap(), c(1f64.sin())) < 1e-15);
        assert!((sph_bessel_j(1, c(1.0)).unwrap().re - 0.3011686789).abs() < 1e-10);
        let h1 = sph_hankel1(1, c(1.0)).unwrap().to_complex();
        assert!((h1 - Complex64::new(0.3011686789, -1.3817732907)).norm() < 1e-9);
        assert!((riccati_j_prime(1, c(1.0)).unwrap().re - 0.5403023059).abs() < 1e-10);
        let xp = riccati_h_prime(0, c(1.0)).unwrap().to_complex();
        assert!((xp - Complex64::new(0.5403023059, 0.8414709848)).norm() < 1e-9);
    }

    #[test]
    fn small_argument_limits() {
        let j5 = sph_bessel_j(5, c(1e-4)).unwrap();
        assert!(rel(j5, c(1e-20 / 10395.0)) < 1e-8);
        let h3 = sph_hankel1(3, c(1e-4)).unwrap().to_complex();
        assert!(rel(h3, Complex64::new(0.0, -15.0 / 1e-16)) < 1e-8);
        for n in 0..8usize {
            let z = 1e-6;
            let df2 = (1..=2 * n + 1)
                .step_by(2)
                .map(|k| k as f64)
                .product::<f64>();
            let j = sph_bessel_j(n, c(z)).unwrap();
            assert!((j.re / (z.powi(n as i32) / df2) - 1.0).abs() < 1e-6);
            if n > 0 {
                let dfm = (1..=2 * n - 1)
                    .step_by(2)
                    .map(|k| k as f64)
                    .product::<f64>();
                let h = sph_hankel1(n, c(z)).unwrap();
                let ratio = h.to_complex() * z.powi(n as i32 + 1) / Complex64::new(0.0, -dfm);
                assert!((ratio - 1.0).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn zero_argument() {
        assert_eq!(sph_bessel_j(0, c(0.0)).unwrap(), c(1.0));
        assert_eq!(sph_bessel_j(3, c(0.0)).unwrap(), c(0.0));
        assert_eq!(sph_hankel1(1, c(0.0)), Err(Error::ZeroArgument));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            sph_bessel_j(201, c(1.0)),
            Err(Error::OrderOutOfRange { .. })
        ));
        assert_eq!(
            sph_bessel_j(1, Complex64::new(f64::NAN, 0.0)),
            Err(Error::NonFiniteArgument)
        );
        assert_eq!(
            sph_hankel1(1, Complex64::new(1.0, -1.0)),
            Err(Error::LowerHalfPlane)
        );
    }

    #[test]
    fn imaginary_axis_hankel_decay() {
        let h0 = sph_hankel1(0, Complex64::new(0.0, 10.0)).unwrap();
        assert!((h0.norm() / ((-10f64).exp() / 10.0) - 1.0).abs() < 1e-12);
        // far along the axis the unscaled value underflows but the log stays exact
        let h = sph_hankel1(2, Complex64::new(0.0, 2000.0)).unwrap();
        // |h_2(iy)| = e^{-y}/y (1 + 3/y + 3/y^2)
        let y = 2000.0f64;
        let want = -y - y.ln() + (1.0 + 3.0 / y + 3.0 / (y * y)).ln();
        assert!((h.ln_norm() - want).abs() < 1e-12);
    }

    #[test]
    fn real_on_imaginary_axis() {
        // h_n(iy)^2 and [z h_n]'^2 are real, as needed by the imaginary-frequency sums
        for n in 1..6 {
            let z = Complex64::new(0.0, 5.0);
            let h2 = sph_hankel1(n, z).unwrap().powi(2).to_complex();
            let x2 = riccati_h_prime(n, z).unwrap().powi(2).to_complex();
            assert!(h2.im.abs() <= 1e-13 * h2.norm());
            assert!(x2.im.abs() <= 1e-13 * x2.norm());
        }
    }

    #[test]
    fn wronskian() {
        // j_n [z h_n]' - h_n [z j_n]' = i / z
        for n in 0..=20 {
            for &x in &[0.1, 0.7, 3.0, 12.5, 50.0] {
                let z = c(x);
                let j = sph_bessel_j(n, z).unwrap();
                let h = sph_hankel1(n, z).unwrap().to_complex();
                let jp = riccati_j_prime(n, z).unwrap();
                let hp = riccati_h_prime(n, z).unwrap().to_complex();
                let w = j * hp - h * jp;
                let want = I / z;
                assert!(rel(w, want) < 1e-10, "n={n} x={x} w={w}");
            }
        }
    }

    #[test]
    fn reflection() {
        for n in 0..10 {
            for &(x, y) in &[(1.0, 0.5), (7.0, -3.0), (0.2, 2.0), (30.0, 10.0)] {
                let z = Complex64::new(x, y);
                let a = sph_bessel_j(n, z.conj()).unwrap();
                let b = sph_bessel_j(n, z).unwrap().conj();
                assert!(rel(a, b) < 1e-14);
            }
        }
    }

    #[test]
    fn finite_differences() {
        let h = 1e-5;
        for n in 0..=10 {
            for &x in &[0.1, 0.5, 2.0, 9.0, 25.0, 50.0] {
                let f = |t: f64| c(t) * sph_bessel_j(n, c(t)).unwrap();
                let fd = (f(x + h) - f(x - h)) / (2.0 * h);
                let d = riccati_j_prime(n, c(x)).unwrap();
                assert!((d - fd).norm() <= 1e-6 * d.norm().max(1e-3), "n={n} x={x}");
                let g = |t: f64| c(t) * sph_hankel1(n, c(t)).unwrap().to_complex();
                let fd = (g(x + h) - g(x - h)) / (2.0 * h);
                let d = riccati_h_prime(n, c(x)).unwrap().to_complex();
                assert!((d - fd).norm() <= 1e-6 * d.norm(), "n={n} x={x}");
            }
        }
    }
}
