//! Spherical Bessel/Hankel values against independent oracles: the power
//! series summed in 600-bit fixed point, and the terminating closed-form
//! sum for h_n.

use exvdw::specfun::{riccati_h_prime, riccati_j_prime, sph_bessel_j, sph_hankel1};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

const FRAC_BITS: usize = 600;
const ARG_BITS: i32 = 64;

/// f64 as an exact integer multiple of 2^-ARG_BITS.
fn dyadic(x: f64) -> BigInt {
    let scaled = x * 2f64.powi(ARG_BITS);
    assert_eq!(
        scaled.fract(),
        0.0,
        "argument not representable with {ARG_BITS} fraction bits"
    );
    BigInt::from(scaled as i128)
}

fn fixed_to_f64(v: &BigInt) -> f64 {
    // keep the top bits and rescale
    let bits = v.bits() as i64;
    let shift = (bits - 60).max(0);
    let top: BigInt = v >> shift as usize;
    top.to_f64().unwrap() * 2f64.powi((shift - FRAC_BITS as i64) as i32)
}

/// j_n(z) from its Taylor series, summed in 600-bit fixed point.
fn series_j(n: usize, z: Complex64) -> Complex64 {
    let (a, b) = (dyadic(z.re), dyadic(z.im));
    // -z^2/2 = (b^2 - a^2)/2 - i ab, numerators over 2^(2 ARG_BITS)
    let q_re = &b * &b - &a * &a;
    let q_im = -(&a * &b) * 2;
    let shift = (2 * ARG_BITS + 1) as usize;
    let one: BigInt = BigInt::from(1) << FRAC_BITS;
    let (mut t_re, mut t_im) = (one.clone(), BigInt::zero());
    let (mut s_re, mut s_im) = (one, BigInt::zero());
    let mut k = 1usize;
    loop {
        let nr = (&t_re * &q_re - &t_im * &q_im) >> shift;
        let ni = (&t_re * &q_im + &t_im * &q_re) >> shift;
        let d = BigInt::from(k) * BigInt::from(2 * n + 2 * k + 1);
        t_re = nr / &d;
        t_im = ni / &d;
        s_re += &t_re;
        s_im += &t_im;
        if k as f64 > z.norm() * z.norm() && t_re.bits() < 40 && t_im.bits() < 40 {
            break;
        }
        k += 1;
    }
    let sum = Complex64::new(fixed_to_f64(&s_re), fixed_to_f64(&s_im));
    let dfact: f64 = (1..=2 * n + 1).step_by(2).map(|k| k as f64).product();
    z.powi(n as i32) / dfact * sum
}

fn closed_h(n: usize, z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let mut coef = 1.0f64;
        for t in (n - k + 1)..=(n + k) {
            coef *= t as f64;
        }
        for t in 1..=k {
            coef /= t as f64;
        }
        sum += i.powi(k as i32) * coef / (2.0 * z).powi(k as i32);
    }
    (-i).powi(n as i32 + 1) * (i * z).exp() / z * sum
}

#[test]
fn bessel_j_matches_exact_series() {
    let points = [
        Complex64::new(0.37, 0.0),
        Complex64::new(2.5, 0.0),
        Complex64::new(17.25, 0.0),
        Complex64::new(63.5, 0.0),
        Complex64::new(99.75, 0.0),
        Complex64::new(1.5, 2.25),
        Complex64::new(-4.0, 9.5),
        Complex64::new(0.0, 40.0),
        Complex64::new(30.0, 60.0),
    ];
    let mut worst = 0.0f64;
    for &z in &points {
        for n in [0usize, 1, 2, 5, 10, 25, 50] {
            let got = sph_bessel_j(n, z).unwrap();
            let want = series_j(n, z);
            let rel = (got - want).norm() / want.norm();
            worst = worst.max(rel);
            assert!(
                rel <= 1e-12,
                "n={n} z={z} got={got} want={want} rel={rel:e}"
            );
        }
    }
    eprintln!("worst relative error vs exact series: {worst:e}");
}

#[test]
fn hankel_matches_closed_sum() {
    for &z in &[
        Complex64::new(0.5, 0.0),
        Complex64::new(3.0, 0.0),
        Complex64::new(20.0, 1.0),
        Complex64::new(0.0, 7.0),
        Complex64::new(-2.0, 0.5),
    ] {
        for n in 0..=15 {
            let got = sph_hankel1(n, z).unwrap().to_complex();
            let want = closed_h(n, z);
            assert!((got - want).norm() <= 1e-12 * want.norm(), "n={n} z={z}");
        }
    }
}

#[test]
fn riccati_derivatives_by_central_differences() {
    let h = 1e-5;
    for n in 0..=10 {
        for &x in &[0.1, 1.0, 4.0, 15.0, 50.0] {
            let z = Complex64::new(x, 0.0);
            let f = |t: f64| {
                let z = Complex64::new(t, 0.0);
                z * closed_h(n, z)
            };
            let fd = (f(x + h) - f(x - h)) / (2.0 * h);
            let d = riccati_h_prime(n, z).unwrap().to_complex();
            assert!((d - fd).norm() <= 1e-6 * d.norm());
            if n <= 3 {
                let g = |t: f64| t * series_j(n, Complex64::new(t, 0.0)).re;
                let fd = (g(x + h) - g(x - h)) / (2.0 * h);
                let d = riccati_j_prime(n, z).unwrap().re;
                assert!((d - fd).abs() <= 1e-6 * d.abs().max(1e-3));
            }
        }
    }
}
