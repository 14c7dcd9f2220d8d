use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{norm3, split_tensor, GreenKind, GreenSource, Tensor3, Vec3};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::specfun::{
    h_ratios, j_over_h, psi_log_derivative, xi_log_derivative, ScaledHankel, MAX_ORDER,
};

/// Relative size of the last terms at which the adaptive multipole sum stops.
pub const N_MAX_REL_TOL: f64 = 1e-12;
/// Decay exponent beyond which the scattering tensor underflows to zero.
const UNDERFLOW_EXPONENT: f64 = 1400.0;
/// Hard cap on the multipole order.
pub const N_MAX_CAP: usize = MAX_ORDER;

/// One Lorentz term ω_p² / (ω₀² − ω² − iγω).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    pub plasma_weight: f64,
    pub resonance: f64,
    #[serde(default)]
    pub damping: f64,
}

/// Drude–Lorentz permittivity ε(ω) = ε_∞ + Σ ω_p²/(ω₀² − ω² − iγω).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPermittivity", into = "RawPermittivity")]
pub struct PermittivityModel {
    background: f64,
    oscillators: Vec<Oscillator>,
}

#[derive(Serialize, Deserialize)]
struct RawPermittivity {
    #[serde(default = "one")]
    background: f64,
    #[serde(default)]
    oscillators: Vec<Oscillator>,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawPermittivity> for PermittivityModel {
    type Error = Error;
    fn try_from(raw: RawPermittivity) -> Result<Self> {
        PermittivityModel::new(raw.background, raw.oscillators)
    }
}

impl From<PermittivityModel> for RawPermittivity {
    fn from(p: PermittivityModel) -> Self {
        RawPermittivity {
            background: p.background,
            oscillators: p.oscillators,
        }
    }
}

impl PermittivityModel {
    /// `background` must be ≥ 1 so that ε(iu) ≥ 1.
    pub fn new(background: f64, oscillators: Vec<Oscillator>) -> Result<Self> {
        if !background.is_finite() || background < 1.0 {
            return Err(Error::InvalidMaterial(format!(
                "background {background} must be finite and >= 1"
            )));
        }
        for (i, o) in oscillators.iter().enumerate() {
            let ok = o.plasma_weight.is_finite()
                && o.plasma_weight >= 0.0
                && o.resonance.is_finite()
                && o.resonance > 0.0
                && o.damping.is_finite()
                && o.damping >= 0.0;
            if !ok {
                return Err(Error::InvalidMaterial(format!(
                    "oscillator {i}: need plasma_weight >= 0, resonance > 0, damping >= 0"
                )));
            }
        }
        Ok(Self {
            background,
            oscillators,
        })
    }

    pub fn vacuum() -> Self {
        Self {
            background: 1.0,
            oscillators: Vec::new(),
        }
    }

    /// Dispersionless ε.
    pub fn constant(eps: f64) -> Result<Self> {
        Self::new(eps, Vec::new())
    }

    pub fn single_lorentz(plasma_weight: f64, resonance: f64, damping: f64) -> Result<Self> {
        Self::new(
            1.0,
            vec![Oscillator {
                plasma_weight,
                resonance,
                damping,
            }],
        )
    }

    pub fn background(&self) -> f64 {
        self.background
    }

    pub fn oscillators(&self) -> &[Oscillator] {
        &self.oscillators
    }

    pub fn is_vacuum(&self) -> bool {
        self.background == 1.0 && self.oscillators.iter().all(|o| o.plasma_weight == 0.0)
    }

    pub fn evaluate(&self, omega: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        self.oscillators
            .iter()
            .fold(Complex64::new(self.background, 0.0), |acc, o| {
                acc + o.plasma_weight
                    / (o.resonance * o.resonance - omega * omega - i * o.damping * omega)
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSphere", into = "RawSphere")]
pub struct SphereSpec {
    radius: f64,
    material: PermittivityModel,
}

#[derive(Serialize, Deserialize)]
struct RawSphere {
    radius: f64,
    material: PermittivityModel,
}

impl TryFrom<RawSphere> for SphereSpec {
    type Error = Error;
    fn try_from(raw: RawSphere) -> Result<Self> {
        SphereSpec::new(raw.radius, raw.material)
    }
}

impl From<SphereSpec> for RawSphere {
    fn from(s: SphereSpec) -> Self {
        RawSphere {
            radius: s.radius,
            material: s.material,
        }
    }
}

impl SphereSpec {
    pub fn new(radius: f64, material: PermittivityModel) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidMaterial(format!(
                "sphere radius {radius} must be positive"
            )));
        }
        Ok(Self { radius, material })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn material(&self) -> &PermittivityModel {
        &self.material
    }
}

/// How many multipoles to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NMaxPolicy {
    /// Stop once three consecutive terms fall below `N_MAX_REL_TOL` of the sum.
    #[default]
    Adaptive,
    Fixed(usize),
}

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

/// (B_n^M, B_n^N) for n = 1..=n_max in scaled form; index 0 is unused.
///
/// Both are built from log-derivatives and the ratio j_n/h_n at z₀, so the
/// exponential factors of the Bessel functions never appear separately.
pub fn mie_coefficients(
    n_max: usize,
    omega: Complex64,
    sphere: &SphereSpec,
    constants: &PhysicalConstants,
) -> Result<Vec<(ScaledHankel, ScaledHankel)>> {
    check_omega(omega)?;
    if n_max == 0 || n_max > MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            order: n_max,
            max: MAX_ORDER,
        });
    }
    let mut out = vec![(ScaledHankel::zero(), ScaledHankel::zero()); n_max + 1];
    let eps = sphere.material.evaluate(omega);
    if eps == Complex64::new(1.0, 0.0) {
        return Ok(out);
    }
    let m = eps.sqrt();
    let z0 = omega * sphere.radius / constants.c();
    let z1 = m * z0;
    let d0 = psi_log_derivative(n_max, z0);
    let d1 = psi_log_derivative(n_max, z1);
    let g0 = xi_log_derivative(n_max, z0);
    let r = j_over_h(n_max, z0);
    for n in 1..=n_max {
        let num_m = d0[n] - m * d1[n];
        let den_m = g0[n] - m * d1[n];
        let num_n = m * d0[n] - d1[n];
        let den_n = m * g0[n] - d1[n];
        for (den, a, b) in [(den_m, g0[n], m * d1[n]), (den_n, m * g0[n], d1[n])] {
            if !(den.norm() > 1e-15 * (a.norm() + b.norm())) {
                return Err(Error::DenominatorUnderflow { order: n });
            }
        }
        out[n] = (r[n].scale(-num_m / den_m), r[n].scale(-num_n / den_n));
    }
    Ok(out)
}

/// Magnetic Mie coefficient B_n^M(ω).
pub fn mie_b_m(
    n: usize,
    omega: Complex64,
    sphere: &SphereSpec,
    constants: &PhysicalConstants,
) -> Result<Complex64> {
    Ok(mie_coefficients(n, omega, sphere, constants)?[n]
        .0
        .to_complex())
}

/// Electric Mie coefficient B_n^N(ω).
pub fn mie_b_n(
    n: usize,
    omega: Complex64,
    sphere: &SphereSpec,
    constants: &PhysicalConstants,
) -> Result<Complex64> {
    Ok(mie_coefficients(n, omega, sphere, constants)?[n]
        .1
        .to_complex())
}

/// Equal-point scattering tensor in the spherical frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereDiag {
    pub g_rr: Complex64,
    /// G_θθ = G_φφ.
    pub g_tt: Complex64,
    pub n_max_used: usize,
}

impl SphereDiag {
    pub fn trace(&self) -> Complex64 {
        self.g_rr + 2.0 * self.g_tt
    }
}

/// Per-order radial and tangential pieces, without the ic/(4πωr²) prefactor.
/// The tangential piece already carries the factor 2 of the two tangential axes.
fn multipole_terms(
    n_max: usize,
    r: f64,
    omega: Complex64,
    sphere: &SphereSpec,
    constants: &PhysicalConstants,
) -> Result<Vec<(Complex64, Complex64)>> {
    let coeffs = mie_coefficients(n_max, omega, sphere, constants)?;
    let z = omega * r / constants.c();
    let sigma = h_ratios(n_max, z);
    let h = crate::specfun::sph_hankel1_seq(n_max, z)?;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    for n in 1..=n_max {
        let nf = n as f64;
        let (bm, bn) = coeffs[n];
        let h2 = h[n] * h[n];
        let dlog = z / sigma[n] - nf;
        let w = 2.0 * nf + 1.0;
        let radial = (bn * h2)
            .scale(Complex64::new(w * nf * (nf + 1.0), 0.0))
            .to_complex();
        let tang = ((bn * h2).scale(dlog * dlog * w).to_complex())
            + (bm * h2).scale(z * z * w).to_complex();
        out.push((radial, tang));
    }
    Ok(out)
}

fn sum_terms(
    terms: &[(Complex64, Complex64)],
    policy: NMaxPolicy,
) -> Option<(Complex64, Complex64, usize)> {
    let mut sr = Complex64::new(0.0, 0.0);
    let mut st = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for (n, &(a, b)) in terms.iter().enumerate().skip(1) {
        sr += a;
        st += b;
        if let NMaxPolicy::Adaptive = policy {
            if a.norm() + b.norm() <= N_MAX_REL_TOL * (sr.norm() + st.norm()) {
                small += 1;
                if small == 3 {
                    return Some((sr, st, n));
                }
            } else {
                small = 0;
            }
        }
    }
    match policy {
        NMaxPolicy::Fixed(_) => Some((sr, st, terms.len() - 1)),
        NMaxPolicy::Adaptive => None,
    }
}

fn diag_sums(
    r: f64,
    omega: Complex64,
    sphere: &SphereSpec,
    policy: NMaxPolicy,
    constants: &PhysicalConstants,
) -> Result<(Complex64, Complex64, usize)> {
    check_omega(omega)?;
    if !r.is_finite() || r <= sphere.radius {
        return Err(Error::InsideSphere {
            r,
            radius: sphere.radius,
        });
    }
    // every term carries exp(-2 Im(z - z0)); past this the sum is exactly zero in f64
    if 2.0 * omega.im * (r - sphere.radius) / constants.c() > UNDERFLOW_EXPONENT {
        let zero = Complex64::new(0.0, 0.0);
        return Ok((zero, zero, 1));
    }
    match policy {
        NMaxPolicy::Fixed(n) => {
            let terms = multipole_terms(n, r, omega, sphere, constants)?;
            Ok(sum_terms(&terms, policy).expect("fixed policy always sums"))
        }
        NMaxPolicy::Adaptive => {
            let z0 = (omega * sphere.radius / constants.c()).norm();
            let mut n = (16 + (2.0 * z0) as usize).min(N_MAX_CAP);
            loop {
                let terms = multipole_terms(n, r, omega, sphere, constants)?;
                if let Some(s) = sum_terms(&terms, policy) {
                    return Ok(s);
                }
                if n == N_MAX_CAP {
                    return Ok(
                        sum_terms(&terms, NMaxPolicy::Fixed(n)).expect("fixed policy always sums")
                    );
                }
                n = (4 * n).min(N_MAX_CAP);
            }
        }
    }
}

/// G_rr and G_θθ = G_φφ of the scattering tensor at equal points, distance `r`
/// from the sphere centre.
pub fn sphere_scattering_green_diag(
    r: f64,
    omega: Complex64,
    sphere: &SphereSpec,
    policy: NMaxPolicy,
    constants: &PhysicalConstants,
) -> Result<SphereDiag> {
    let (sr, st, n) = diag_sums(r, omega, sphere, policy, constants)?;
    let pre = Complex64::new(0.0, constants.c()) / (4.0 * std::f64::consts::PI * omega * r * r);
    Ok(SphereDiag {
        g_rr: pre * sr,
        g_tt: pre * st / 2.0,
        n_max_used: n,
    })
}

/// Σ_n T_n with tr G⁽¹⁾ = ic/(4πωr²)·Σ_n T_n, and the order used.
pub(crate) fn sphere_trace_sum(
    r: f64,
    omega: Complex64,
    sphere: &SphereSpec,
    policy: NMaxPolicy,
    constants: &PhysicalConstants,
) -> Result<(Complex64, usize)> {
    let (sr, st, n) = diag_sums(r, omega, sphere, policy, constants)?;
    Ok((sr + st, n))
}

/// Sphere scattering tensor as a `GreenSource`; only equal points are supported.
#[derive(Debug, Clone)]
pub struct SphereScattering {
    pub sphere: SphereSpec,
    pub policy: NMaxPolicy,
    pub constants: PhysicalConstants,
}

impl GreenSource for SphereScattering {
    fn evaluate(&self, r1: Vec3, r2: Vec3, omega: Complex64) -> Result<Tensor3> {
        if r1 != r2 {
            return Err(Error::UnsupportedGeometry(
                "sphere scattering tensor is only available at equal points".into(),
            ));
        }
        let r = norm3(r1);
        let d = sphere_scattering_green_diag(r, omega, &self.sphere, self.policy, &self.constants)?;
        let e = [r1[0] / r, r1[1] / r, r1[2] / r];
        Ok(split_tensor(d.g_tt, d.g_tt - d.g_rr, e))
    }

    fn kind(&self) -> GreenKind {
        GreenKind::ScatteringOnly
    }
}
