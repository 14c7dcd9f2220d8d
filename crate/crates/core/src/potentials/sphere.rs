use std::f64::consts::PI;

use num_complex::Complex64;

use super::{
    check_distance, converged, oscillation_bracket, retardation_f, Emitter, PotentialBreakdown,
    ResonantMethod, ResonantTerm,
};
use crate::atoms::{polarizability, AtomSpec};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::greens::{sphere_trace_sum, NMaxPolicy, SphereSpec};
use crate::quadrature::{try_integrate_semi_infinite, QuadOptions};

/// |ε + 2| below which the Clausius–Mossotti factor is refused.
pub const PLASMON_GUARD: f64 = 1e-6;

fn cm_factor(sphere: &SphereSpec, omega: Complex64) -> Result<Complex64> {
    let eps = sphere.material().evaluate(omega);
    if (eps + 2.0).norm() <= PLASMON_GUARD {
        return Err(Error::PlasmonResonance {
            eps_re: eps.re,
            eps_im: eps.im,
        });
    }
    Ok((eps - 1.0) / (eps + 2.0))
}

/// Point polarizability 4πε₀a³(ε−1)/(ε+2) of a small sphere.
pub fn clausius_mossotti_alpha(
    sphere: &SphereSpec,
    omega: Complex64,
    constants: &PhysicalConstants,
) -> Result<Complex64> {
    Ok(4.0 * PI * constants.eps0() * sphere.radius().powi(3) * cm_factor(sphere, omega)?)
}

fn check_outside(r: f64, sphere: &SphereSpec) -> Result<()> {
    check_distance(r)?;
    if r <= sphere.radius() {
        return Err(Error::InsideSphere {
            r,
            radius: sphere.radius(),
        });
    }
    Ok(())
}

pub(crate) fn cp_off_resonant_sphere_with_order(
    atom: &AtomSpec,
    k: usize,
    r: f64,
    sphere: &SphereSpec,
    policy: NMaxPolicy,
    opts: &QuadOptions,
    constants: &PhysicalConstants,
) -> Result<(f64, usize)> {
    check_outside(r, sphere)?;
    let Some(w_min) = atom.min_frequency(k, constants) else {
        return Ok((0.0, 0));
    };
    if sphere.material().is_vacuum() {
        return Ok((0.0, 0));
    }
    let mut n_used = 0;
    let integrand = |u: f64| -> Result<f64> {
        let w = Complex64::new(0.0, u);
        let alpha = polarizability(atom, k, w, constants)?.re;
        let (sum, n) = sphere_trace_sum(r, w, sphere, policy, constants)?;
        n_used = n_used.max(n);
        Ok(u * alpha * sum.re)
    };
    let scale = (constants.c() / (2.0 * (r - sphere.radius()))).min(w_min);
    let value = converged(try_integrate_semi_infinite(integrand, scale, opts)?)?;
    let pre = constants.hbar() * constants.mu0() * constants.c() / (8.0 * PI * PI * r * r);
    Ok((pre * value, n_used))
}

/// Off-resonant Casimir–Polder potential of level `k` at distance `r` from the
/// centre of a dielectric sphere.
pub fn cp_off_resonant_sphere(
    atom: &AtomSpec,
    k: usize,
    r: f64,
    sphere: &SphereSpec,
    policy: NMaxPolicy,
    opts: &QuadOptions,
    constants: &PhysicalConstants,
) -> Result<f64> {
    Ok(cp_off_resonant_sphere_with_order(atom, k, r, sphere, policy, opts, constants)?.0)
}

pub(crate) fn cp_resonant_sphere_with_order(
    atom: &AtomSpec,
    k: usize,
    r: f64,
    sphere: &SphereSpec,
    policy: NMaxPolicy,
    constants: &PhysicalConstants,
) -> Result<(Vec<ResonantTerm>, usize)> {
    check_outside(r, sphere)?;
    let mut out = Vec::new();
    let mut n_used = 0;
    for ch in atom
        .channels_from(k, constants)
        .into_iter()
        .filter(|c| c.is_downward())
    {
        let w = -ch.omega;
        let (sum, n) = sphere_trace_sum(r, Complex64::new(w, 0.0), sphere, policy, constants)?;
        n_used = n_used.max(n);
        let energy = constants.mu0() * constants.c() * w * ch.dipole * ch.dipole
            / (12.0 * PI * r * r)
            * sum.im;
        out.push(ResonantTerm {
            emitter: Emitter::A,
            channel: ch,
            method: ResonantMethod::PrincipalValue,
            eta: r * w / constants.c(),
            energy,
        });
    }
    Ok((out, n_used))
}

/// Resonant Casimir–Polder channels near a sphere; empty for the ground state.
pub fn cp_resonant_sphere(
    atom: &AtomSpec,
    k: usize,
    r: f64,
    sphere: &SphereSpec,
    policy: NMaxPolicy,
    constants: &PhysicalConstants,
) -> Result<Vec<ResonantTerm>> {
    Ok(cp_resonant_sphere_with_order(atom, k, r, sphere, policy, constants)?.0)
}

/// Small-sphere off-resonant limit, built on the Clausius–Mossotti factor.
pub fn cp_small_sphere_off_resonant(
    atom: &AtomSpec,
    k: usize,
    r: f64,
    sphere: &SphereSpec,
    opts: &QuadOptions,
    constants: &PhysicalConstants,
) -> Result<f64> {
    check_distance(r)?;
    let Some(w_min) = atom.min_frequency(k, constants) else {
        return Ok(0.0);
    };
    if sphere.material().is_vacuum() {
        return Ok(0.0);
    }
    let c = constants.c();
    let integrand = |u: f64| -> Result<f64> {
        let w = Complex64::new(0.0, u);
        let alpha = polarizability(atom, k, w, constants)?.re;
        Ok(alpha * cm_factor(sphere, w)?.re * retardation_f(r * u / c))
    };
    let scale = (c / (2.0 * r)).min(w_min);
    let value = converged(try_integrate_semi_infinite(integrand, scale, opts)?)?;
    let a3 = sphere.radius().powi(3);
    Ok(-constants.hbar() * a3 / (4.0 * PI * PI * constants.eps0() * r.powi(6)) * value)
}

/// Small-sphere resonant limit; uses the real part of the Clausius–Mossotti
/// factor, which is exact for lossless media.
pub fn cp_small_sphere_resonant(
    atom: &AtomSpec,
    k: usize,
    r: f64,
    sphere: &SphereSpec,
    constants: &PhysicalConstants,
) -> Result<Vec<ResonantTerm>> {
    check_distance(r)?;
    let a3 = sphere.radius().powi(3);
    let pre = -a3 / (6.0 * PI * constants.eps0() * r.powi(6));
    let mut out = Vec::new();
    for ch in atom
        .channels_from(k, constants)
        .into_iter()
        .filter(|c| c.is_downward())
    {
        let w = -ch.omega;
        let cm = cm_factor(sphere, Complex64::new(w, 0.0))?.re;
        let eta = r * w / constants.c();
        let energy = pre * ch.dipole * ch.dipole * cm * oscillation_bracket(eta);
        out.push(ResonantTerm {
            emitter: Emitter::A,
            channel: ch,
            method: ResonantMethod::PrincipalValue,
            eta,
            energy,
        });
    }
    Ok(out)
}

/// Full potential of the prepared state near a sphere. The resonant part is
/// the principal-value form; the power form has no sphere counterpart.
pub fn cp_sphere_breakdown(
    atom: &AtomSpec,
    r: f64,
    sphere: &SphereSpec,
    policy: NMaxPolicy,
    opts: &QuadOptions,
    constants: &PhysicalConstants,
) -> Result<PotentialBreakdown> {
    let k = atom.prepared_state();
    let (off_resonant, n1) =
        cp_off_resonant_sphere_with_order(atom, k, r, sphere, policy, opts, constants)?;
    let (resonant, n2) = cp_resonant_sphere_with_order(atom, k, r, sphere, policy, constants)?;
    Ok(PotentialBreakdown {
        off_resonant,
        resonant,
        n_max_used: Some(n1.max(n2)),
    })
}
