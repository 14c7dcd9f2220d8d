use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    check_distance, converged, oscillation_bracket, power_bracket, retardation_f, Emitter,
    PotentialBreakdown, ResonantMethod, ResonantTerm,
};
use crate::atoms::{polarizability, AtomSpec};
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::greens::{bilinear, matmul, norm3, sub, trace, GreenSource, Tensor3, Vec3};
use crate::quadrature::{try_integrate_semi_infinite, QuadOptions};

/// How transition dipoles are oriented.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DipoleOrientation {
    /// Randomly oriented atoms: d d → |d|²/3 · I.
    #[default]
    Isotropic,
    /// Every transition dipole of A along `a`, of B along `b` (unit vectors).
    Fixed { a: Vec3, b: Vec3 },
}

impl DipoleOrientation {
    fn normalized(self) -> Result<Self> {
        match self {
            DipoleOrientation::Isotropic => Ok(self),
            DipoleOrientation::Fixed { a, b } => {
                let (na, nb) = (norm3(a), norm3(b));
                if !(na > 0.0 && nb > 0.0) || !na.is_finite() || !nb.is_finite() {
                    return Err(Error::InvalidAtom(
                        "dipole orientation vectors must be nonzero".into(),
                    ));
                }
                Ok(DipoleOrientation::Fixed {
                    a: [a[0] / na, a[1] / na, a[2] / na],
                    b: [b[0] / nb, b[1] / nb, b[2] / nb],
                })
            }
        }
    }

    /// Unit vectors with the emitter first.
    fn vectors(self, emitter: Emitter) -> Option<(Vec3, Vec3)> {
        match (self, emitter) {
            (DipoleOrientation::Isotropic, _) => None,
            (DipoleOrientation::Fixed { a, b }, Emitter::A) => Some((a, b)),
            (DipoleOrientation::Fixed { a, b }, Emitter::B) => Some((b, a)),
        }
    }
}

/// Quadrature scale: the slower of the field decay c/(2r) and the atomic
/// frequencies.
fn decay_scale(r: f64, atoms: &[(&AtomSpec, usize)], constants: &PhysicalConstants) -> f64 {
    atoms
        .iter()
        .filter_map(|(a, k)| a.min_frequency(*k, constants))
        .fold(constants.c() / (2.0 * r), f64::min)
}

fn has_channels(atom: &AtomSpec, k: usize, constants: &PhysicalConstants) -> bool {
    !atom.channels_from(k, constants).is_empty()
}

/// Off-resonant potential from an arbitrary full Green tensor.
#[allow(clippy::too_many_arguments)]
pub fn vdw_off_resonant_general(
    atom_a: &AtomSpec,
    k: usize,
    atom_b: &AtomSpec,
    l: usize,
    green: &dyn GreenSource,
    r_a: Vec3,
    r_b: Vec3,
    orientation: DipoleOrientation,
    opts: &QuadOptions,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let r = norm3(sub(r_b, r_a));
    check_distance(r)?;
    if !has_channels(atom_a, k, constants) || !has_channels(atom_b, l, constants) {
        return Ok(0.0);
    }
    let orientation = orientation.normalized()?;
    let mu0 = constants.mu0();
    let pre = -constants.hbar() * mu0 * mu0 / (2.0 * PI);
    let integrand = |u: f64| -> Result<f64> {
        let w = Complex64::new(0.0, u);
        let aa = polarizability(atom_a, k, w, constants)?.re;
        let ab = polarizability(atom_b, l, w, constants)?.re;
        let g_ab = green.evaluate(r_a, r_b, w)?;
        let g_ba = green.evaluate(r_b, r_a, w)?;
        let geo = match orientation.vectors(Emitter::A) {
            None => trace(&matmul(&g_ab, &g_ba)),
            Some((ea, eb)) => 9.0 * bilinear(ea, &g_ab, eb) * bilinear(eb, &g_ba, ea),
        };
        Ok(u.powi(4) * aa * ab * geo.re)
    };
    let scale = decay_scale(r, &[(atom_a, k), (atom_b, l)], constants);
    Ok(pre * converged(try_integrate_semi_infinite(integrand, scale, opts)?)?)
}

struct Emission<'a> {
    emitter: Emitter,
    atom: &'a AtomSpec,
    partner: &'a AtomSpec,
    partner_state: usize,
    r_from: Vec3,
    r_to: Vec3,
    state: usize,
}

fn emissions<'a>(
    atom_a: &'a AtomSpec,
    k: usize,
    atom_b: &'a AtomSpec,
    l: usize,
    r_a: Vec3,
    r_b: Vec3,
) -> [Emission<'a>; 2] {
    [
        Emission {
            emitter: Emitter::A,
            atom: atom_a,
            state: k,
            partner: atom_b,
            partner_state: l,
            r_from: r_a,
            r_to: r_b,
        },
        Emission {
            emitter: Emitter::B,
            atom: atom_b,
            state: l,
            partner: atom_a,
            partner_state: k,
            r_from: r_b,
            r_to: r_a,
        },
    ]
}

/// Geometric factor of one resonant channel: Re tr[G·G] or Σ|G_ij|² for
/// isotropic atoms, or the fixed-orientation analogue times 9.
fn resonant_geometry(
    method: ResonantMethod,
    g_fwd: &Tensor3,
    g_back: &Tensor3,
    vectors: Option<(Vec3, Vec3)>,
) -> f64 {
    match (method, vectors) {
        (ResonantMethod::PrincipalValue, None) => trace(&matmul(g_fwd, g_back)).re,
        (ResonantMethod::Power, None) => g_fwd.iter().flatten().map(|z| z.norm_sqr()).sum(),
        (ResonantMethod::PrincipalValue, Some((e1, e2))) => {
            9.0 * (bilinear(e1, g_fwd, e2) * bilinear(e2, g_back, e1)).re
        }
        (ResonantMethod::Power, Some((e1, e2))) => 9.0 * bilinear(e1, g_fwd, e2).norm_sqr(),
    }
}

fn resonant_terms(
    emissions: &[Emission<'_>],
    green: &dyn GreenSource,
    orientation: DipoleOrientation,
    method: ResonantMethod,
    constants: &PhysicalConstants,
) -> Result<Vec<ResonantTerm>> {
    let orientation = orientation.normalized()?;
    let mu0 = constants.mu0();
    let mut out = Vec::new();
    for em in emissions {
        let r = norm3(sub(em.r_to, em.r_from));
        check_distance(r)?;
        for ch in em
            .atom
            .channels_from(em.state, constants)
            .into_iter()
            .filter(|c| c.is_downward())
        {
            let w = -ch.omega;
            let alpha = polarizability(
                em.partner,
                em.partner_state,
                Complex64::new(w, 0.0),
                constants,
            )?
            .re;
            let g_fwd = green.evaluate(em.r_from, em.r_to, Complex64::new(w, 0.0))?;
            let g_back = green.evaluate(em.r_to, em.r_from, Complex64::new(w, 0.0))?;
            let geo = resonant_geometry(method, &g_fwd, &g_back, orientation.vectors(em.emitter));
            let energy = -mu0 * mu0 * w.powi(4) * ch.dipole * ch.dipole / 3.0 * alpha * geo;
            out.push(ResonantTerm {
                emitter: em.emitter,
                channel: ch,
                method,
                eta: r * w / constants.c(),
                energy,
            });
        }
    }
    Ok(out)
}

/// Resonant channels from an arbitrary full Green tensor, principal-value form.
/// Downward channels of both atoms contribute; ground states give nothing.
#[allow(clippy::too_many_arguments)]
pub fn vdw_resonant_general(
    atom_a: &AtomSpec,
    k: usize,
    atom_b: &AtomSpec,
    l: usize,
    green: &dyn GreenSource,
    r_a: Vec3,
    r_b: Vec3,
    orientation: DipoleOrientation,
    constants: &PhysicalConstants,
) -> Result<Vec<ResonantTerm>> {
    let em = emissions(atom_a, k, atom_b, l, r_a, r_b);
    resonant_terms(
        &em,
        green,
        orientation,
        ResonantMethod::PrincipalValue,
        constants,
    )
}

/// Resonant channels in the power form. Needs at least one ground-state atom;
/// the excited one is the emitter.
#[allow(clippy::too_many_arguments)]
pub fn vdw_resonant_power(
    atom_a: &AtomSpec,
    k: usize,
    atom_b: &AtomSpec,
    l: usize,
    green: &dyn GreenSource,
    r_a: Vec3,
    r_b: Vec3,
    orientation: DipoleOrientation,
    constants: &PhysicalConstants,
) -> Result<Vec<ResonantTerm>> {
    check_power_states(k, l)?;
    let em = emissions(atom_a, k, atom_b, l, r_a, r_b);
    resonant_terms(&em, green, orientation, ResonantMethod::Power, constants)
}

fn check_power_states(k: usize, l: usize) -> Result<()> {
    if k > 0 && l > 0 {
        return Err(Error::InvalidAtom(
            "the power prescription needs a ground-state partner".into(),
        ));
    }
    Ok(())
}

/// Closed-form free-space off-resonant potential for isotropic atoms.
pub fn vdw_free_space_off_resonant(
    atom_a: &AtomSpec,
    k: usize,
    atom_b: &AtomSpec,
    l: usize,
    r: f64,
    opts: &QuadOptions,
    constants: &PhysicalConstants,
) -> Result<f64> {
    check_distance(r)?;
    if !has_channels(atom_a, k, constants) || !has_channels(atom_b, l, constants) {
        return Ok(0.0);
    }
    let eps0 = constants.eps0();
    let pre = -constants.hbar() / (16.0 * PI.powi(3) * eps0 * eps0 * r.powi(6));
    let c = constants.c();
    let integrand = |u: f64| -> Result<f64> {
        let w = Complex64::new(0.0, u);
        let aa = polarizability(atom_a, k, w, constants)?.re;
        let ab = polarizability(atom_b, l, w, constants)?.re;
        Ok(aa * ab * retardation_f(r * u / c))
    };
    let scale = decay_scale(r, &[(atom_a, k), (atom_b, l)], constants);
    Ok(pre * converged(try_integrate_semi_infinite(integrand, scale, opts)?)?)
}

fn free_space_channels(
    atom_a: &AtomSpec,
    k: usize,
    atom_b: &AtomSpec,
    l: usize,
    r: f64,
    method: ResonantMethod,
    constants: &PhysicalConstants,
) -> Result<Vec<ResonantTerm>> {
    check_distance(r)?;
    let eps0 = constants.eps0();
    let pre = -1.0 / (24.0 * PI * PI * eps0 * eps0 * r.powi(6));
    let mut out = Vec::new();
    for (emitter, atom, state, partner, pstate) in [
        (Emitter::A, atom_a, k, atom_b, l),
        (Emitter::B, atom_b, l, atom_a, k),
    ] {
        for ch in atom
            .channels_from(state, constants)
            .into_iter()
            .filter(|c| c.is_downward())
        {
            let w = -ch.omega;
            let alpha = polarizability(partner, pstate, Complex64::new(w, 0.0), constants)?.re;
            let eta = r * w / constants.c();
            let bracket = match method {
                ResonantMethod::PrincipalValue => oscillation_bracket(eta),
                ResonantMethod::Power => power_bracket(eta),
            };
            let energy = pre * ch.dipole * ch.dipole * alpha * bracket;
            out.push(ResonantTerm {
                emitter,
                channel: ch,
                method,
                eta,
                energy,
            });
        }
    }
    Ok(out)
}

/// Closed-form free-space resonant channels, principal-value form.
pub fn vdw_free_space_resonant_pv(
    atom_a: &AtomSpec,
    k: usize,
    atom_b: &AtomSpec,
    l: usize,
    r: f64,
    constants: &PhysicalConstants,
) -> Result<Vec<ResonantTerm>> {
    free_space_channels(
        atom_a,
        k,
        atom_b,
        l,
        r,
        ResonantMethod::PrincipalValue,
        constants,
    )
}

/// Closed-form free-space resonant channels, power form.
pub fn vdw_free_space_resonant_power(
    atom_a: &AtomSpec,
    k: usize,
    atom_b: &AtomSpec,
    l: usize,
    r: f64,
    constants: &PhysicalConstants,
) -> Result<Vec<ResonantTerm>> {
    check_power_states(k, l)?;
    free_space_channels(atom_a, k, atom_b, l, r, ResonantMethod::Power, constants)
}

/// Both atoms in their prepared states, free space, requested methods.
pub fn two_atom_free_space_breakdown(
    atom_a: &AtomSpec,
    atom_b: &AtomSpec,
    r: f64,
    methods: &[ResonantMethod],
    opts: &QuadOptions,
    constants: &PhysicalConstants,
) -> Result<PotentialBreakdown> {
    let (k, l) = (atom_a.prepared_state(), atom_b.prepared_state());
    let off_resonant = vdw_free_space_off_resonant(atom_a, k, atom_b, l, r, opts, constants)?;
    let mut resonant = Vec::new();
    for &m in methods {
        resonant.extend(match m {
            ResonantMethod::PrincipalValue => {
                vdw_free_space_resonant_pv(atom_a, k, atom_b, l, r, constants)?
            }
            ResonantMethod::Power => {
                vdw_free_space_resonant_power(atom_a, k, atom_b, l, r, constants)?
            }
        });
    }
    Ok(PotentialBreakdown {
        off_resonant,
        resonant,
        n_max_used: None,
    })
}
