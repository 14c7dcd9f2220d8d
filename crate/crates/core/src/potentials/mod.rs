//! Two-atom van der Waals and atom–sphere Casimir–Polder potentials.
//!
//! Every potential is split into an off-resonant part (an imaginary-frequency
//! integral) and resonant parts, one per downward transition of an excited
//! atom. Resonant parts come in two rival prescriptions, tagged by
//! [`ResonantMethod`]; nothing here picks one silently.

use serde::{Deserialize, Serialize};

use crate::atoms::TransitionChannel;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureResult;

mod sphere;
mod two_atom;

pub use sphere::{
    clausius_mossotti_alpha, cp_off_resonant_sphere, cp_resonant_sphere,
    cp_small_sphere_off_resonant, cp_small_sphere_resonant, cp_sphere_breakdown, PLASMON_GUARD,
};
pub use two_atom::{
    two_atom_free_space_breakdown, vdw_free_space_off_resonant, vdw_free_space_resonant_power,
    vdw_free_space_resonant_pv, vdw_off_resonant_general, vdw_resonant_general, vdw_resonant_power,
    DipoleOrientation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResonantMethod {
    /// Real part of the Green tensor product, from principal-value photon integrals.
    PrincipalValue,
    /// Absolute squares of the Green tensor entries.
    Power,
}

impl ResonantMethod {
    pub fn name(self) -> &'static str {
        match self {
            ResonantMethod::PrincipalValue => "principal_value",
            ResonantMethod::Power => "power",
        }
    }
}

/// Which atom emits in a resonant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Emitter {
    A,
    B,
}

/// Energy of one downward channel under one prescription.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonantTerm {
    pub emitter: Emitter,
    pub channel: TransitionChannel,
    pub method: ResonantMethod,
    /// r·|ω^{km}|/c.
    pub eta: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialBreakdown {
    pub off_resonant: f64,
    pub resonant: Vec<ResonantTerm>,
    /// Largest multipole order used, for sphere potentials.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_max_used: Option<usize>,
}

impl PotentialBreakdown {
    pub fn resonant_sum(&self, method: ResonantMethod) -> f64 {
        self.resonant
            .iter()
            .filter(|t| t.method == method)
            .map(|t| t.energy)
            .sum()
    }

    pub fn total(&self, method: ResonantMethod) -> f64 {
        self.off_resonant + self.resonant_sum(method)
    }
}

/// Retardation function e^{−2x}(3 + 6x + 5x² + 2x³ + x⁴).
pub fn retardation_f(x: f64) -> f64 {
    (-2.0 * x).exp() * (3.0 + x * (6.0 + x * (5.0 + x * (2.0 + x))))
}

/// Oscillating resonant bracket (3 − 5η² + η⁴)cos 2η + (6η − 2η³)sin 2η.
pub fn oscillation_bracket(eta: f64) -> f64 {
    let e2 = eta * eta;
    let (s, c) = (2.0 * eta).sin_cos();
    (3.0 - 5.0 * e2 + e2 * e2) * c + (6.0 * eta - 2.0 * eta * e2) * s
}

/// Non-oscillating counterpart 3 + η² + η⁴.
pub fn power_bracket(eta: f64) -> f64 {
    let e2 = eta * eta;
    3.0 + e2 + e2 * e2
}

pub(crate) fn converged(q: QuadratureResult<f64>) -> Result<f64> {
    if !q.value.is_finite() {
        return Err(Error::NonFiniteIntegrand { at: f64::NAN });
    }
    if q.converged {
        Ok(q.value)
    } else {
        Err(Error::UnconvergedQuadrature {
            partial: q.value,
            error_estimate: q.error_estimate,
        })
    }
}

pub(crate) fn check_distance(r: f64) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFiniteArgument);
    }
    if r <= 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_values() {
        assert_eq!(retardation_f(0.0), 3.0);
        assert_eq!(oscillation_bracket(0.0), 3.0);
        assert_eq!(power_bracket(0.0), 3.0);
        let h = std::f64::consts::FRAC_PI_2;
        let want = -(3.0 - 5.0 * h * h + h.powi(4));
        assert!((oscillation_bracket(h) - want).abs() < 1e-12);
        assert!((want - 3.2490).abs() < 1e-4);
    }

    #[test]
    fn bracket_envelope_bounded_by_power_form() {
        // squared amplitude of the oscillating form is (3 + η² + η⁴)² − 8η⁶
        for i in 1..200 {
            let eta = 0.1 * i as f64;
            assert!(oscillation_bracket(eta).abs() <= power_bracket(eta) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn total_sums_by_method() {
        let ch = TransitionChannel {
            from_state: 1,
            to_state: 0,
            omega: -1.0,
            dipole: 1.0,
        };
        let t = |method, energy| ResonantTerm {
            emitter: Emitter::A,
            channel: ch,
            method,
            eta: 1.0,
            energy,
        };
        let b = PotentialBreakdown {
            off_resonant: 1.0,
            resonant: vec![
                t(ResonantMethod::PrincipalValue, 2.0),
                t(ResonantMethod::Power, 5.0),
            ],
            n_max_used: None,
        };
        assert_eq!(b.total(ResonantMethod::PrincipalValue), 3.0);
        assert_eq!(b.total(ResonantMethod::Power), 6.0);
    }
}
