//! Atomic level data, transition channels and the state-resolved
//! isotropic polarizability.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Relative distance to a transition frequency below which a real-frequency
/// polarizability evaluation is refused.
pub const DETUNE_GUARD: f64 = 1e-6;

/// A multilevel atom: level energies, transition dipole magnitudes and the
/// level it is prepared in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAtomSpec", into = "RawAtomSpec")]
pub struct AtomSpec {
    energies: Vec<f64>,
    dipoles: Vec<Vec<f64>>,
    prepared_state: usize,
}

#[derive(Serialize, Deserialize)]
struct RawAtomSpec {
    energies: Vec<f64>,
    dipole_magnitudes: Vec<Vec<f64>>,
    prepared_state: usize,
}

impl TryFrom<RawAtomSpec> for AtomSpec {
    type Error = Error;
    fn try_from(raw: RawAtomSpec) -> Result<Self> {
        AtomSpec::new(raw.energies, raw.dipole_magnitudes, raw.prepared_state)
    }
}

impl From<AtomSpec> for RawAtomSpec {
    fn from(a: AtomSpec) -> Self {
        RawAtomSpec {
            energies: a.energies,
            dipole_magnitudes: a.dipoles,
            prepared_state: a.prepared_state,
        }
    }
}

/// One k→m transition seen from the prepared level k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionChannel {
    pub from_state: usize,
    pub to_state: usize,
    /// Signed frequency (E_m − E_k)/ħ; negative for downward channels.
    pub omega: f64,
    pub dipole: f64,
}

impl TransitionChannel {
    pub fn is_downward(&self) -> bool {
        self.omega < 0.0
    }
}

impl AtomSpec {
    /// Validates level ordering, dipole symmetry and the prepared state.
    pub fn new(energies: Vec<f64>, dipoles: Vec<Vec<f64>>, prepared_state: usize) -> Result<Self> {
        let n = energies.len();
        if n < 2 {
            return Err(Error::InvalidAtom(
                "at least two levels are required".into(),
            ));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidAtom("non-finite level energy".into()));
        }
        if energies.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidAtom(
                "energies must be strictly increasing".into(),
            ));
        }
        if dipoles.len() != n || dipoles.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidAtom(format!("dipole matrix must be {n}x{n}")));
        }
        for k in 0..n {
            if dipoles[k][k] != 0.0 {
                return Err(Error::InvalidAtom(format!(
                    "nonzero diagonal dipole at level {k}"
                )));
            }
            for m in 0..n {
                let d = dipoles[k][m];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidAtom(format!(
                        "dipole [{k}][{m}] must be finite and >= 0"
                    )));
                }
                if d != dipoles[m][k] {
                    return Err(Error::InvalidAtom(format!(
                        "dipole matrix not symmetric at [{k}][{m}]"
                    )));
                }
            }
        }
        if prepared_state >= n {
            return Err(Error::InvalidAtom(format!(
                "prepared state {prepared_state} out of range for {n} levels"
            )));
        }
        Ok(Self {
            energies,
            dipoles,
            prepared_state,
        })
    }

    /// Two-level atom with transition energy `energy` and dipole `dipole`.
    pub fn two_level(energy: f64, dipole: f64, prepared_state: usize) -> Result<Self> {
        Self::new(
            vec![0.0, energy],
            vec![vec![0.0, dipole], vec![dipole, 0.0]],
            prepared_state,
        )
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dipole_magnitudes(&self) -> &[Vec<f64>] {
        &self.dipoles
    }

    pub fn prepared_state(&self) -> usize {
        self.prepared_state
    }

    pub fn num_levels(&self) -> usize {
        self.energies.len()
    }

    /// Same atom prepared in another level.
    pub fn with_state(&self, k: usize) -> Result<Self> {
        Self::new(self.energies.clone(), self.dipoles.clone(), k)
    }

    /// Channels out of the prepared state.
    pub fn channels(&self, constants: &PhysicalConstants) -> Vec<TransitionChannel> {
        self.channels_from(self.prepared_state, constants)
    }

    /// Channels out of level `k`; zero-dipole transitions are dropped.
    pub fn channels_from(&self, k: usize, constants: &PhysicalConstants) -> Vec<TransitionChannel> {
        if k >= self.num_levels() {
            return Vec::new();
        }
        (0..self.num_levels())
            .filter(|&m| m != k && self.dipoles[k][m] > 0.0)
            .map(|m| TransitionChannel {
                from_state: k,
                to_state: m,
                omega: (self.energies[m] - self.energies[k]) / constants.hbar(),
                dipole: self.dipoles[k][m],
            })
            .collect()
    }

    /// Smallest nonzero |ω^{mk}| over all channels of level k.
    pub fn min_frequency(&self, k: usize, constants: &PhysicalConstants) -> Option<f64> {
        self.channels_from(k, constants)
            .iter()
            .map(|c| c.omega.abs())
            .reduce(f64::min)
    }
}

/// Isotropic polarizability of level `k` at complex frequency `omega`.
///
/// Real-axis evaluations within `DETUNE_GUARD` of a transition are refused.
pub fn polarizability(
    atom: &AtomSpec,
    k: usize,
    omega: Complex64,
    constants: &PhysicalConstants,
) -> Result<Complex64> {
    if !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::NonFiniteArgument);
    }
    if k >= atom.num_levels() {
        return Err(Error::InvalidAtom(format!("level {k} out of range")));
    }
    let w2 = omega * omega;
    let mut sum = Complex64::new(0.0, 0.0);
    for ch in atom.channels_from(k, constants) {
        let pole = ch.omega.abs();
        if omega.im == 0.0 {
            let detune = (omega.re.abs() - pole).abs();
            if detune <= DETUNE_GUARD * pole {
                return Err(Error::NearResonance { pole, detune });
            }
        }
        sum += ch.omega * ch.dipole * ch.dipole / (ch.omega * ch.omega - w2);
    }
    Ok(sum * 2.0 / (3.0 * constants.hbar()))
}

/// Polarizability of the prepared state.
pub fn prepared_polarizability(
    atom: &AtomSpec,
    omega: Complex64,
    constants: &PhysicalConstants,
) -> Result<Complex64> {
    polarizability(atom, atom.prepared_state(), omega, constants)
}
