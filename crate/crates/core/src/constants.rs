//! Unit systems and physical constants.
//!
//! Every physics routine takes a [`PhysicalConstants`] value explicitly; there is
//! no global unit state. Atomic units (hbar = 4 pi eps0 = 1) are the default
//! working system, SI is offered for boundary conversion.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Inverse fine-structure constant, i.e. c in atomic units (CODATA 2018).
pub const C_ATOMIC: f64 = 137.035_999_084;
/// Hartree energy in joule.
pub const HARTREE_J: f64 = 4.359_744_722_207_1e-18;
/// Electron volt in joule.
pub const EV_J: f64 = 1.602_176_634e-19;
/// Hartree energy in electron volt.
pub const HARTREE_EV: f64 = HARTREE_J / EV_J;
/// Bohr radius in metre.
pub const BOHR_M: f64 = 5.291_772_109_03e-11;
/// Atomic unit of electric dipole moment (e a0) in C m.
pub const AU_DIPOLE_CM: f64 = 8.478_353_625_5e-30;
/// Debye in C m.
pub const DEBYE_CM: f64 = 3.335_640_951_98e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar: f64,
    c: f64,
    eps0: f64,
    mu0: f64,
}

impl PhysicalConstants {
    /// Builds a unit system; mu0 is always derived as 1/(eps0 c^2).
    pub fn new(hbar: f64, c: f64, eps0: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("c", c), ("eps0", eps0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConstants(format!(
                    "{name} must be positive and finite"
                )));
            }
        }
        Ok(Self {
            hbar,
            c,
            eps0,
            mu0: 1.0 / (eps0 * c * c),
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn eps0(&self) -> f64 {
        self.eps0
    }
    pub fn mu0(&self) -> f64 {
        self.mu0
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        atomic_units()
    }
}

/// hbar = 1, 4 pi eps0 = 1, c = 1/alpha.
pub fn atomic_units() -> PhysicalConstants {
    PhysicalConstants::new(1.0, C_ATOMIC, 1.0 / (4.0 * PI)).expect("atomic units are valid")
}

/// CODATA 2018 SI values.
pub fn si_units() -> PhysicalConstants {
    PhysicalConstants::new(1.054_571_817e-34, 2.997_924_58e8, 8.854_187_812_8e-12)
        .expect("SI units are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_values() {
        let k = atomic_units();
        assert_eq!(k.c(), 137.035999084);
        assert!((k.eps0() - 0.0795774715).abs() < 1e-10);
        assert!((k.mu0() * k.eps0() * k.c() * k.c() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn si_values() {
        let k = si_units();
        assert_eq!(k.c(), 2.99792458e8);
        assert_eq!(k.hbar(), 1.054571817e-34);
        assert!((k.mu0() * k.eps0() * k.c() * k.c() - 1.0).abs() < 1e-12);
        // derived mu0 agrees with the CODATA 2018 value
        assert!((k.mu0() / 1.25663706212e-6 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(PhysicalConstants::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, f64::NAN, 1.0).is_err());
    }
}
