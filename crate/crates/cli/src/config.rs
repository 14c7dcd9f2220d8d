//! JSON run configuration, validation and unit conversion at the boundary.
//!
//! Everything downstream of [`Config::resolve`] works in atomic units.

use std::path::{Path, PathBuf};

use exvdw::atoms::AtomSpec;
use exvdw::constants::{AU_DIPOLE_CM, BOHR_M, DEBYE_CM, HARTREE_EV, HARTREE_J};
use exvdw::greens::{NMaxPolicy, Oscillator, PermittivityModel, SphereSpec};
use exvdw::potentials::ResonantMethod;
use exvdw::quadrature::QuadOptions;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    TwoAtom,
    CpSphere,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    #[default]
    Atomic,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyUnit {
    #[serde(rename = "hartree")]
    Hartree,
    #[serde(rename = "eV")]
    ElectronVolt,
    #[serde(rename = "J")]
    Joule,
}

impl EnergyUnit {
    fn to_hartree(self) -> f64 {
        match self {
            EnergyUnit::Hartree => 1.0,
            EnergyUnit::ElectronVolt => 1.0 / HARTREE_EV,
            EnergyUnit::Joule => 1.0 / HARTREE_J,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DipoleUnit {
    /// e·a₀
    #[serde(rename = "au")]
    Atomic,
    #[serde(rename = "debye")]
    Debye,
    #[serde(rename = "C_m")]
    CoulombMetre,
}

impl DipoleUnit {
    fn to_atomic(self) -> f64 {
        match self {
            DipoleUnit::Atomic => 1.0,
            DipoleUnit::Debye => DEBYE_CM / AU_DIPOLE_CM,
            DipoleUnit::CoulombMetre => 1.0 / AU_DIPOLE_CM,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LengthUnit {
    #[serde(rename = "bohr")]
    Bohr,
    #[serde(rename = "nm")]
    Nanometre,
    #[serde(rename = "m")]
    Metre,
}

impl LengthUnit {
    fn to_bohr(self) -> f64 {
        match self {
            LengthUnit::Bohr => 1.0,
            LengthUnit::Nanometre => 1e-9 / BOHR_M,
            LengthUnit::Metre => 1.0 / BOHR_M,
        }
    }
}

impl UnitSystem {
    fn energy(self) -> EnergyUnit {
        match self {
            UnitSystem::Atomic => EnergyUnit::Hartree,
            UnitSystem::Si => EnergyUnit::Joule,
        }
    }
    fn dipole(self) -> DipoleUnit {
        match self {
            UnitSystem::Atomic => DipoleUnit::Atomic,
            UnitSystem::Si => DipoleUnit::CoulombMetre,
        }
    }
    fn length(self) -> LengthUnit {
        match self {
            UnitSystem::Atomic => LengthUnit::Bohr,
            UnitSystem::Si => LengthUnit::Metre,
        }
    }
    /// Factor taking atomic-unit energies to output energies.
    pub fn energy_out(self) -> f64 {
        1.0 / self.energy().to_hartree()
    }
    /// Factor taking bohr to output lengths.
    pub fn length_out(self) -> f64 {
        1.0 / self.length().to_bohr()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub energies: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_unit: Option<EnergyUnit>,
    pub dipoles: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole_unit: Option<DipoleUnit>,
    pub prepared_state: usize,
}

/// Lorentz oscillator; frequencies are given as photon energies ħω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorConfig {
    pub plasma_frequency: f64,
    pub resonance: f64,
    #[serde(default)]
    pub damping: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereConfig {
    pub radius: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_unit: Option<LengthUnit>,
    #[serde(default = "one")]
    pub background: f64,
    #[serde(default)]
    pub oscillators: Vec<OscillatorConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency_unit: Option<EnergyUnit>,
    /// Fixed multipole cutoff; adaptive when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    #[default]
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_unit: Option<LengthUnit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    ContourIdentity,
    ReductionIdentity,
    SphereLimit,
    MieLimit,
}

impl CheckName {
    pub const ALL: [CheckName; 4] = [
        CheckName::ContourIdentity,
        CheckName::ReductionIdentity,
        CheckName::SphereLimit,
        CheckName::MieLimit,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "all_checks")]
    pub checks: Vec<CheckName>,
    /// Retardation parameter r·ω/c of A's first downward channel (or of its
    /// lowest transition) fixing the test distance.
    #[serde(default = "default_eta")]
    pub eta: f64,
    /// Retardation parameter for the contour and reduction checks.
    #[serde(default = "default_contour_eta")]
    pub contour_eta: f64,
    #[serde(default = "default_a_over_r")]
    pub a_over_r: Vec<f64>,
    #[serde(default = "default_z0")]
    pub z0: Vec<f64>,
}

fn all_checks() -> Vec<CheckName> {
    CheckName::ALL.to_vec()
}
fn default_eta() -> f64 {
    10.0
}
fn default_contour_eta() -> f64 {
    1.0
}
fn default_a_over_r() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4]
}
fn default_z0() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3]
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            checks: all_checks(),
            eta: default_eta(),
            contour_eta: default_contour_eta(),
            a_over_r: default_a_over_r(),
            z0: default_z0(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_max_evaluations")]
    pub max_evaluations: usize,
}

fn default_rel_tol() -> f64 {
    1e-10
}
fn default_max_evaluations() -> usize {
    QuadOptions::default().max_evaluations
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: default_rel_tol(),
            max_evaluations: default_max_evaluations(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    pub mode: Mode,
    #[serde(default)]
    pub unit_system: UnitSystem,
    #[serde(default)]
    pub atoms: Vec<AtomConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere: Option<SphereConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default = "default_methods")]
    pub methods: Vec<ResonantMethod>,
    /// cp_sphere: add small-sphere limit columns.
    #[serde(default)]
    pub small_sphere: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyConfig>,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    pub output: OutputConfig,
}

fn default_methods() -> Vec<ResonantMethod> {
    vec![ResonantMethod::PrincipalValue, ResonantMethod::Power]
}

/// Validated run description in atomic units.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub mode: Mode,
    pub units: UnitSystem,
    pub atoms: Vec<AtomSpec>,
    pub sphere: Option<(SphereSpec, NMaxPolicy)>,
    /// Distances in bohr.
    pub grid: Vec<f64>,
    pub methods: Vec<ResonantMethod>,
    pub small_sphere: bool,
    pub verify: VerifyConfig,
    pub quad: QuadOptions,
    pub output: OutputConfig,
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Config =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    cfg.schema_version
                ),
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let units = self.unit_system;
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| resolve_atom(a, units).map_err(|e| invalid(&format!("atoms[{i}]"), e)))
            .collect::<Result<Vec<_>, _>>()?;
        let sphere = self
            .sphere
            .as_ref()
            .map(|s| resolve_sphere(s, units))
            .transpose()?;
        let needs_sweep = self.mode != Mode::Verify;
        let grid = match (&self.sweep, needs_sweep) {
            (Some(s), _) => resolve_grid(s, units)?,
            (None, true) => return Err(invalid("sweep", "required for this mode")),
            (None, false) => Vec::new(),
        };
        let quad = &self.quadrature;
        if !(quad.rel_tol > 0.0 && quad.rel_tol < 1.0) {
            return Err(invalid("quadrature.rel_tol", "must lie in (0, 1)"));
        }
        if quad.max_evaluations == 0 {
            return Err(invalid("quadrature.max_evaluations", "must be positive"));
        }
        match self.mode {
            Mode::TwoAtom => {
                if atoms.len() != 2 {
                    return Err(invalid("atoms", "two_atom mode needs exactly two atoms"));
                }
                if self.methods.is_empty() {
                    return Err(invalid(
                        "methods",
                        "at least one resonant method is required",
                    ));
                }
                if self.methods.contains(&ResonantMethod::Power)
                    && atoms[0].prepared_state() != 0
                    && atoms[1].prepared_state() != 0
                {
                    return Err(invalid(
                        "methods",
                        "the power form needs one atom in its ground state",
                    ));
                }
            }
            Mode::CpSphere => {
                if atoms.len() != 1 {
                    return Err(invalid("atoms", "cp_sphere mode needs exactly one atom"));
                }
                let Some((s, _)) = &sphere else {
                    return Err(invalid("sphere", "required for cp_sphere mode"));
                };
                if self.methods.contains(&ResonantMethod::Power) {
                    return Err(invalid(
                        "methods",
                        "the power form has no sphere counterpart; use [\"principal_value\"]",
                    ));
                }
                if grid[0] <= s.radius() {
                    return Err(invalid("sweep.r_min", "must exceed the sphere radius"));
                }
            }
            Mode::Verify => {
                let v = self.verify.clone().unwrap_or_default();
                for (name, x) in [("verify.eta", v.eta), ("verify.contour_eta", v.contour_eta)] {
                    if !(x > 0.0 && x.is_finite()) {
                        return Err(invalid(name, "must be positive"));
                    }
                }
                if atoms.len() != 2 && v.checks.iter().any(|c| *c != CheckName::MieLimit) {
                    return Err(invalid("atoms", "two-atom checks need exactly two atoms"));
                }
                if v.checks.contains(&CheckName::MieLimit) && sphere.is_none() {
                    return Err(invalid("sphere", "required by the mie_limit check"));
                }
            }
        }
        Ok(Resolved {
            mode: self.mode,
            units,
            atoms,
            sphere,
            grid,
            methods: self.methods.clone(),
            small_sphere: self.small_sphere,
            verify: self.verify.clone().unwrap_or_default(),
            quad: QuadOptions::new(quad.rel_tol, 0.0).with_max_evaluations(quad.max_evaluations),
            output: self.output.clone(),
        })
    }
}

fn resolve_atom(a: &AtomConfig, units: UnitSystem) -> Result<AtomSpec, exvdw::Error> {
    let e = a.energy_unit.unwrap_or(units.energy()).to_hartree();
    let d = a.dipole_unit.unwrap_or(units.dipole()).to_atomic();
    let energies = a.energies.iter().map(|x| x * e).collect();
    let dipoles = a
        .dipoles
        .iter()
        .map(|row| row.iter().map(|x| x * d).collect())
        .collect();
    AtomSpec::new(energies, dipoles, a.prepared_state)
}

fn resolve_sphere(
    s: &SphereConfig,
    units: UnitSystem,
) -> Result<(SphereSpec, NMaxPolicy), CliError> {
    let l = s.length_unit.unwrap_or(units.length()).to_bohr();
    let f = s.frequency_unit.unwrap_or(units.energy()).to_hartree();
    let oscillators = s
        .oscillators
        .iter()
        .map(|o| Oscillator {
            plasma_weight: (o.plasma_frequency * f).powi(2),
            resonance: o.resonance * f,
            damping: o.damping * f,
        })
        .collect();
    let material =
        PermittivityModel::new(s.background, oscillators).map_err(|e| invalid("sphere", e))?;
    let spec = SphereSpec::new(s.radius * l, material).map_err(|e| invalid("sphere.radius", e))?;
    let policy = match s.n_max {
        Some(0) => return Err(invalid("sphere.n_max", "must be positive")),
        Some(n) => NMaxPolicy::Fixed(n),
        None => NMaxPolicy::Adaptive,
    };
    Ok((spec, policy))
}

fn resolve_grid(s: &SweepConfig, units: UnitSystem) -> Result<Vec<f64>, CliError> {
    if !(s.r_min > 0.0 && s.r_min.is_finite()) {
        return Err(invalid("sweep.r_min", "must be positive"));
    }
    if !(s.r_max > s.r_min && s.r_max.is_finite()) {
        return Err(invalid("sweep.r_max", "must exceed r_min"));
    }
    if s.points < 2 {
        return Err(invalid("sweep.points", "must be at least 2"));
    }
    let l = s.length_unit.unwrap_or(units.length()).to_bohr();
    let n = s.points - 1;
    let grid = (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            let r = match s.spacing {
                Spacing::Linear => s.r_min + t * (s.r_max - s.r_min),
                Spacing::Log => s.r_min * (s.r_max / s.r_min).powf(t),
            };
            r * l
        })
        .collect();
    Ok(grid)
}
