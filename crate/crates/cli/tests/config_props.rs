use std::path::PathBuf;

use exvdw::potentials::ResonantMethod;
use exvdw_cli::config::{
    AtomConfig, CheckName, Config, DipoleUnit, EnergyUnit, Format, LengthUnit, Mode,
    OscillatorConfig, OutputConfig, QuadratureConfig, Spacing, SphereConfig, SweepConfig,
    UnitSystem, VerifyConfig,
};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        (1e-300f64..1e300),
        Just(0.1),
        Just(1.0 / 3.0),
    ]
}

fn atom() -> impl Strategy<Value = AtomConfig> {
    (
        prop::collection::vec(finite(), 2..4),
        prop::option::of(prop_oneof![
            Just(EnergyUnit::Hartree),
            Just(EnergyUnit::ElectronVolt),
            Just(EnergyUnit::Joule)
        ]),
        prop::collection::vec(prop::collection::vec(finite(), 2..4), 2..4),
        prop::option::of(prop_oneof![
            Just(DipoleUnit::Atomic),
            Just(DipoleUnit::Debye),
            Just(DipoleUnit::CoulombMetre)
        ]),
        0usize..4,
    )
        .prop_map(
            |(energies, energy_unit, dipoles, dipole_unit, prepared_state)| AtomConfig {
                energies,
                energy_unit,
                dipoles,
                dipole_unit,
                prepared_state,
            },
        )
}

fn length_unit() -> impl Strategy<Value = Option<LengthUnit>> {
    prop::option::of(prop_oneof![
        Just(LengthUnit::Bohr),
        Just(LengthUnit::Nanometre),
        Just(LengthUnit::Metre)
    ])
}

fn sphere() -> impl Strategy<Value = SphereConfig> {
    (
        finite(),
        length_unit(),
        finite(),
        prop::collection::vec((finite(), finite(), finite()), 0..3),
        prop::option::of(Just(EnergyUnit::ElectronVolt)),
        prop::option::of(1usize..300),
    )
        .prop_map(
            |(radius, length_unit, background, osc, frequency_unit, n_max)| SphereConfig {
                radius,
                length_unit,
                background,
                oscillators: osc
                    .into_iter()
                    .map(|(p, w, g)| OscillatorConfig {
                        plasma_frequency: p,
                        resonance: w,
                        damping: g,
                    })
                    .collect(),
                frequency_unit,
                n_max,
            },
        )
}

fn sweep() -> impl Strategy<Value = SweepConfig> {
    (
        finite(),
        finite(),
        2usize..1000,
        prop_oneof![Just(Spacing::Linear), Just(Spacing::Log)],
        length_unit(),
    )
        .prop_map(|(r_min, r_max, points, spacing, length_unit)| SweepConfig {
            r_min,
            r_max,
            points,
            spacing,
            length_unit,
        })
}

fn verify() -> impl Strategy<Value = VerifyConfig> {
    (
        prop::collection::vec(prop::sample::select(CheckName::ALL.to_vec()), 0..5),
        finite(),
        finite(),
        prop::collection::vec(finite(), 0..4),
        prop::collection::vec(finite(), 0..4),
    )
        .prop_map(|(checks, eta, contour_eta, a_over_r, z0)| VerifyConfig {
            checks,
            eta,
            contour_eta,
            a_over_r,
            z0,
        })
}

fn config() -> impl Strategy<Value = Config> {
    (
        prop_oneof![
            Just(Mode::TwoAtom),
            Just(Mode::CpSphere),
            Just(Mode::Verify)
        ],
        prop_oneof![Just(UnitSystem::Atomic), Just(UnitSystem::Si)],
        prop::collection::vec(atom(), 0..3),
        prop::option::of(sphere()),
        prop::option::of(sweep()),
        prop::collection::vec(
            prop_oneof![
                Just(ResonantMethod::PrincipalValue),
                Just(ResonantMethod::Power)
            ],
            0..3,
        ),
        any::<bool>(),
        prop::option::of(verify()),
        (finite(), 1usize..1_000_000),
        (
            "[a-z0-9_/.]{1,20}",
            prop_oneof![Just(Format::Csv), Just(Format::Json)],
        ),
    )
        .prop_map(
            |(mode, unit_system, atoms, sphere, sweep, methods, small_sphere, verify, q, o)| {
                Config {
                    schema_version: 1,
                    mode,
                    unit_system,
                    atoms,
                    sphere,
                    sweep,
                    methods,
                    small_sphere,
                    verify,
                    quadrature: QuadratureConfig {
                        rel_tol: q.0,
                        max_evaluations: q.1,
                    },
                    output: OutputConfig {
                        path: PathBuf::from(o.0),
                        format: o.1,
                    },
                }
            },
        )
}

proptest! {
    #[test]
    fn emit_then_parse_is_identity(cfg in config()) {
        let text = cfg.to_json();
        let back = Config::from_json(&text).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
