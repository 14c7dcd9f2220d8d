use exvdw::atoms::{AtomSpec, TransitionChannel};
use exvdw::constants::PhysicalConstants;
use exvdw::greens::{PermittivityModel, SphereSpec};
use exvdw::quadrature::QuadOptions;
use exvdw::verify::{
    contour_identity_check, fit_sphere, mie_limit_check, reduction_identity_check,
    sphere_limit_check, CheckStatus,
};
use exvdw::Error;

fn au() -> PhysicalConstants {
    PhysicalConstants::default()
}

fn channel(omega: f64) -> TransitionChannel {
    TransitionChannel {
        from_state: 0,
        to_state: 1,
        omega,
        dipole: 1.0,
    }
}

#[test]
fn contour_pole_free() {
    let c = au();
    let rep = contour_identity_check(&channel(0.5), &channel(0.8), c.c() / 0.5, &c);
    assert_eq!(rep.status, CheckStatus::Pass, "{rep:?}");
    assert!(rep.deviation <= 1e-6);
}

#[test]
fn contour_single_pole() {
    let c = au();
    let rep = contour_identity_check(&channel(-0.5), &channel(0.8), c.c() / 0.5, &c);
    assert_eq!(rep.status, CheckStatus::Pass, "{rep:?}");
    assert_eq!(rep.values["poles"], 1.0);
}

#[test]
fn contour_two_poles() {
    let c = au();
    let rep = contour_identity_check(&channel(-0.5), &channel(-0.8), 2.0 * c.c(), &c);
    assert_eq!(rep.status, CheckStatus::Pass, "{rep:?}");
    assert_eq!(rep.values["poles"], 2.0);
}

#[test]
fn contour_degenerate_excluded() {
    let c = au();
    let rep = contour_identity_check(&channel(-0.5), &channel(-0.5002), c.c(), &c);
    assert_eq!(rep.status, CheckStatus::Excluded);
    assert!(rep.passed());
}

#[test]
fn reduction_matches_split() {
    let c = au();
    let a = AtomSpec::two_level(0.5, 1.0, 1).unwrap();
    let b = AtomSpec::two_level(0.8, 0.7, 0).unwrap();
    let rep = reduction_identity_check(&a, &b, c.c() / 0.5, &QuadOptions::new(1e-11, 0.0), &c);
    assert_eq!(rep.status, CheckStatus::Pass, "{rep:?}");
    assert!(rep.values["direct_im"].abs() <= 1e-4 * rep.values["direct_re"].abs());
}

#[test]
fn fitted_sphere_reproduces_two_level() {
    let c = au();
    let b = AtomSpec::two_level(1.0, 0.05, 0).unwrap();
    let a0 = exvdw::atoms::polarizability(&b, 0, 0.0.into(), &c)
        .unwrap()
        .re;
    let ar = exvdw::atoms::polarizability(&b, 0, 0.5.into(), &c)
        .unwrap()
        .re;
    let s = fit_sphere(a0, ar, 0.5, 0.3, &c).unwrap();
    for u in [0.1, 1.0, 7.0] {
        let want = exvdw::atoms::polarizability(&b, 0, num_complex::Complex64::new(0.0, u), &c)
            .unwrap()
            .re;
        let got =
            exvdw::potentials::clausius_mossotti_alpha(&s, num_complex::Complex64::new(0.0, u), &c)
                .unwrap()
                .re;
        assert!((got - want).abs() <= 1e-12 * want, "{u}: {got} vs {want}");
    }
    assert!(matches!(
        fit_sphere(a0, ar, 0.5, 0.01, &c),
        Err(Error::InfeasibleSphereFit(_))
    ));
}

#[test]
fn sphere_limit_selects_principal_value() {
    let c = au();
    let a = AtomSpec::two_level(0.5, 1.0, 1).unwrap();
    let b = AtomSpec::two_level(1.0, 0.05, 0).unwrap();
    let r = 10.0 * c.c() / 0.5;
    let rep = sphere_limit_check(
        &a,
        &b,
        r,
        &[1e-2, 1e-3, 1e-4],
        &QuadOptions::new(1e-10, 0.0),
        &c,
    );
    assert_eq!(rep.status, CheckStatus::Pass, "{rep:?}");
    assert!(rep.values["deviation_power[2]"] > 0.1);
    assert!(rep.notes.iter().any(|n| n.contains("principal_value")));
}

#[test]
fn sphere_limit_nonretarded_degenerates() {
    let c = au();
    let a = AtomSpec::two_level(0.5, 1.0, 1).unwrap();
    let b = AtomSpec::two_level(1.0, 1e-4, 0).unwrap();
    let r = 0.01 * c.c() / 0.5;
    let rep = sphere_limit_check(&a, &b, r, &[1e-2, 1e-3], &QuadOptions::new(1e-10, 0.0), &c);
    assert!(
        rep.notes.iter().any(|n| n.contains("both forms")),
        "{rep:?}"
    );
}

#[test]
fn mie_limit_passes_and_vacuum_is_trivial() {
    let c = au();
    let s = SphereSpec::new(1.0, PermittivityModel::constant(3.0).unwrap()).unwrap();
    let rep = mie_limit_check(&s, &[1e-1, 1e-2, 1e-3], &c);
    assert_eq!(rep.status, CheckStatus::Pass, "{rep:?}");
    assert!(rep.values["convergence_order"] > 1.9);
    let v = SphereSpec::new(1.0, PermittivityModel::vacuum()).unwrap();
    assert_eq!(
        mie_limit_check(&v, &[1e-2, 1e-3], &c).status,
        CheckStatus::Pass
    );
}

#[test]
fn mie_limit_reports_plasmon() {
    let c = au();
    // lossless Drude-like Lorentz with ε(ω) = −2 at ω = 1
    let s = SphereSpec::new(
        1.0,
        PermittivityModel::single_lorentz(2.25, 0.5, 0.0).unwrap(),
    )
    .unwrap();
    let z0 = 1.0 / c.c();
    let rep = mie_limit_check(&s, &[z0], &c);
    assert_eq!(rep.status, CheckStatus::Excluded, "{rep:?}");
    assert!(rep.notes[0].contains("plasmon"));
}

#[test]
fn report_serializes() {
    let c = au();
    let s = SphereSpec::new(1.0, PermittivityModel::constant(3.0).unwrap()).unwrap();
    let rep = mie_limit_check(&s, &[1e-2, 1e-3], &c);
    let json = serde_json::to_string(&rep).unwrap();
    let back: exvdw::verify::VerifyReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back.status, rep.status);
    assert!(json.contains("\"status\":\"pass\""));
}
