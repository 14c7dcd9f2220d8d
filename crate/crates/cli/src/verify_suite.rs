//! Runs the configured consistency checks; a failing check never aborts the
//! others.

use exvdw::atoms::AtomSpec;
use exvdw::constants::{atomic_units, PhysicalConstants};
use exvdw::verify::{
    contour_identity_check, mie_limit_check, reduction_identity_check, sphere_limit_check,
    VerifyReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CheckName, Resolved};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated: Option<String>,
    pub all_passed: bool,
    pub reports: Vec<VerifyReport>,
}

/// Distance at which atom A's reference transition has retardation `eta`.
fn distance_for(atom: &AtomSpec, eta: f64, c: &PhysicalConstants) -> f64 {
    let chans = atom.channels(c);
    let w = chans
        .iter()
        .find(|ch| ch.is_downward())
        .map(|ch| ch.omega.abs())
        .or_else(|| atom.min_frequency(atom.prepared_state(), c))
        .expect("validated atoms have a transition");
    eta * c.c() / w
}

enum Task {
    Contour(usize, usize),
    Reduction,
    Sphere,
    Mie,
}

pub fn run_suite(run: &Resolved) -> Vec<VerifyReport> {
    let c = atomic_units();
    let v = &run.verify;
    let mut tasks = Vec::new();
    for check in &v.checks {
        match check {
            CheckName::ContourIdentity => {
                let (na, nb) = (
                    run.atoms[0].channels(&c).len(),
                    run.atoms[1].channels(&c).len(),
                );
                tasks.extend((0..na).flat_map(|i| (0..nb).map(move |j| Task::Contour(i, j))));
            }
            CheckName::ReductionIdentity => tasks.push(Task::Reduction),
            CheckName::SphereLimit => tasks.push(Task::Sphere),
            CheckName::MieLimit => tasks.push(Task::Mie),
        }
    }
    tasks
        .par_iter()
        .map(|task| match *task {
            Task::Contour(i, j) => {
                let (a, b) = (&run.atoms[0], &run.atoms[1]);
                let r = distance_for(a, v.contour_eta, &c);
                contour_identity_check(&a.channels(&c)[i], &b.channels(&c)[j], r, &c)
            }
            Task::Reduction => {
                let r = distance_for(&run.atoms[0], v.contour_eta, &c);
                reduction_identity_check(&run.atoms[0], &run.atoms[1], r, &run.quad, &c)
            }
            Task::Sphere => {
                let r = distance_for(&run.atoms[0], v.eta, &c);
                sphere_limit_check(&run.atoms[0], &run.atoms[1], r, &v.a_over_r, &run.quad, &c)
            }
            Task::Mie => {
                let (sphere, _) = run.sphere.as_ref().expect("validated");
                mie_limit_check(sphere, &v.z0, &c)
            }
        })
        .collect()
}
