//! Distance sweeps evaluated in parallel; rows come back ordered by r.

use exvdw::atoms::TransitionChannel;
use exvdw::constants::atomic_units;
use exvdw::potentials::{
    cp_small_sphere_off_resonant, cp_small_sphere_resonant, cp_sphere_breakdown,
    two_atom_free_space_breakdown, Emitter, PotentialBreakdown,
};
use exvdw::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Resolved;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    Unconverged,
    Failed,
}

/// Small-sphere limit values at one distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallSphere {
    pub off_resonant: f64,
    pub resonant: f64,
}

/// One sweep point, in atomic units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub r: f64,
    pub breakdown: Option<PotentialBreakdown>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub small_sphere: Option<SmallSphere>,
    pub status: PointStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Row {
    fn from_result(r: f64, res: Result<(PotentialBreakdown, Option<SmallSphere>), Error>) -> Self {
        match res {
            Ok((b, s)) => Row {
                r,
                breakdown: Some(b),
                small_sphere: s,
                status: PointStatus::Ok,
                message: None,
            },
            Err(e) => {
                let status = match e {
                    Error::UnconvergedQuadrature { .. } | Error::ExtrapolationDiverged => {
                        PointStatus::Unconverged
                    }
                    _ => PointStatus::Failed,
                };
                Row {
                    r,
                    breakdown: None,
                    small_sphere: None,
                    status,
                    message: Some(e.to_string()),
                }
            }
        }
    }
}

/// Downward channels of the configured atoms, in output column order.
pub fn downward_channels(run: &Resolved) -> Vec<(Emitter, TransitionChannel)> {
    let c = atomic_units();
    let emitters = [Emitter::A, Emitter::B];
    run.atoms
        .iter()
        .zip(emitters)
        .flat_map(|(atom, e)| {
            atom.channels(&c)
                .into_iter()
                .filter(|ch| ch.is_downward())
                .map(move |ch| (e, ch))
        })
        .collect()
}

fn two_atom_point(
    run: &Resolved,
    r: f64,
) -> Result<(PotentialBreakdown, Option<SmallSphere>), Error> {
    let c = atomic_units();
    let b = two_atom_free_space_breakdown(
        &run.atoms[0],
        &run.atoms[1],
        r,
        &run.methods,
        &run.quad,
        &c,
    )?;
    Ok((b, None))
}

fn cp_sphere_point(
    run: &Resolved,
    r: f64,
) -> Result<(PotentialBreakdown, Option<SmallSphere>), Error> {
    let c = atomic_units();
    let atom = &run.atoms[0];
    let (sphere, policy) = run.sphere.as_ref().expect("validated");
    let b = cp_sphere_breakdown(atom, r, sphere, *policy, &run.quad, &c)?;
    let small = if run.small_sphere {
        let k = atom.prepared_state();
        let off_resonant = cp_small_sphere_off_resonant(atom, k, r, sphere, &run.quad, &c)?;
        let resonant = cp_small_sphere_resonant(atom, k, r, sphere, &c)?
            .iter()
            .map(|t| t.energy)
            .sum();
        Some(SmallSphere {
            off_resonant,
            resonant,
        })
    } else {
        None
    };
    Ok((b, small))
}

pub fn run_sweep(run: &Resolved) -> Vec<Row> {
    let point = match run.mode {
        crate::config::Mode::TwoAtom => two_atom_point,
        crate::config::Mode::CpSphere => cp_sphere_point,
        crate::config::Mode::Verify => unreachable!("verify mode has no sweep"),
    };
    run.grid
        .par_iter()
        .map(|&r| Row::from_result(r, point(run, r)))
        .collect()
}
