//! CSV and JSON emission. Numbers use the shortest representation that
//! parses back to the identical value.

use std::path::Path;

use exvdw::constants::{si_units, HARTREE_J};
use exvdw::potentials::{Emitter, PotentialBreakdown, ResonantMethod};
use serde::Serialize;

use crate::config::{Format, Mode, Resolved, UnitSystem};
use crate::error::CliError;
use crate::sweep::{downward_channels, PointStatus, Row};

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn status_name(s: PointStatus) -> &'static str {
    match s {
        PointStatus::Ok => "ok",
        PointStatus::Unconverged => "unconverged",
        PointStatus::Failed => "failed",
    }
}

fn frequency_out(units: UnitSystem) -> f64 {
    match units {
        UnitSystem::Atomic => 1.0,
        UnitSystem::Si => HARTREE_J / si_units().hbar(),
    }
}

fn emitter_name(e: Emitter) -> &'static str {
    match e {
        Emitter::A => "A",
        Emitter::B => "B",
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn two_atom_csv(
    run: &Resolved,
    rows: &[Row],
    w: &mut csv::Writer<Vec<u8>>,
) -> Result<(), CliError> {
    let (ef, lf) = (run.units.energy_out(), run.units.length_out());
    let channels = downward_channels(run);
    let methods: Vec<(ResonantMethod, &str)> = [
        (ResonantMethod::PrincipalValue, "pv"),
        (ResonantMethod::Power, "power"),
    ]
    .into_iter()
    .filter(|(m, _)| run.methods.contains(m))
    .collect();
    let mut header = vec!["r".to_string()];
    header.extend(
        channels
            .iter()
            .map(|(e, ch)| format!("eta_{}_{}_{}", emitter_name(*e), ch.from_state, ch.to_state)),
    );
    header.push("U_offres".into());
    header.extend(methods.iter().map(|(_, s)| format!("U_res_{s}")));
    header.extend(methods.iter().map(|(_, s)| format!("U_total_{s}")));
    header.push("status".into());
    w.write_record(&header).map_err(csv_error)?;
    for row in rows {
        let mut rec = vec![num(row.r * lf)];
        rec.extend(
            channels
                .iter()
                .map(|(_, ch)| num(row.r * ch.omega.abs() / exvdw::constants::C_ATOMIC)),
        );
        match &row.breakdown {
            Some(b) => {
                rec.push(num(b.off_resonant * ef));
                rec.extend(methods.iter().map(|(m, _)| num(b.resonant_sum(*m) * ef)));
                rec.extend(methods.iter().map(|(m, _)| num(b.total(*m) * ef)));
            }
            None => rec.extend(std::iter::repeat_n(num(f64::NAN), 1 + 2 * methods.len())),
        }
        rec.push(status_name(row.status).into());
        w.write_record(&rec).map_err(csv_error)?;
    }
    Ok(())
}

fn cp_sphere_csv(
    run: &Resolved,
    rows: &[Row],
    w: &mut csv::Writer<Vec<u8>>,
) -> Result<(), CliError> {
    let (ef, lf) = (run.units.energy_out(), run.units.length_out());
    let mut header = vec!["r", "U_offres", "U_res", "U_total", "n_max_used"];
    if run.small_sphere {
        header.extend(["U_offres_small", "U_res_small", "U_total_small"]);
    }
    header.push("status");
    w.write_record(&header).map_err(csv_error)?;
    let pv = ResonantMethod::PrincipalValue;
    for row in rows {
        let mut rec = vec![num(row.r * lf)];
        match &row.breakdown {
            Some(b) => {
                rec.push(num(b.off_resonant * ef));
                rec.push(num(b.resonant_sum(pv) * ef));
                rec.push(num(b.total(pv) * ef));
                rec.push(b.n_max_used.unwrap_or(0).to_string());
            }
            None => {
                rec.extend(std::iter::repeat_n(num(f64::NAN), 3));
                rec.push("0".into());
            }
        }
        if run.small_sphere {
            match row.small_sphere {
                Some(s) => {
                    rec.push(num(s.off_resonant * ef));
                    rec.push(num(s.resonant * ef));
                    rec.push(num((s.off_resonant + s.resonant) * ef));
                }
                None => rec.extend(std::iter::repeat_n(num(f64::NAN), 3)),
            }
        }
        rec.push(status_name(row.status).into());
        w.write_record(&rec).map_err(csv_error)?;
    }
    Ok(())
}

fn convert_breakdown(b: &PotentialBreakdown, ef: f64, wf: f64) -> PotentialBreakdown {
    let mut out = b.clone();
    out.off_resonant *= ef;
    for t in &mut out.resonant {
        t.energy *= ef;
        t.channel.omega *= wf;
    }
    out
}

#[derive(Serialize)]
struct JsonOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    generated: Option<String>,
    mode: Mode,
    unit_system: UnitSystem,
    rows: Vec<Row>,
}

/// Renders sweep rows in the configured format.
pub fn render_sweep(
    run: &Resolved,
    rows: &[Row],
    timestamp: Option<&str>,
) -> Result<Vec<u8>, CliError> {
    match run.output.format {
        Format::Csv => {
            let mut head = Vec::new();
            if let Some(ts) = timestamp {
                head.extend_from_slice(format!("# generated {ts}\n").as_bytes());
            }
            let mut w = csv::Writer::from_writer(head);
            match run.mode {
                Mode::TwoAtom => two_atom_csv(run, rows, &mut w)?,
                Mode::CpSphere => cp_sphere_csv(run, rows, &mut w)?,
                Mode::Verify => unreachable!("verify mode has no sweep"),
            }
            w.into_inner().map_err(|e| CliError::Io(e.to_string()))
        }
        Format::Json => {
            let (ef, lf, wf) = (
                run.units.energy_out(),
                run.units.length_out(),
                frequency_out(run.units),
            );
            let rows = rows
                .iter()
                .map(|row| Row {
                    r: row.r * lf,
                    breakdown: row.breakdown.as_ref().map(|b| convert_breakdown(b, ef, wf)),
                    small_sphere: row.small_sphere.map(|mut s| {
                        s.off_resonant *= ef;
                        s.resonant *= ef;
                        s
                    }),
                    ..row.clone()
                })
                .collect();
            let out = JsonOutput {
                generated: timestamp.map(str::to_string),
                mode: run.mode,
                unit_system: run.units,
                rows,
            };
            let mut s =
                serde_json::to_string_pretty(&out).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
