use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{alpha_for_reflectivity, GateContext, GateSpec, Sign};

use super::output::{num, rows_csv, Artifact, ExperimentOutput};
use super::report::ComparisonReport;
use super::single::{divider_infidelity, run_divider};
use super::{coupling_lengths, gate_block, process_fidelity, ExperimentConfig};

/// Infidelity below which a device counts as adiabatic for the crossover.
pub const CROSSOVER_INFIDELITY: f64 = 1e-3;

const GATES: [(&str, f64); 3] = [("x_gate", 0.0), ("hadamard", 0.5), ("third_splitter", 1.0 / 3.0)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub device: String,
    pub z_max: f64,
    pub coupling_lengths: f64,
    pub infidelity: f64,
    pub max_bus_pop: f64,
}

/// One-photon process infidelity of a USB gate on its qubit pair, and the
/// peak bus population.
pub fn gate_process_infidelity(gate: &GateSpec, ctx: &GateContext) -> Result<(f64, f64)> {
    let (block, bus) = gate_block(gate, ctx)?;
    Ok((1.0 - process_fidelity(&block, &gate.matrix()), bus))
}

fn rows_for_length(cfg: &ExperimentConfig, z_max: f64) -> Result<Vec<SweepRow>> {
    let lengths = coupling_lengths(z_max, cfg.omega_max);
    let (_, trace) = run_divider(cfg, z_max)?;
    let mut rows = vec![SweepRow {
        device: "divider".into(),
        z_max,
        coupling_lengths: lengths,
        infidelity: divider_infidelity(&trace)?,
        max_bus_pop: trace.max_bus_population(),
    }];
    let ctx = cfg.gate_context()?;
    for (device, r) in GATES {
        let gate = GateSpec::new(alpha_for_reflectivity(r)?, Sign::Positive, [1, 2], 3, z_max)?;
        let (infidelity, bus) = gate_process_infidelity(&gate, &ctx)?;
        rows.push(SweepRow { device: device.into(), z_max, coupling_lengths: lengths, infidelity, max_bus_pop: bus });
    }
    Ok(rows)
}

/// First length from which every longer device in the ladder stays below
/// [`CROSSOVER_INFIDELITY`], in coupling lengths; NaN when there is none.
fn crossover(series: &[&SweepRow]) -> f64 {
    let mut found = f64::NAN;
    for r in series.iter().rev() {
        if r.infidelity >= CROSSOVER_INFIDELITY {
            break;
        }
        found = r.coupling_lengths;
    }
    found
}

fn monotone_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    if cfg.lengths.len() < 2 {
        return Err(Error::Config(format!("a sweep needs at least two lengths, got {}", cfg.lengths.len())));
    }
    let per_length: Vec<Vec<SweepRow>> =
        cfg.lengths.par_iter().map(|&z| rows_for_length(cfg, z)).collect::<Result<_>>()?;
    let rows: Vec<SweepRow> = per_length.into_iter().flatten().collect();

    let mut report = ComparisonReport::new("sweep");
    for device in std::iter::once("divider").chain(GATES.iter().map(|g| g.0)) {
        let series: Vec<&SweepRow> = rows.iter().filter(|r| r.device == device).collect();
        let infid: Vec<f64> = series.iter().map(|r| r.infidelity).collect();
        let crossover = crossover(&series);
        if device == "divider" {
            report.holds("divider infidelity decreases monotonically", monotone_decreasing(&infid));
        } else {
            report.note(format!("{device} monotone"), f64::from(u8::from(monotone_decreasing(&infid))));
        }
        report.note(format!("{device} crossover (coupling lengths)"), crossover);
    }

    let csv = rows_csv(
        &["device", "z_max", "coupling_lengths", "infidelity", "max_bus_pop"],
        rows.iter().map(|r| {
            vec![r.device.clone(), num(r.z_max), num(r.coupling_lengths), num(r.infidelity), num(r.max_bus_pop)]
        }),
    )?;
    Ok(ExperimentOutput { report, artifacts: vec![Artifact { name: "sweep.csv".into(), contents: csv }] })
}
