use crate::coupling::{antinode, schedule_to_paths, CouplingSchedule, SlabParams, WaveguidePath};
use crate::error::Result;
use crate::gates::alpha_for_reflectivity;

use super::output::{geometry_csv, schedule_csv, Artifact, ExperimentOutput};
use super::report::ComparisonReport;
use super::ExperimentConfig;

pub const MAX_RECONSTRUCTION_ERROR: f64 = 1e-9;

/// Largest `|Omega(x(z)) - Omega(z)|` over all samples, relative to
/// `omega_max`.
fn reconstruction_error(schedule: &CouplingSchedule, paths: &[WaveguidePath], slab: &SlabParams) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, p) in paths.iter().enumerate() {
        for (&z, c) in p.z.iter().zip(p.couplings(slab)) {
            worst = worst.max((c - schedule.coupling(k + 1, z)).abs() / slab.omega_max);
        }
    }
    worst
}

fn largest_step(paths: &[WaveguidePath]) -> f64 {
    paths
        .iter()
        .flat_map(|p| p.x.windows(2).map(|w| (w[1] - w[0]).abs()))
        .fold(0.0, f64::max)
}

pub fn geometry(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let slab = cfg.slab()?;
    let alpha = match cfg.alpha {
        Some(a) => a,
        None => alpha_for_reflectivity(cfg.ratio)?,
    };
    let divider = CouplingSchedule::divider(cfg.z_max, &slab)?;
    let gate = CouplingSchedule::usb_gate(alpha, 1.0, cfg.z_max, &slab)?;
    let divider_paths = schedule_to_paths(&divider, &slab, cfg.path_samples)?;
    let gate_paths = schedule_to_paths(&gate, &slab, cfg.path_samples)?;

    let mut report = ComparisonReport::new("geometry");
    report.within("divider reconstruction error", 0.0, reconstruction_error(&divider, &divider_paths, &slab), MAX_RECONSTRUCTION_ERROR);
    report.within("gate reconstruction error", 0.0, reconstruction_error(&gate, &gate_paths, &slab), MAX_RECONSTRUCTION_ERROR);

    let tol = MAX_RECONSTRUCTION_ERROR * slab.omega_max;
    let last = |p: &WaveguidePath| *p.x.last().expect("paths are never empty");
    let aux_end = last(&gate_paths[2]);
    report.within("gate waveguide 3 coupling at z_max", -slab.omega_max, crate::coupling::coupling_from_position(aux_end, &slab), tol);
    let node = |p: &WaveguidePath, x: f64| (x - f64::from(p.window) * std::f64::consts::PI / slab.beta0).abs() < 1e-9;
    let at_antinode = |p: &WaveguidePath, x: f64| (x - antinode(&slab, p.window)).abs() < 1e-6;
    let d = &divider_paths;
    report.holds("divider waveguide 3 starts at a node", node(&d[2], d[2].x[0]));
    report.holds("divider waveguide 3 ends at an antinode", at_antinode(&d[2], last(&d[2])));
    report.holds("divider waveguides 1 and 2 start at antinodes", at_antinode(&d[0], d[0].x[0]) && at_antinode(&d[1], d[1].x[0]));
    report.holds("divider waveguides 1 and 2 end at nodes", node(&d[0], last(&d[0])) && node(&d[1], last(&d[1])));
    report.note("divider largest lateral step", largest_step(&divider_paths));
    report.note("gate largest lateral step", largest_step(&gate_paths));
    report.note("gate alpha", alpha);

    let artifacts = vec![
        Artifact { name: "divider_geometry.csv".into(), contents: geometry_csv(&divider_paths)? },
        Artifact { name: "divider_schedule.csv".into(), contents: schedule_csv(&divider, cfg.path_samples)? },
        Artifact { name: "gate_geometry.csv".into(), contents: geometry_csv(&gate_paths)? },
        Artifact { name: "gate_schedule.csv".into(), contents: schedule_csv(&gate, cfg.path_samples)? },
    ];
    Ok(ExperimentOutput { report, artifacts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_geometry_passes() {
        let out = geometry(&ExperimentConfig::default()).unwrap();
        assert!(out.report.verdict, "{}", out.report);
        let csv = &out.artifact("gate_geometry.csv").unwrap().contents;
        assert!(csv.starts_with("z,x_1,x_2,x_3\n"));
        assert_eq!(csv.lines().count(), 1 + crate::coupling::DEFAULT_PATH_SAMPLES);
    }
}
