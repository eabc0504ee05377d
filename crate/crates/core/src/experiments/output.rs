use std::path::{Path, PathBuf};

use crate::coupling::{CouplingSchedule, WaveguidePath};
use crate::error::{Error, Result};
use crate::propagator::EvolutionTrace;

use super::report::ComparisonReport;

/// A named output file held in memory until the run is complete.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub report: ComparisonReport,
    pub artifacts: Vec<Artifact>,
}

impl ExperimentOutput {
    pub fn artifact(&self, name: &str) -> Option<&Artifact> {
        self.artifacts.iter().find(|a| a.name == name)
    }

    /// Write every artifact plus `<experiment>_report.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let report = Artifact {
            name: format!("{}_report.json", self.report.experiment),
            contents: self.report.to_json()?,
        };
        self.artifacts
            .iter()
            .chain(std::iter::once(&report))
            .map(|a| {
                let path = dir.join(&a.name);
                std::fs::write(&path, &a.contents)?;
                Ok(path)
            })
            .collect()
    }
}

pub(crate) fn num(x: f64) -> String {
    format!("{x:.12e}")
}

fn table(header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Config(format!("csv output: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

/// `z, P_<label>..., norm, bus_pop`
pub fn trace_csv(trace: &EvolutionTrace) -> Result<String> {
    let labels = trace.basis().labels()?;
    let mut header = vec!["z".to_string()];
    header.extend(labels.iter().map(|l| format!("P_{l}")));
    header.extend(["norm".to_string(), "bus_pop".to_string()]);
    let rows = (0..trace.z.len()).map(|k| {
        let mut row = vec![num(trace.z[k])];
        row.extend(trace.amplitudes[k].iter().map(|a| num(a.norm_sqr())));
        row.push(num(trace.norm[k]));
        row.push(num(trace.bus_population[k]));
        row
    });
    table(header, rows)
}

/// `z, re_<label>, im_<label>, ...`
pub fn amplitude_csv(trace: &EvolutionTrace) -> Result<String> {
    let labels = trace.basis().labels()?;
    let mut header = vec!["z".to_string()];
    for l in &labels {
        header.push(format!("re_{l}"));
        header.push(format!("im_{l}"));
    }
    let rows = (0..trace.z.len()).map(|k| {
        let mut row = vec![num(trace.z[k])];
        for a in trace.amplitudes[k].iter() {
            row.push(num(a.re));
            row.push(num(a.im));
        }
        row
    });
    table(header, rows)
}

/// `z, omega_1, ..., omega_n`
pub fn schedule_csv(schedule: &CouplingSchedule, samples: usize) -> Result<String> {
    let n = schedule.waveguide_count();
    let mut header = vec!["z".to_string()];
    header.extend((1..=n).map(|i| format!("omega_{i}")));
    let rows = schedule.grid(samples).into_iter().map(|z| {
        let mut row = vec![num(z)];
        row.extend(schedule.couplings_at(z).into_iter().map(num));
        row
    });
    table(header, rows)
}

/// `z, x_1, ..., x_n`
pub fn geometry_csv(paths: &[WaveguidePath]) -> Result<String> {
    let mut header = vec!["z".to_string()];
    header.extend((1..=paths.len()).map(|i| format!("x_{i}")));
    let count = paths.first().map_or(0, |p| p.z.len());
    let rows = (0..count).map(|k| {
        let mut row = vec![num(paths[0].z[k])];
        row.extend(paths.iter().map(|p| num(p.x[k])));
        row
    });
    table(header, rows)
}

pub(crate) fn rows_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    table(header.iter().map(|s| s.to_string()).collect(), rows)
}
