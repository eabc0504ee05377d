use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockState};
use crate::network::{
    classify_outcome, cnot_input, outcome_table, run_network, run_network_oracle, CircuitNetwork, Designation,
    NetworkRun, Outcome,
};
use crate::oracle::fidelity;

use super::output::{num, rows_csv, trace_csv, Artifact, ExperimentOutput};
use super::report::ComparisonReport;
use super::{ExperimentConfig, MAX_NORM_DRIFT, MIN_ORACLE_FIDELITY, ORACLE_TABLE_TOLERANCE, TABLE_TOLERANCE};

/// One outcome: label, probability in ninths, heralds success.
pub type TableRow = (&'static str, u8, bool);

/// Expected CNOT outcome table for the eight-mode layout, keyed by logical
/// input (control, target).
pub const REFERENCE_TABLE: [((bool, bool), &[TableRow]); 4] = [
    (
        (false, false),
        &[
            ("00000110", 1, false),
            ("00001010", 1, false),
            ("00001100", 1, false),
            ("00002000", 2, false),
            ("00010010", 1, false),
            ("00010100", 1, true),
            ("00020000", 2, false),
        ],
    ),
    (
        (false, true),
        &[
            ("00000110", 1, false),
            ("00000200", 2, false),
            ("00001010", 1, false),
            ("00001100", 1, false),
            ("00010010", 1, false),
            ("00011000", 1, true),
            ("00020000", 2, false),
        ],
    ),
    (
        (true, false),
        &[
            ("00100010", 1, false),
            ("00101000", 1, true),
            ("00110000", 1, false),
            ("01000010", 2, false),
            ("01001000", 2, false),
            ("01010000", 2, false),
        ],
    ),
    (
        (true, true),
        &[
            ("00100010", 1, false),
            ("00100100", 1, true),
            ("00110000", 1, false),
            ("01000010", 2, false),
            ("01000100", 2, false),
            ("01010000", 2, false),
        ],
    ),
];

fn logical_name((c, t): (bool, bool)) -> String {
    format!("C{}T{}", u8::from(c), u8::from(t))
}

struct InputResult {
    input: FockState,
    logical: (bool, bool),
    basis: FockBasis,
    oracle: DVector<C64>,
    run: Option<NetworkRun>,
}

impl InputResult {
    fn state(&self) -> &DVector<C64> {
        self.run.as_ref().map_or(&self.oracle, |r| &r.final_state)
    }

    fn probability(&self, label: &str) -> Result<f64> {
        let s: FockState = label.parse()?;
        Ok(self.basis.index_of(&s).map_or(0.0, |i| self.state()[i].norm_sqr()))
    }
}

pub fn cnot(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let network = match &cfg.network {
        Some(path) => CircuitNetwork::load(path, cfg.z_max)?,
        None => CircuitNetwork::cnot_default(cfg.z_max)?,
    };
    let roles = network
        .roles()
        .ok_or_else(|| Error::InvalidNetwork("the cnot experiment needs a [roles] table".into()))?;
    let mut ctx = cfg.gate_context()?;
    ctx.recorded_samples = (cfg.recorded_samples / network.gates().len().max(1)).max(2);

    let results: Vec<InputResult> = REFERENCE_TABLE
        .par_iter()
        .map(|&(logical, _)| {
            let input = cnot_input(&roles, network.mode_count(), logical.0, logical.1)?;
            let (basis, oracle) = run_network_oracle(&input, &network)?;
            let run = if cfg.oracle_only { None } else { Some(run_network(&input, &network, &ctx)?) };
            Ok(InputResult { input, logical, basis, oracle, run })
        })
        .collect::<Result<_>>()?;

    let tol = if cfg.oracle_only { ORACLE_TABLE_TOLERANCE } else { TABLE_TOLERANCE };
    let mut report = ComparisonReport::new("cnot");
    let mut table: Vec<(String, Outcome)> = Vec::new();
    for (res, (_, rows)) in results.iter().zip(REFERENCE_TABLE.iter()) {
        let name = logical_name(res.logical);
        let mut listed = 0.0;
        let mut success = 0.0;
        for &(label, ninths, heralded) in rows.iter() {
            let p = res.probability(label)?;
            listed += p;
            report.within(format!("{name} -> {label}"), f64::from(ninths) / 9.0, p, tol);
            let designation = classify_outcome(&res.input, &label.parse()?, &roles);
            report.holds(format!("{name} -> {label} designation"), (designation == Designation::Success) == heralded);
        }
        for (s, a) in res.basis.states().iter().zip(res.state().iter()) {
            if classify_outcome(&res.input, s, &roles) == Designation::Success {
                success += a.norm_sqr();
            }
        }
        report.within(format!("{name} success probability"), 1.0 / 9.0, success, tol);
        report.below(format!("{name} probability outside the table"), tol, (1.0 - listed).max(0.0));

        if let Some(run) = &res.run {
            let f = fidelity(&res.oracle, &run.final_state)?;
            report.above(format!("{name} oracle fidelity"), MIN_ORACLE_FIDELITY, f);
            let drift = run.traces.iter().map(|t| t.max_norm_drift()).fold(0.0, f64::max);
            report.below(format!("{name} norm drift"), MAX_NORM_DRIFT, drift);
            let bus = run.traces.iter().map(|t| t.max_bus_population()).fold(0.0, f64::max);
            report.note(format!("{name} max bus population"), bus);
        }
        for o in outcome_table(&res.input, &res.basis, res.state(), Some(&roles))? {
            table.push((res.input.label()?, o));
        }
    }
    report.note("gate length", cfg.z_max);
    report.note("oracle only", f64::from(u8::from(cfg.oracle_only)));

    let rows = table.iter().map(|(input, o)| {
        let designation = o.designation.map_or_else(String::new, |d| d.to_string());
        vec![input.clone(), o.label.clone(), num(o.probability), designation]
    });
    let mut artifacts = vec![Artifact {
        name: "cnot_truth_table.csv".into(),
        contents: rows_csv(&["input_label", "outcome_label", "probability", "designation"], rows)?,
    }];
    for res in &results {
        if let Some(trace) = res.run.as_ref().and_then(NetworkRun::trace) {
            artifacts.push(Artifact {
                name: format!("cnot_trace_{}.csv", logical_name(res.logical)),
                contents: trace_csv(&trace)?,
            });
        }
    }
    Ok(ExperimentOutput { report, artifacts })
}
