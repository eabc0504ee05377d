use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use busgate::experiments::{Experiment, ExperimentConfig};
use busgate::Method;

#[derive(Parser)]
#[command(version, about = "Adiabatic bus-coupled photonic gate experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Device (or per-gate) length in units of 1/omega_max
    #[arg(long, global = true)]
    zmax: Option<f64>,

    /// Integration steps per device
    #[arg(long, global = true)]
    steps: Option<usize>,

    /// Gate reflectivity in [0, 1)
    #[arg(long, global = true)]
    ratio: Option<f64>,

    #[arg(long, global = true, value_parser = ["rk4", "expm"])]
    method: Option<String>,

    /// Use the analytic network instead of integrating (cnot)
    #[arg(long, global = true)]
    oracle_only: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// 50:50 power divider from waveguide 3
    Divider,
    /// Single-photon USB gate
    Gate,
    /// Two-photon Hong-Ou-Mandel run through the Hadamard gate
    Hom,
    /// Coincidence-basis CNOT truth table
    Cnot,
    /// Infidelity against device length
    Sweep,
    /// Closed-form two-photon null vectors
    Nullcheck,
    /// Waveguide paths for the divider and a gate
    Geometry,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Divider => Experiment::Divider,
            Command::Gate => Experiment::Gate,
            Command::Hom => Experiment::Hom,
            Command::Cnot => Experiment::Cnot,
            Command::Sweep => Experiment::Sweep,
            Command::Nullcheck => Experiment::Nullcheck,
            Command::Geometry => Experiment::Geometry,
        }
    }
}

fn config(cli: &Cli) -> busgate::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(z) = cli.zmax {
        cfg.z_max = z;
    }
    if cli.steps.is_some() {
        cfg.steps = cli.steps;
    }
    if let Some(r) = cli.ratio {
        cfg.ratio = r;
        cfg.alpha = None;
    }
    if let Some(m) = &cli.method {
        cfg.method = m.parse::<Method>()?;
    }
    cfg.oracle_only |= cli.oracle_only;
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let experiment = Experiment::from(cli.command);
    let result = config(&cli).and_then(|cfg| {
        let output = experiment.run(&cfg)?;
        let written = output.write(&cfg.out)?;
        Ok((output, written))
    });
    match result {
        Ok((output, written)) => {
            print!("{}", output.report);
            for path in written {
                println!("wrote {}", path.display());
            }
            if output.report.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
