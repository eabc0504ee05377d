//! Error of the divider and the three named gates as the device gets longer.

use busgate::experiments::{sweep, ExperimentConfig};

fn main() -> busgate::Result<()> {
    let cfg = ExperimentConfig { lengths: vec![5.0, 10.0, 20.0, 50.0, 100.0, 200.0], ..ExperimentConfig::default() };
    let out = sweep(&cfg)?;
    print!("{}", out.artifact("sweep.csv").expect("sweep writes its table").contents);
    println!();
    print!("{}", out.report);
    Ok(())
}
