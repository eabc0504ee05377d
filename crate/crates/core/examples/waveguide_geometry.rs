//! Invert the divider schedule into lateral waveguide positions and confirm
//! the positions reproduce the couplings.

use busgate::coupling::schedule_to_paths;
use busgate::{CouplingSchedule, SlabParams};

fn main() -> busgate::Result<()> {
    let slab = SlabParams::new(1.0, 1.0)?;
    let schedule = CouplingSchedule::divider(300.0, &slab)?;
    let paths = schedule_to_paths(&schedule, &slab, 11)?;
    println!("{:>8} {:>10} {:>10} {:>10}", "z", "x_1", "x_2", "x_3");
    for k in 0..paths[0].z.len() {
        println!("{:8.1} {:10.5} {:10.5} {:10.5}", paths[0].z[k], paths[0].x[k], paths[1].x[k], paths[2].x[k]);
    }
    for (i, p) in paths.iter().enumerate() {
        let worst = p
            .z
            .iter()
            .zip(p.couplings(&slab))
            .map(|(&z, c)| (c - schedule.coupling(i + 1, z)).abs())
            .fold(0.0, f64::max);
        println!("waveguide {}: worst coupling mismatch {worst:.1e}", i + 1);
    }
    Ok(())
}
