//! One photon enters waveguide 3 and leaves split evenly between 1 and 2,
//! with the bus almost never populated.

use busgate::{evolve, CouplingSchedule, FockBasis, FockState, HamiltonianModel, IntegratorConfig, Method, SlabParams};

fn main() -> busgate::Result<()> {
    let slab = SlabParams::new(1.0, 1.0)?;
    let z_max = 300.0;
    let basis = FockBasis::enumerate(4, 1)?;
    let model = HamiltonianModel::new(basis.clone(), CouplingSchedule::divider(z_max, &slab)?)?;
    let psi0 = basis.basis_vector(&FockState::with_photons_in(4, &[3])?)?;
    let trace = evolve(&model, &psi0, &IntegratorConfig::for_length(Method::Rk4, z_max, slab.omega_max))?;

    for (state, p) in basis.states().iter().zip(trace.final_populations()) {
        println!("P_{state} = {p:.6}");
    }
    println!("max bus population = {:.2e}", trace.max_bus_population());
    println!("norm drift = {:.2e}", trace.max_norm_drift());
    Ok(())
}
