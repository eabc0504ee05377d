//! Reflectivity 0: the USB gate swaps waveguides 1 and 2.

use busgate::{alpha_for_reflectivity, run_gate, FockBasis, FockState, GateContext, GateSpec, Sign};

fn main() -> busgate::Result<()> {
    let gate = GateSpec::new(alpha_for_reflectivity(0.0)?, Sign::Positive, [1, 2], 3, 300.0)?;
    let g = gate.matrix();
    println!("alpha = {:.6}, G = [[{:+.3}, {:+.3}], [{:+.3}, {:+.3}]]", gate.alpha, g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let basis = FockBasis::enumerate(4, 1)?;
    let ctx = GateContext::default();
    for input in [1, 2] {
        let psi0 = basis.basis_vector(&FockState::with_photons_in(4, &[input])?)?;
        let trace = run_gate(&psi0, &basis, &gate, &ctx)?;
        let p = trace.final_populations();
        let (one, two) = (basis.require(&FockState::with_photons_in(4, &[1])?)?, basis.require(&FockState::with_photons_in(4, &[2])?)?);
        println!("photon in {input}: P_1 = {:.6}  P_2 = {:.6}  max bus = {:.1e}", p[one], p[two], trace.max_bus_population());
    }
    Ok(())
}
