//! Two photons through the Hadamard gate bunch: the coincidence |0110>
//! vanishes. The integrated state is compared with the permanent-based
//! linear-optics prediction.

use busgate::{alpha_for_reflectivity, fidelity, lift_unitary, run_gate, FockBasis, FockState, GateContext, GateSpec, Sign};

fn main() -> busgate::Result<()> {
    let gate = GateSpec::new(alpha_for_reflectivity(0.5)?, Sign::Positive, [1, 2], 3, 300.0)?;
    let basis = FockBasis::enumerate(4, 2)?;
    let psi0 = basis.basis_vector(&FockState::with_photons_in(4, &[1, 2])?)?;
    let trace = run_gate(&psi0, &basis, &gate, &GateContext::default())?;
    let oracle = lift_unitary(&gate.mode_unitary(4)?, &basis)? * &psi0;

    for (state, (a, o)) in basis.states().iter().zip(trace.final_state().iter().zip(oracle.iter())) {
        println!("{state}: integrated {:.6}  linear optics {:.6}", a.norm_sqr(), o.norm_sqr());
    }
    println!("fidelity with linear optics = {:.6}", fidelity(&oracle, trace.final_state())?);
    Ok(())
}
