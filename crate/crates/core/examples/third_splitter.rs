//! A 1/3 : 2/3 splitter, set either by reflectivity or directly by alpha.

use busgate::gates::reflectivity;
use busgate::{alpha_for_reflectivity, run_gate, FockBasis, FockState, GateContext, GateSpec, Sign};

fn main() -> busgate::Result<()> {
    let basis = FockBasis::enumerate(4, 1)?;
    let psi0 = basis.basis_vector(&FockState::with_photons_in(4, &[1])?)?;
    let ctx = GateContext::default();
    let one = basis.require(&FockState::with_photons_in(4, &[1])?)?;
    let two = basis.require(&FockState::with_photons_in(4, &[2])?)?;

    for alpha in [alpha_for_reflectivity(1.0 / 3.0)?, 0.5176] {
        let gate = GateSpec::new(alpha, Sign::Positive, [1, 2], 3, 300.0)?;
        let p = run_gate(&psi0, &basis, &gate, &ctx)?.final_populations();
        println!(
            "alpha = {alpha:.6} (r = {:.6}): P_1 = {:.6}  P_2 = {:.6}",
            reflectivity(alpha),
            p[one],
            p[two]
        );
    }
    Ok(())
}
