//! Reflectivity 1/2 gives a Hadamard on the dual-rail qubit (1, 2). The
//! endpoint propagator restricted to that pair is compared with the target.

use busgate::{alpha_for_reflectivity, endpoint_map, FockBasis, FockState, GateContext, GateSpec, Sign};

fn main() -> busgate::Result<()> {
    let gate = GateSpec::new(alpha_for_reflectivity(0.5)?, Sign::Positive, [1, 2], 3, 300.0)?;
    let ctx = GateContext::default();
    let basis = FockBasis::enumerate(4, 1)?;
    let map = endpoint_map(&ctx.model(&gate, &basis)?, &ctx.integrator(gate.z_max)?)?;
    let idx = [1, 2].map(|m| basis.require(&FockState::with_photons_in(4, &[m]).unwrap()).unwrap());

    let g = gate.matrix();
    for i in 0..2 {
        for j in 0..2 {
            let u = map[(idx[i], idx[j])];
            println!("U[{i}{j}] = {:+.5} {:+.5}i   (G = {:+.5})", u.re, u.im, g[(i, j)]);
        }
    }
    Ok(())
}
