//! The two-photon sector of three waveguides plus bus has a four-dimensional
//! null space at any couplings; closed-form null vectors are annihilated by
//! the assembled Hamiltonian.

use busgate::hamiltonian::{numeric_null_space, two_photon_basis, two_photon_null_vectors};
use busgate::{CouplingSchedule, HamiltonianModel, Profile};

fn main() -> busgate::Result<()> {
    let omegas = [0.7, 0.4, 0.9];
    let basis = two_photon_basis();
    let profiles = omegas.iter().map(|&value| Profile::Constant { value }).collect();
    let model = HamiltonianModel::new(basis.clone(), CouplingSchedule::new(1.0, profiles)?)?;
    let h = model.assemble(0.0)?;

    println!("basis: {}", basis.labels()?.join(" "));
    for (k, v) in two_photon_null_vectors(omegas[0], omegas[1], omegas[2])?.iter().enumerate() {
        let v = v.normalize();
        let entries: Vec<String> = v.iter().map(|x| format!("{x:+.3}")).collect();
        println!("v{k} = [{}]  |Hv| = {:.1e}", entries.join(" "), (&h * &v).norm());
    }
    println!("numeric null dimension = {}", numeric_null_space(&h).len());
    Ok(())
}
