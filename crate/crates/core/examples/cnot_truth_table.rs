//! The five-gate coincidence-basis CNOT, first from the composed linear
//! optics and then by integrating every gate. Pass `--integrate` for the
//! second column (about ten seconds per input on one core).

use busgate::network::cnot_input;
use busgate::{run_network, run_network_oracle, CircuitNetwork, GateContext};

fn main() -> busgate::Result<()> {
    let integrate = std::env::args().any(|a| a == "--integrate");
    let network = CircuitNetwork::cnot_default(300.0)?;
    let roles = network.roles().expect("the built-in network has roles");
    let ctx = GateContext::default();

    for (c, t) in [(false, false), (false, true), (true, false), (true, true)] {
        let input = cnot_input(&roles, network.mode_count(), c, t)?;
        println!("input C{}T{} = {input}", u8::from(c), u8::from(t));
        let (basis, state) = run_network_oracle(&input, &network)?;
        let run = if integrate { Some(run_network(&input, &network, &ctx)?) } else { None };
        for (i, a) in state.iter().enumerate() {
            let p = a.norm_sqr();
            if p < busgate::network::OUTCOME_FLOOR {
                continue;
            }
            let s = basis.state(i);
            let tag = busgate::classify_outcome(&input, s, &roles);
            print!("  {s} {p:.4} {tag}");
            if let Some(run) = &run {
                print!("  integrated {:.4}", run.final_state[i].norm_sqr());
            }
            println!();
        }
    }
    Ok(())
}
