use crate::bits::Bitstring;
use crate::engine::Sim;
use crate::error::Result;
use crate::prims::{selection, Schedule};

use super::{draw_candidates, owns, ElectionParams, ProtocolOutcome};

/// Expected-time election: repeat `Selection` over a fresh `1/n`-probability
/// candidate set until a node sees `b = 1`, then output `m(v)`.
pub fn elect_expected(sim: &mut Sim<'_>, params: &ElectionParams) -> Result<ProtocolOutcome> {
    let n = sim.n();
    let sched = Schedule::new(n, params.d, params.alpha);
    let mut outputs: Vec<Option<Bitstring>> = vec![None; n];
    let mut elected = vec![false; n];
    let mut iteration = 0;
    while !sim.all_halted() {
        iteration += 1;
        sim.set_iteration(iteration);
        let candidates = draw_candidates(sim, params, iteration);
        let out = selection(sim, &sched, &candidates, params.id_len)?;
        for (v, o) in out.into_iter().enumerate() {
            if o.b && !sim.is_halted(v) {
                elected[v] = owns(&candidates, v, &o.m);
                outputs[v] = Some(o.m);
                sim.halt(v);
            }
        }
    }
    Ok(ProtocolOutcome::new(params.protocol, params, sim, outputs, elected, iteration))
}
