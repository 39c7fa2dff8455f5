use crate::bits::Bitstring;
use crate::engine::{Rx, Sim};
use crate::error::Result;
use crate::topology::NodeId;
use crate::trace::{Invocation, Primitive, SourceEntry};

use super::{draw_candidates, ElectionParams, ProtocolOutcome};

/// Single-hop election with collision detection.
///
/// Each iteration is two rounds. Candidates (probability `1/n`, `log n`-bit
/// IDs) transmit together; a listener that receives a message has the
/// leader's ID. In the second round those listeners transmit back, so the
/// lone transmitter hears a message or a collision and learns it won. A
/// candidate in a one-node network wins without feedback.
pub fn elect_single_hop(sim: &mut Sim<'_>, params: &ElectionParams) -> Result<ProtocolOutcome> {
    let n = sim.n();
    let mut outputs: Vec<Option<Bitstring>> = vec![None; n];
    let mut elected = vec![false; n];
    let mut iteration = 0;
    let mut rx = Vec::new();
    while !sim.all_halted() {
        iteration += 1;
        sim.set_iteration(iteration);
        let start = sim.round();
        let candidates = draw_candidates(sim, params, iteration);
        let mut ids: Vec<Option<Bitstring>> = vec![None; n];
        for (v, id) in &candidates {
            ids[*v] = Some(id.clone());
        }
        let senders: Vec<NodeId> = candidates.iter().map(|(v, _)| *v).collect();

        sim.set_primitive("single_hop");
        sim.set_phase("transmit", iteration);
        sim.radio_round(&senders, |v| ids[v].clone().unwrap_or_default(), &mut rx)?;
        let mut got: Vec<Option<Bitstring>> = vec![None; n];
        for &(w, r) in &rx {
            if let Rx::Message { from } = r {
                got[w] = ids[from].clone();
            }
        }

        sim.set_phase("ack", iteration);
        let ackers: Vec<NodeId> = (0..n).filter(|&v| got[v].is_some()).collect();
        sim.radio_round(&ackers, |v| got[v].clone().unwrap_or_default(), &mut rx)?;
        let mut confirmed = vec![n == 1; n];
        for &(w, _) in &rx {
            confirmed[w] = true;
        }

        if sim.records_invocations() {
            let mut inv = Invocation::new(Primitive::SingleHop, start, sim.round() - start, iteration);
            inv.sources = candidates.iter().map(|(v, id)| SourceEntry { node: *v, payload: id.clone() }).collect();
            inv.halted = sim.halted_nodes();
            inv.outputs = got.iter().map(|g| g.clone().unwrap_or_default()).collect();
            sim.record_invocation(inv);
        }

        for v in 0..n {
            if sim.is_halted(v) {
                continue;
            }
            if let Some(id) = &got[v] {
                outputs[v] = Some(id.clone());
                sim.halt(v);
            } else if let (Some(id), true) = (&ids[v], confirmed[v]) {
                outputs[v] = Some(id.clone());
                elected[v] = true;
                sim.halt(v);
            }
        }
    }
    Ok(ProtocolOutcome::new(params.protocol, params, sim, outputs, elected, iteration))
}
