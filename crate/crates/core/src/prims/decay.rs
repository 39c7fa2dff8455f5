use crate::bits::Bitstring;
use crate::engine::{Rx, Sim};
use crate::error::Result;
use crate::rng::Stream;
use crate::topology::NodeId;
use crate::trace::{Invocation, Primitive};

use super::{dense_payloads, source_entries, Schedule};

/// `repeats` back-to-back Decay executions under the current trace tag.
///
/// In step `i` of each execution every live member transmits its payload
/// with probability `2^-i`. Returns, per node, the largest payload it
/// received (if any).
pub(crate) fn run_decay(
    sim: &mut Sim<'_>,
    sched: &Schedule,
    members: &[NodeId],
    payloads: &[Bitstring],
    repeats: usize,
) -> Result<Vec<Option<Bitstring>>> {
    let mut best: Vec<Option<Bitstring>> = vec![None; sim.n()];
    let mut tx = Vec::with_capacity(members.len());
    let mut rx = Vec::new();
    for _ in 0..repeats {
        for step in 1..=sched.log_n as u32 {
            tx.clear();
            tx.extend(members.iter().copied().filter(|&v| sim.rng(v, Stream::Decay).one_in_pow2(step)));
            sim.radio_round(&tx, |v| payloads[v].clone(), &mut rx)?;
            for &(w, r) in &rx {
                if let Rx::Message { from } = r {
                    let got = &payloads[from];
                    if best[w].as_ref().is_none_or(|b| got > b) {
                        best[w] = Some(got.clone());
                    }
                }
            }
        }
    }
    Ok(best)
}

fn decay_top(sim: &mut Sim<'_>, sched: &Schedule, sources: &[(NodeId, Bitstring)], repeats: usize) -> Result<Vec<Option<Bitstring>>> {
    let start = sim.round();
    sim.set_primitive("decay");
    let members: Vec<NodeId> = sources.iter().map(|(v, _)| *v).collect();
    let payloads = dense_payloads(sim.n(), sources);
    let got = run_decay(sim, sched, &members, &payloads, repeats)?;
    if sim.records_invocations() {
        let mut inv = Invocation::new(Primitive::Decay, start, sim.round() - start, sim.iteration());
        inv.sources = source_entries(sources);
        inv.halted = sim.halted_nodes();
        inv.outputs = got.iter().map(|g| g.clone().unwrap_or_default()).collect();
        sim.record_invocation(inv);
    }
    Ok(got)
}

/// One Decay execution (`log n` rounds) by `sources`.
pub fn decay(sim: &mut Sim<'_>, sched: &Schedule, sources: &[(NodeId, Bitstring)]) -> Result<Vec<Option<Bitstring>>> {
    decay_top(sim, sched, sources, 1)
}

/// Four back-to-back Decay executions.
pub fn decay4(sim: &mut Sim<'_>, sched: &Schedule, sources: &[(NodeId, Bitstring)]) -> Result<Vec<Option<Bitstring>>> {
    decay_top(sim, sched, sources, 4)
}
