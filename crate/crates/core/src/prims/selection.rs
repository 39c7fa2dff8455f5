use crate::bits::Bitstring;
use crate::engine::Sim;
use crate::error::Result;
use crate::topology::NodeId;
use crate::trace::{Invocation, Primitive, WitnessEntry};

use super::decay::run_decay;
use super::{run_pmb, source_entries, Schedule};

/// Per-node result of [`selection`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionOutput {
    pub m: Bitstring,
    pub b: bool,
}

/// Selection among `candidates`, each holding an `id_len`-bit ID.
///
/// 1. Broadcast the candidate IDs; each node keeps one as `m(v)`.
/// 2. For each bit `i`, nodes whose `m(v)` has bit `i` set run four Decay
///    executions transmitting `m(v)`. A node with bit `i` clear that hears
///    something becomes a witness and raises `m(v)` to the larger string.
/// 3. Witnesses broadcast their `m(v)`; the result is `p(v)`.
///
/// Output is `(m, 1)` when `p(v) = ε`, `(p, 0)` otherwise, and `(ε, 0)` for
/// nodes whose first broadcast delivered nothing.
pub fn selection(
    sim: &mut Sim<'_>,
    sched: &Schedule,
    candidates: &[(NodeId, Bitstring)],
    id_len: usize,
) -> Result<Vec<SelectionOutput>> {
    assert!(candidates.iter().all(|(_, id)| id.len() == id_len), "candidate IDs must be {id_len} bits");
    let start = sim.round();
    let n = sim.n();
    sim.set_primitive("selection");

    sim.set_phase("pmb_ids", 0);
    let mut m = run_pmb(sim, sched, candidates)?;

    let mut witness = vec![false; n];
    let mut witness_log = Vec::new();
    let mut members = Vec::with_capacity(n);
    for bit in 0..id_len {
        sim.set_phase("decay", bit as u32 + 1);
        members.clear();
        members.extend((0..n).filter(|&v| !m[v].is_empty() && m[v].get(bit)));
        let heard = run_decay(sim, sched, &members, &m, 4)?;
        for v in 0..n {
            if m[v].is_empty() || m[v].get(bit) {
                continue;
            }
            if let Some(received) = &heard[v] {
                witness[v] = true;
                if sim.records_invocations() {
                    witness_log.push(WitnessEntry { node: v, held: m[v].clone(), received: received.clone(), bit });
                }
                if *received > m[v] {
                    m[v] = received.clone();
                }
            }
        }
    }

    sim.set_phase("pmb_witness", 0);
    let witness_sources: Vec<(NodeId, Bitstring)> =
        (0..n).filter(|&v| witness[v]).map(|v| (v, m[v].clone())).collect();
    let p = run_pmb(sim, sched, &witness_sources)?;

    let out: Vec<SelectionOutput> = (0..n)
        .map(|v| {
            if m[v].is_empty() {
                SelectionOutput { m: Bitstring::empty(), b: false }
            } else if p[v].is_empty() {
                SelectionOutput { m: m[v].clone(), b: true }
            } else {
                SelectionOutput { m: p[v].clone(), b: false }
            }
        })
        .collect();

    if sim.records_invocations() {
        let mut inv = Invocation::new(Primitive::Selection, start, sim.round() - start, sim.iteration());
        inv.sources = source_entries(candidates);
        inv.halted = sim.halted_nodes();
        inv.outputs = out.iter().map(|o| o.m.clone()).collect();
        inv.flags = out.iter().map(|o| o.b).collect();
        inv.witnesses = witness_log;
        inv.length = Some(id_len);
        sim.record_invocation(inv);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelModel;
    use crate::topology::{build_topology, Family, TopologySpec};
    use crate::trace::TraceLevel;

    fn id(v: u64) -> Bitstring {
        Bitstring::from_u64(v, 16)
    }

    #[test]
    fn no_candidates() {
        let t = build_topology(&TopologySpec::new(Family::Path, 6)).unwrap();
        let sched = Schedule::new(6, 5, 4);
        let mut sim = Sim::new(&t, ChannelModel::NoCd, 0, TraceLevel::Off).unwrap();
        let out = selection(&mut sim, &sched, &[], 16).unwrap();
        assert!(out.iter().all(|o| o.m.is_empty() && !o.b));
        assert_eq!(sim.round(), sched.selection_len(16));
    }

    #[test]
    fn sole_candidate_wins() {
        let t = build_topology(&TopologySpec::new(Family::Grid, 9)).unwrap();
        let sched = Schedule::new(9, t.eccentricity(), 4);
        let mut sim = Sim::new(&t, ChannelModel::NoCd, 4, TraceLevel::Off).unwrap();
        let out = selection(&mut sim, &sched, &[(4, id(0xBEEF))], 16).unwrap();
        assert!(out.iter().all(|o| o.m == id(0xBEEF) && o.b));
    }

    #[test]
    fn two_candidates_remove_the_minimum() {
        let t = build_topology(&TopologySpec::new(Family::Path, 8)).unwrap();
        let sched = Schedule::new(8, 7, 4);
        let mut sim = Sim::new(&t, ChannelModel::NoCd, 11, TraceLevel::Invocations).unwrap();
        let out = selection(&mut sim, &sched, &[(0, id(0x00FF)), (7, id(0xF0F0))], 16).unwrap();
        assert!(out.iter().all(|o| !o.b && o.m == id(0xF0F0)));
        let inv = sim.trace().invocations().next().unwrap();
        assert!(!inv.witnesses.is_empty());
        assert!(inv.witnesses.iter().all(|w| w.held != w.received));
    }
}
