use crate::bits::Bitstring;
use crate::engine::{Rx, Sim};
use crate::error::Result;
use crate::rng::Stream;
use crate::topology::NodeId;
use crate::trace::{Invocation, Primitive};

use super::{source_entries, Schedule};

/// Decay-flooding broadcast under the current trace tag.
///
/// Runs `α·(D + log n)` Decay executions. The transmitter set starts as the
/// sources; a node joins it in the round after it first receives a payload,
/// keeps that first payload as `m(v)`, and forwards it from then on.
/// Returns `m(v)` per node, ε where nothing arrived.
pub(crate) fn run_pmb(sim: &mut Sim<'_>, sched: &Schedule, sources: &[(NodeId, Bitstring)]) -> Result<Vec<Bitstring>> {
    let n = sim.n();
    let mut kept: Vec<Option<Bitstring>> = vec![None; n];
    let mut informed = Vec::with_capacity(n);
    for (v, p) in sources {
        if kept[*v].is_none() {
            kept[*v] = Some(p.clone());
            informed.push(*v);
        }
    }
    let mut tx = Vec::with_capacity(n);
    let mut rx = Vec::new();
    let mut fresh = Vec::new();
    for _ in 0..sched.pmb_decays() {
        for step in 1..=sched.log_n as u32 {
            tx.clear();
            tx.extend(informed.iter().copied().filter(|&v| sim.rng(v, Stream::Decay).one_in_pow2(step)));
            sim.radio_round(&tx, |v| kept[v].clone().unwrap_or_default(), &mut rx)?;
            fresh.clear();
            for &(w, r) in &rx {
                if let Rx::Message { from } = r {
                    if kept[w].is_none() {
                        fresh.push((w, from));
                    }
                }
            }
            for &(w, from) in &fresh {
                kept[w] = kept[from].clone();
                informed.push(w);
            }
        }
    }
    Ok(kept.into_iter().map(Option::unwrap_or_default).collect())
}

/// Partial Multi-Broadcast of `f(s)` from every source `s`.
///
/// Each node ends holding the first payload it received, or ε when the
/// source set is empty. Duration is [`Schedule::pmb_len`] regardless of the
/// inputs.
pub fn partial_multi_broadcast(
    sim: &mut Sim<'_>,
    sched: &Schedule,
    sources: &[(NodeId, Bitstring)],
) -> Result<Vec<Bitstring>> {
    let start = sim.round();
    sim.set_primitive("pmb");
    let out = run_pmb(sim, sched, sources)?;
    if sim.records_invocations() {
        let mut inv = Invocation::new(Primitive::Pmb, start, sim.round() - start, sim.iteration());
        inv.sources = source_entries(sources);
        inv.halted = sim.halted_nodes();
        inv.outputs = out.clone();
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

    #[test]
    fn empty_sources_yield_epsilon() {
        let t = build_topology(&TopologySpec::new(Family::Grid, 9)).unwrap();
        let sched = Schedule::new(9, t.eccentricity(), 4);
        let mut sim = Sim::new(&t, ChannelModel::NoCd, 1, TraceLevel::Off).unwrap();
        let out = partial_multi_broadcast(&mut sim, &sched, &[]).unwrap();
        assert!(out.iter().all(Bitstring::is_empty));
        assert_eq!(sim.round(), sched.pmb_len());
    }

    #[test]
    fn single_source_on_a_path() {
        let t = build_topology(&TopologySpec::new(Family::Path, 20)).unwrap();
        let sched = Schedule::new(20, t.eccentricity(), 4);
        let payload: Bitstring = "1100".parse().unwrap();
        let mut ok = 0;
        for seed in 0..500 {
            let mut sim = Sim::new(&t, ChannelModel::NoCd, seed, TraceLevel::Off).unwrap();
            let out = partial_multi_broadcast(&mut sim, &sched, &[(7, payload.clone())]).unwrap();
            if out.iter().all(|m| *m == payload) {
                ok += 1;
            }
        }
        assert!(ok >= 495, "{ok}/500");
    }

    #[test]
    fn two_sources_every_node_holds_one_of_them() {
        let t = build_topology(&TopologySpec::new(Family::RandomDigraph, 40).with_p(0.05).with_seed(2)).unwrap();
        let sched = Schedule::new(40, t.eccentricity(), 4);
        let a: Bitstring = "1010".parse().unwrap();
        let b: Bitstring = "0101".parse().unwrap();
        let mut ok = 0;
        for seed in 0..500 {
            let mut sim = Sim::new(&t, ChannelModel::NoCd, seed, TraceLevel::Off).unwrap();
            let out = partial_multi_broadcast(&mut sim, &sched, &[(3, a.clone()), (30, b.clone())]).unwrap();
            assert_eq!(out[3], a);
            assert_eq!(out[30], b);
            if out.iter().all(|m| *m == a || *m == b) {
                ok += 1;
            }
        }
        assert!(ok >= 495, "{ok}/500");
    }
}
