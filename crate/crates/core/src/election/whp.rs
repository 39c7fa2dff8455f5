use crate::bits::Bitstring;
use crate::engine::Sim;
use crate::error::Result;
use crate::prims::{search, selection, Schedule};

use super::{draw_candidates, owns, ElectionParams, ProtocolOutcome};

/// High-probability election.
///
/// Candidates (probability `4 log n / n`, `log n`-bit IDs) first agree on
/// the top `ceil(sqrt(log n))` bits of the largest ID; mismatching
/// candidates drop. Then up to `ceil(3 sqrt(log n))` Selections run; a node
/// seeing `b = 1` outputs and halts, and a candidate whose `p(v)` exceeds its
/// own ID drops out. Nodes still running after the last Selection never
/// output, which marks the run failed.
pub fn elect_whp(sim: &mut Sim<'_>, params: &ElectionParams) -> Result<ProtocolOutcome> {
    let n = sim.n();
    let sched = Schedule::new(n, params.d, params.alpha);
    let mut outputs: Vec<Option<Bitstring>> = vec![None; n];
    let mut elected = vec![false; n];

    sim.set_iteration(0);
    let mut candidates = draw_candidates(sim, params, 1);
    let prefix_len = params.prefix_len.min(params.id_len);
    let agreed = search(sim, &sched, &candidates, prefix_len)?;
    candidates.retain(|(v, id)| agreed[*v] == id.prefix(prefix_len));

    let bound = params.loop_bound.unwrap_or(1);
    let mut iterations = 0;
    for k in 1..=bound {
        if sim.all_halted() {
            break;
        }
        iterations = k;
        sim.set_iteration(k);
        let out = selection(sim, &sched, &candidates, params.id_len)?;
        let mut dropped = vec![false; n];
        for (v, o) in out.into_iter().enumerate() {
            if sim.is_halted(v) {
                continue;
            }
            if o.b {
                elected[v] = owns(&candidates, v, &o.m);
                outputs[v] = Some(o.m);
                sim.halt(v);
            } else if candidates.iter().any(|(c, id)| *c == v && o.m > *id) {
                dropped[v] = true;
            }
        }
        candidates.retain(|(v, _)| !dropped[*v]);
    }
    Ok(ProtocolOutcome::new(params.protocol, params, sim, outputs, elected, iterations))
}
