use crate::bits::Bitstring;
use crate::engine::Sim;
use crate::error::Result;
use crate::topology::NodeId;
use crate::trace::{Invocation, Primitive};

use super::{run_pmb, source_entries, Schedule};

/// Agrees on the first `prefix_len` bits of the largest candidate ID.
///
/// In iteration `i`, candidates whose ID matches their current view of the
/// prefix and has bit `i` set broadcast `"1"`; every node sets bit `i` of
/// its view to whether anything arrived. Participation is recomputed each
/// iteration.
pub fn search(
    sim: &mut Sim<'_>,
    sched: &Schedule,
    candidates: &[(NodeId, Bitstring)],
    prefix_len: usize,
) -> Result<Vec<Bitstring>> {
    assert!(
        candidates.iter().all(|(_, id)| id.len() >= prefix_len),
        "prefix length {prefix_len} exceeds an ID length"
    );
    let start = sim.round();
    let n = sim.n();
    sim.set_primitive("search");
    let mut view = vec![Bitstring::zeros(prefix_len); n];
    let one: Bitstring = Bitstring::ones(1);
    for bit in 0..prefix_len {
        sim.set_phase("pmb", bit as u32 + 1);
        let participants: Vec<(NodeId, Bitstring)> = candidates
            .iter()
            .filter(|(v, id)| id.get(bit) && (0..bit).all(|j| id.get(j) == view[*v].get(j)))
            .map(|(v, _)| (*v, one.clone()))
            .collect();
        let heard = run_pmb(sim, sched, &participants)?;
        for v in 0..n {
            view[v].set(bit, !heard[v].is_empty());
        }
    }
    if sim.records_invocations() {
        let mut inv = Invocation::new(Primitive::Search, start, sim.round() - start, sim.iteration());
        inv.sources = source_entries(candidates);
        inv.halted = sim.halted_nodes();
        inv.outputs = view.clone();
        inv.length = Some(prefix_len);
        sim.record_invocation(inv);
    }
    Ok(view)
}
