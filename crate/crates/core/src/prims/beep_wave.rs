use crate::bits::Bitstring;
use crate::engine::Sim;
use crate::error::{Error, Result};
use crate::topology::NodeId;
use crate::trace::{Invocation, Primitive};

use super::{source_entries, Schedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BeepWaveOutput {
    /// Decoded `m(v)`; ε for nodes that never heard a beep.
    pub outputs: Vec<Bitstring>,
    /// Round (relative to the wave's start) of each node's first own beep.
    pub first_beep: Vec<Option<u64>>,
}

pub(crate) fn run_beep_wave(
    sim: &mut Sim<'_>,
    sched: &Schedule,
    sources: &[(NodeId, Bitstring)],
    len: usize,
) -> Result<BeepWaveOutput> {
    if sim.topology().is_directed() {
        return Err(Error::ModelMismatch("beep waves need an undirected topology".into()));
    }
    assert!(sources.iter().all(|(_, f)| f.len() == len), "beep-wave payloads must be {len} bits");
    let n = sim.n();
    let duration = sched.beep_wave_len(len);
    let mut payload: Vec<Option<&Bitstring>> = vec![None; n];
    let mut decoded = vec![Bitstring::zeros(len); n];
    for (v, f) in sources {
        payload[*v] = Some(f);
        decoded[*v] = f.clone();
    }
    let mut first_heard: Vec<Option<u64>> = vec![None; n];
    let mut first_beep: Vec<Option<u64>> = vec![None; n];
    let mut relay_next: Vec<NodeId> = Vec::new();
    let mut beepers: Vec<NodeId> = Vec::new();
    let mut heard = Vec::new();

    // Bit index (1-based) carried by local round `r` relative to offset `j`.
    let bit_at = |r: u64, j: u64| -> Option<usize> {
        if r > j && (r - j).is_multiple_of(3) && (r - j) / 3 <= len as u64 {
            Some(((r - j) / 3) as usize)
        } else {
            None
        }
    };

    for r in 0..duration {
        beepers.clear();
        beepers.append(&mut relay_next);
        for (v, f) in sources {
            let beeps = r == 0 || bit_at(r, 0).is_some_and(|i| f.get(i - 1));
            if beeps {
                beepers.push(*v);
            }
        }
        for &v in &beepers {
            if first_beep[v].is_none() && !sim.is_halted(v) {
                first_beep[v] = Some(r);
            }
        }
        sim.beep_round(&beepers, &mut heard)?;
        for &w in &heard {
            if payload[w].is_some() {
                if let Some(i) = bit_at(r, 0) {
                    decoded[w].set(i - 1, true);
                }
                continue;
            }
            match first_heard[w] {
                None => {
                    first_heard[w] = Some(r);
                    relay_next.push(w);
                }
                Some(j) => {
                    if let Some(i) = bit_at(r, j) {
                        decoded[w].set(i - 1, true);
                        relay_next.push(w);
                    } else if let Some(i) = bit_at(r - 1, j) {
                        // a wave from a second source, one round out of phase
                        decoded[w].set(i - 1, true);
                    }
                }
            }
        }
    }

    let outputs = (0..n)
        .map(|v| {
            if payload[v].is_some() || first_heard[v].is_some() {
                std::mem::take(&mut decoded[v])
            } else {
                Bitstring::empty()
            }
        })
        .collect();
    Ok(BeepWaveOutput { outputs, first_beep })
}

/// Beep-Wave broadcast of `f(s)` (all `len` bits) from every source.
///
/// Sources beep in round 0 and in round `3i` when bit `i` is 1. Every other
/// node notes the round `j` of its first heard beep, relays it in `j+1`,
/// and for each bit relays a beep heard in round `j+3i` in round `j+3i+1`,
/// decoding bit `i` as 1. A beep heard in `j+3i+1` also decodes bit `i`
/// but is not relayed. Sources OR into their own payload the beeps they
/// hear in rounds `3i`. Fully deterministic; lasts [`Schedule::beep_wave_len`].
pub fn beep_wave(
    sim: &mut Sim<'_>,
    sched: &Schedule,
    sources: &[(NodeId, Bitstring)],
    len: usize,
) -> Result<BeepWaveOutput> {
    let start = sim.round();
    sim.set_primitive("beep_wave");
    let out = run_beep_wave(sim, sched, sources, len)?;
    if sim.records_invocations() {
        let mut inv = Invocation::new(Primitive::BeepWave, start, sim.round() - start, sim.iteration());
        inv.sources = source_entries(sources);
        inv.halted = sim.halted_nodes();
        inv.outputs = out.outputs.clone();
        inv.first_beep = out.first_beep.clone();
        inv.length = Some(len);
        sim.record_invocation(inv);
    }
    Ok(out)
}
