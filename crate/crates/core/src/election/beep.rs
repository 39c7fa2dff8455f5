use crate::bits::Bitstring;
use crate::engine::Sim;
use crate::error::Result;
use crate::prims::{beep_wave, Schedule};
use crate::topology::NodeId;

use super::{draw_candidates, owns, ElectionParams, ProtocolOutcome};

/// Beep-model election.
///
/// Each iteration: `1/n`-probability candidates draw a `4 log n`-bit ID with
/// exactly `log n` ones and beep-wave it. A node that decoded more than
/// `log n` ones is a witness; all nodes then take part in a one-bit wave
/// from the witnesses. A node with non-empty `m(v)` that heard no witness
/// outputs `m(v)` and halts. Every iteration lasts exactly two wave
/// durations.
pub fn elect_beep(sim: &mut Sim<'_>, params: &ElectionParams) -> Result<ProtocolOutcome> {
    let n = sim.n();
    let sched = Schedule::new(n, params.d, params.alpha);
    let weight = params.id_weight.unwrap_or(params.log_n);
    let one = Bitstring::ones(1);
    let mut outputs: Vec<Option<Bitstring>> = vec![None; n];
    let mut elected = vec![false; n];
    let mut iteration = 0;
    while !sim.all_halted() {
        iteration += 1;
        sim.set_iteration(iteration);
        let candidates = draw_candidates(sim, params, iteration);
        let wave = beep_wave(sim, &sched, &candidates, params.id_len)?;
        let witnesses: Vec<(NodeId, Bitstring)> = (0..n)
            .filter(|&v| !sim.is_halted(v) && wave.outputs[v].count_ones() > weight)
            .map(|v| (v, one.clone()))
            .collect();
        let alarm = beep_wave(sim, &sched, &witnesses, 1)?;
        for v in 0..n {
            let m = &wave.outputs[v];
            if !sim.is_halted(v) && !m.is_empty() && alarm.outputs[v].is_empty() {
                elected[v] = owns(&candidates, v, m);
                outputs[v] = Some(m.clone());
                sim.halt(v);
            }
        }
    }
    Ok(ProtocolOutcome::new(params.protocol, params, sim, outputs, elected, iteration))
}
