// Partial multi-broadcast from three corners of a grid. Every node ends up
// holding exactly one of the source payloads.

use std::collections::BTreeMap;

use radio_leader::prims::{partial_multi_broadcast, Schedule};
use radio_leader::{build_topology, ChannelModel, Family, Sim, TopologySpec, TraceLevel};

fn main() -> radio_leader::Result<()> {
    let t = build_topology(&TopologySpec::new(Family::Grid, 64))?;
    let sched = Schedule::new(t.n(), t.eccentricity(), 4);
    let sources = vec![(0, "001".parse()?), (7, "010".parse()?), (63, "100".parse()?)];
    let mut sim = Sim::new(&t, ChannelModel::NoCd, 42, TraceLevel::Off)?;
    let held = partial_multi_broadcast(&mut sim, &sched, &sources)?;
    println!("broadcast took {} rounds (D = {})", sim.round(), t.eccentricity());

    let mut tally = BTreeMap::new();
    for m in &held {
        *tally.entry(m.to_string()).or_insert(0) += 1;
    }
    for (payload, count) in tally {
        println!("{payload:>4}: {count} nodes");
    }
    for row in held.chunks(8) {
        let line: Vec<String> = row.iter().map(|m| m.to_string()).collect();
        println!("{}", line.join(" "));
    }
    Ok(())
}
