// Selection with zero, one and several candidates on a path.

use radio_leader::prims::{selection, Schedule};
use radio_leader::{build_topology, Bitstring, ChannelModel, Family, NodeId, Sim, TopologySpec, TraceLevel};

fn run(label: &str, candidates: &[(NodeId, Bitstring)]) -> radio_leader::Result<()> {
    let t = build_topology(&TopologySpec::new(Family::Path, 20))?;
    let sched = Schedule::new(t.n(), t.eccentricity(), 4);
    let mut sim = Sim::new(&t, ChannelModel::NoCd, 5, TraceLevel::Off)?;
    let out = selection(&mut sim, &sched, candidates, 6)?;
    let first = &out[0];
    let agree = out.iter().all(|o| o == first);
    println!(
        "{label:<12} -> m = {:?}, b = {} ({}), {} rounds",
        first.m,
        first.b as u8,
        if agree { "all nodes agree" } else { "nodes disagree" },
        sim.round()
    );
    Ok(())
}

fn main() -> radio_leader::Result<()> {
    run("none", &[])?;
    run("one", &[(3, "101100".parse()?)])?;
    // The minimum ID is removed; b = 0 tells everyone there were several.
    run("three", &[(2, "010011".parse()?), (9, "110000".parse()?), (17, "011111".parse()?)])?;
    Ok(())
}
