// Beep waves on a grid: one source is decoded exactly everywhere; two
// sources leave some node holding the OR of both payloads.

use radio_leader::prims::{beep_wave, Schedule};
use radio_leader::{build_topology, Bitstring, ChannelModel, Family, Sim, TopologySpec, TraceLevel};

fn main() -> radio_leader::Result<()> {
    let t = build_topology(&TopologySpec::new(Family::Grid, 36))?;
    let sched = Schedule::new(t.n(), t.eccentricity(), 4);
    let f: Bitstring = "1001101".parse()?;

    let mut sim = Sim::new(&t, ChannelModel::Beep, 0, TraceLevel::Off)?;
    let one = beep_wave(&mut sim, &sched, &[(14, f.clone())], f.len())?;
    let exact = one.outputs.iter().filter(|m| **m == f).count();
    println!("single source: {exact}/{} nodes decoded {f} in {} rounds", t.n(), sim.round());
    println!("first beep by row:");
    for row in one.first_beep.chunks(6) {
        let cells: Vec<String> = row.iter().map(|r| format!("{:>2}", r.unwrap())).collect();
        println!("  {}", cells.join(" "));
    }

    let g: Bitstring = "0100011".parse()?;
    let mut sim = Sim::new(&t, ChannelModel::Beep, 0, TraceLevel::Off)?;
    let two = beep_wave(&mut sim, &sched, &[(0, f.clone()), (35, g.clone())], f.len())?;
    let joint = f.or(&g);
    let witnesses: Vec<_> = (0..t.n()).filter(|&v| joint.is_covered_by(&two.outputs[v])).collect();
    println!("two sources: {f} | {g} = {joint} decoded at nodes {witnesses:?}");
    Ok(())
}
