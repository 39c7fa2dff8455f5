// Single-hop election with collision detection on a complete graph.

use radio_leader::{build_topology, run_protocol, Family, Protocol, ProtocolSpec, TopologySpec};

fn main() -> radio_leader::Result<()> {
    let t = build_topology(&TopologySpec::new(Family::Complete, 256))?;
    let spec = ProtocolSpec::new(Protocol::SingleHop);
    let runs = 200;
    let mut histogram = [0u32; 12];
    for seed in 0..runs {
        let (outcome, _) = run_protocol(&t, &spec, seed)?;
        assert!(outcome.success);
        histogram[(outcome.iterations as usize - 1).min(11)] += 1;
    }
    println!("iterations needed over {runs} runs:");
    for (i, count) in histogram.iter().enumerate() {
        println!("{:>3} {:<40} {count}", i + 1, "#".repeat(*count as usize / 2));
    }
    Ok(())
}
