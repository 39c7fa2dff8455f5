// Expected-time election on a random strongly connected digraph.

use radio_leader::{build_topology, run_protocol, Family, Protocol, ProtocolSpec, TopologySpec};

fn main() -> radio_leader::Result<()> {
    let t = build_topology(&TopologySpec::new(Family::RandomDigraph, 64).with_p(0.04).with_seed(1))?;
    println!("random digraph: n = {}, D = {}", t.n(), t.eccentricity());
    let spec = ProtocolSpec::new(Protocol::Expected);
    let mut iterations = 0;
    let runs = 10;
    for seed in 0..runs {
        let (outcome, _) = run_protocol(&t, &spec, seed)?;
        iterations += outcome.iterations;
        println!("{}", serde_json::to_string(&outcome.record())?);
    }
    println!("mean iterations {:.2}", iterations as f64 / runs as f64);
    Ok(())
}
