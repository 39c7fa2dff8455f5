// Builds one graph of every family and prints its size and eccentricity.

use radio_leader::{build_topology, Family, TopologySpec};

fn main() -> radio_leader::Result<()> {
    let families = [
        Family::Path,
        Family::Cycle,
        Family::Star,
        Family::Complete,
        Family::Grid,
        Family::Layered,
        Family::RandomDigraph,
        Family::RandomUndirected,
    ];
    println!("{:<18} {:>4} {:>6} {:>4} {:>8}", "family", "n", "arcs", "D", "directed");
    for family in families {
        let t = build_topology(&TopologySpec::new(family, 30).with_p(0.05).with_seed(11))?;
        println!(
            "{:<18} {:>4} {:>6} {:>4} {:>8}",
            family.name(),
            t.n(),
            t.arcs().len(),
            t.eccentricity(),
            t.is_directed()
        );
    }
    let directed = build_topology(&TopologySpec::new(Family::Cycle, 30).directed(true))?;
    println!("oriented cycle, n = 30: D = {}", directed.eccentricity());
    Ok(())
}
