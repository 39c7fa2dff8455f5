// Beep-model election on paths of growing length. Total rounds grow
// linearly in D.

use radio_leader::{build_topology, run_protocol, Family, Protocol, ProtocolSpec, TopologySpec};

fn main() -> radio_leader::Result<()> {
    let spec = ProtocolSpec::new(Protocol::Beep);
    for n in [33, 65, 129, 257] {
        let t = build_topology(&TopologySpec::new(Family::Path, n))?;
        let runs = 50;
        let (mut rounds, mut ok) = (0, 0);
        for seed in 0..runs {
            let (outcome, _) = run_protocol(&t, &spec, seed)?;
            rounds += outcome.rounds;
            ok += outcome.success as u32;
        }
        println!(
            "path D={:<3} mean rounds {:>7.1}  success {ok}/{runs}",
            t.eccentricity(),
            rounds as f64 / runs as f64
        );
    }
    Ok(())
}
