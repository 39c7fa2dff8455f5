// High-probability election: Search narrows the field, Selection removes
// the rest one at a time. Small `n` means short IDs, so duplicate maximum
// IDs are a visible failure mode.

use radio_leader::{build_topology, run_protocol, ElectionParams, Family, Protocol, ProtocolSpec, TopologySpec};

fn main() -> radio_leader::Result<()> {
    for n in [16, 64, 256] {
        let t = build_topology(&TopologySpec::new(Family::Grid, n))?;
        let params = ElectionParams::new(Protocol::Whp, n, t.eccentricity());
        let spec = ProtocolSpec::new(Protocol::Whp);
        let runs = 20;
        let mut ok = 0;
        let mut rounds = 0;
        for seed in 0..runs {
            let (outcome, _) = run_protocol(&t, &spec, seed)?;
            ok += outcome.success as u32;
            rounds += outcome.rounds;
        }
        println!(
            "grid n={n:<3} D={:<2} id bits={} prefix={} selections={}: {ok}/{runs} succeeded, mean {} rounds",
            t.eccentricity(),
            params.id_len,
            params.prefix_len,
            params.loop_bound.unwrap_or(0),
            rounds / runs
        );
    }
    Ok(())
}
