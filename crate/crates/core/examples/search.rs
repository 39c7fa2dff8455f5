// Search: every node learns a prefix of the largest candidate ID.

use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;
use radio_leader::election::sample_uniform_id;
use radio_leader::prims::{search, Schedule};
use radio_leader::{build_topology, ChannelModel, Family, Sim, TopologySpec, TraceLevel};

fn main() -> radio_leader::Result<()> {
    let t = build_topology(&TopologySpec::new(Family::RandomDigraph, 48).with_p(0.05).with_seed(3))?;
    let sched = Schedule::new(t.n(), t.eccentricity(), 4);
    let mut rng = StdRng::seed_from_u64(9);
    for trial in 0..5 {
        let mut candidates = Vec::new();
        for v in 0..t.n() {
            if rng.random_bool(0.15) {
                candidates.push((v, sample_uniform_id(&mut rng, 10)));
            }
        }
        let prefix_len = 4;
        let mut sim = Sim::new(&t, ChannelModel::NoCd, trial, TraceLevel::Off)?;
        let out = search(&mut sim, &sched, &candidates, prefix_len)?;
        let max = candidates.iter().map(|(_, id)| id).max();
        let oracle = max.map(|id| id.prefix(prefix_len)).unwrap_or_default();
        let correct = out.iter().filter(|m| **m == oracle).count();
        println!(
            "trial {trial}: {} candidates, max ID {:?}, oracle {oracle:?}, {correct}/{} nodes correct",
            candidates.len(),
            max,
            t.n()
        );
    }
    Ok(())
}
