// Decay on a star: `k` leaves transmit toward the hub. Compares the
// empirical success rate of one and four Decay executions with the exact
// probability.

use radio_leader::prims::{decay, decay4, Schedule};
use radio_leader::topology::log2_ceil;
use radio_leader::{build_topology, Bitstring, ChannelModel, Family, Sim, TopologySpec, TraceLevel};

/// Probability that one Decay delivers something to the hub.
fn exact(k: usize, log_n: usize) -> f64 {
    let miss: f64 = (1..=log_n)
        .map(|i| {
            let q = 0.5f64.powi(i as i32);
            1.0 - k as f64 * q * (1.0 - q).powi(k as i32 - 1)
        })
        .product();
    1.0 - miss
}

fn main() -> radio_leader::Result<()> {
    let n = 256;
    let trials = 2000;
    let t = build_topology(&TopologySpec::new(Family::Star, n))?;
    let sched = Schedule::new(n, t.eccentricity(), 4);
    println!("k    decay   exact   decay4  exact");
    for k in [1, 2, 4, 16, 64] {
        let sources: Vec<_> = (1..=k).map(|v| (v, Bitstring::from_u64(v as u64, 8))).collect();
        let (mut once, mut four) = (0, 0);
        for seed in 0..trials {
            let mut sim = Sim::new(&t, ChannelModel::NoCd, seed, TraceLevel::Off)?;
            once += decay(&mut sim, &sched, &sources)?[0].is_some() as u32;
            four += decay4(&mut sim, &sched, &sources)?[0].is_some() as u32;
        }
        let p = exact(k, log2_ceil(n));
        println!(
            "{k:<4} {:.3}   {:.3}   {:.3}   {:.3}",
            once as f64 / trials as f64,
            p,
            four as f64 / trials as f64,
            1.0 - (1.0 - p).powi(4)
        );
    }
    Ok(())
}
