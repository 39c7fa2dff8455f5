// Independent oracles shared by the integration tests. Nothing here calls
// into the library's own channel, distance, or probability code.
#![allow(dead_code)]

use std::collections::VecDeque;

use radio_leader::{Bitstring, Reception, RoundAction};

/// Listener rule straight from the definition, over a raw arc list.
pub fn naive_radio(n: usize, arcs: &[(usize, usize)], actions: &[RoundAction], cd: bool) -> Vec<Reception> {
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        if matches!(actions[v], RoundAction::Transmit(_)) {
            out.push(Reception::Silence);
            continue;
        }
        let senders: Vec<&Bitstring> = arcs
            .iter()
            .filter(|(_, w)| *w == v)
            .filter_map(|(u, _)| match &actions[*u] {
                RoundAction::Transmit(p) => Some(p),
                _ => None,
            })
            .collect();
        out.push(match senders.len() {
            0 => Reception::Silence,
            1 => Reception::Message(senders[0].clone()),
            _ if cd => Reception::Collision,
            _ => Reception::Silence,
        });
    }
    out
}

pub fn naive_beep(n: usize, arcs: &[(usize, usize)], beeping: &[bool]) -> Vec<Reception> {
    (0..n)
        .map(|v| {
            if !beeping[v] && arcs.iter().any(|&(u, w)| w == v && beeping[u]) {
                Reception::BeepHeard
            } else {
                Reception::NoBeep
            }
        })
        .collect()
}

/// All-pairs distances by Floyd–Warshall over a raw arc list.
pub fn floyd(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<Option<usize>>> {
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(u, v) in arcs {
        d[u][v] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

pub fn bfs(n: usize, arcs: &[(usize, usize)], s: usize) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in arcs {
        adj[u].push(v);
    }
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    dist
}

pub fn ceil_log2(n: usize) -> usize {
    let mut l = 0;
    while (1usize << l) < n {
        l += 1;
    }
    l.max(1)
}

/// Probability that one Decay run with `k` transmitting in-neighbors
/// delivers to the listener: some step `i` in `1..=steps` has exactly one
/// transmitter.
pub fn decay_closed_form(k: usize, steps: usize) -> f64 {
    let mut miss = 1.0;
    for i in 1..=steps {
        let q = 0.5f64.powi(i as i32);
        miss *= 1.0 - k as f64 * q * (1.0 - q).powi(k as i32 - 1);
    }
    1.0 - miss
}

/// The same probability by enumerating every transmit pattern of every
/// step, as an exact fraction over `2^(k * steps * steps)`.
pub fn decay_enumerated(k: usize, steps: usize) -> (u128, u128) {
    // In step i each transmitter fires on i fair coin flips all coming up
    // heads, so one step is a uniform choice among 2^(k*i) outcomes.
    let mut hit_prob_num = Vec::new();
    for i in 1..=steps {
        let outcomes = 1u128 << (k * i);
        let mut exactly_one = 0u128;
        for mask in 0..outcomes {
            let fired = (0..k).filter(|t| (mask >> (t * i)) & ((1 << i) - 1) == (1 << i) - 1).count();
            exactly_one += (fired == 1) as u128;
        }
        hit_prob_num.push((exactly_one, outcomes));
    }
    let (mut miss_num, mut den) = (1u128, 1u128);
    for (hit, total) in hit_prob_num {
        miss_num *= total - hit;
        den *= total;
    }
    (den - miss_num, den)
}

pub fn bs(s: &str) -> Bitstring {
    s.parse().unwrap()
}
