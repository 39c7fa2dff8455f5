// Acceptance criteria. Runs without the libtest harness so every criterion
// prints exactly one PASS/FAIL line, followed by indented detail lines.
// Pass criterion numbers as arguments to run a subset:
//   cargo test --release --test acceptance -- 3 8

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::{bfs, bs, ceil_log2, decay_closed_form};
use radio_leader::audit::{audit_trace, ViolationKind};
use radio_leader::harness::{run_sweep, ExperimentSpec};
use radio_leader::prims::{beep_wave, decay4, search, selection, Schedule};
use radio_leader::trace::{Header, Invocation, Primitive, Record, SourceEntry, Trace};
use radio_leader::{
    build_topology, run_protocol, Bitstring, ChannelModel, Family, Protocol, ProtocolSpec, Sim, Topology,
    TopologySpec, TraceLevel,
};
use rand::rngs::StdRng;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};

// Tolerances, all pinned here.
const DECAY_TOLERANCE: f64 = 0.03;
const GEOMETRIC_MEAN_RANGE: (f64, f64) = (2.5, 2.95);
const ELECTION_MIN_SUCCESS: f64 = 0.995;
const SELECTION_MIN_RATE: f64 = 0.99;
const SEARCH_MIN_RATE: f64 = 0.99;
const BEEP_SCALING_RANGE: (f64, f64) = (1.7, 2.3);

type Criterion = (u32, &'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>, details: Vec<String>) -> Self {
        Self { pass, summary: summary.into(), details }
    }
}

fn topo(family: Family, n: usize, p: f64, seed: u64) -> Topology {
    build_topology(&TopologySpec::new(family, n).with_p(p).with_seed(seed)).unwrap()
}

fn random_bits(rng: &mut StdRng, len: usize) -> Bitstring {
    Bitstring::from_bits((0..len).map(|_| rng.random_bool(0.5)))
}

/// Distinct random IDs for `k` distinct random nodes.
fn random_candidates(rng: &mut StdRng, n: usize, k: usize, id_len: usize) -> Vec<(usize, Bitstring)> {
    let nodes = sample(rng, n, k).into_vec();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in nodes {
        loop {
            let id = random_bits(rng, id_len);
            if seen.insert(id.clone()) {
                out.push((v, id));
                break;
            }
        }
    }
    out
}

fn criterion_1() -> Verdict {
    let mut rng = StdRng::seed_from_u64(101);
    let mut graphs: Vec<Topology> = Vec::new();
    for n in [2, 17, 64, 200, 512] {
        graphs.push(topo(Family::Path, n, 0.0, 0));
        graphs.push(topo(Family::Grid, n, 0.0, 0));
    }
    for i in 0..100 {
        let n = rng.random_range(2..=512);
        let p = rng.random_range(0.0..(4.0 / n as f64));
        graphs.push(topo(Family::RandomUndirected, n, p, 1000 + i));
    }
    let mut failures = Vec::new();
    let mut checks = 0;
    for t in &graphs {
        let sched = Schedule::new(t.n(), t.eccentricity(), 4);
        let len = rng.random_range(1..=32);
        let f = random_bits(&mut rng, len);
        let s = rng.random_range(0..t.n());
        let mut sim = Sim::new(t, ChannelModel::Beep, 0, TraceLevel::Off).unwrap();
        let out = beep_wave(&mut sim, &sched, &[(s, f.clone())], len).unwrap();
        let dist = bfs(t.n(), &t.arcs(), s);
        checks += 1;
        let exact = out.outputs.iter().all(|m| *m == f);
        let timed = (0..t.n()).all(|v| out.first_beep[v] == dist[v].map(|d| d as u64));
        if !(exact && timed) {
            failures.push(format!("{} n={} source={s}: exact={exact} timing={timed}", t.label(), t.n()));
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("{checks} single-source waves, {} failures", failures.len()),
        failures,
    )
}

/// Every labelled connected graph on `n` nodes, as edge lists.
fn connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let mut reach = 1u32;
        loop {
            let next = edges.iter().fold(reach, |acc, &(u, v)| {
                if acc >> u & 1 == 1 || acc >> v & 1 == 1 {
                    acc | 1 << u | 1 << v
                } else {
                    acc
                }
            });
            if next == reach {
                break;
            }
            reach = next;
        }
        if reach == (1 << n) - 1 {
            out.push(edges);
        }
    }
    out
}

fn criterion_2() -> Verdict {
    let mut rng = StdRng::seed_from_u64(202);
    let (mut instances, mut graphs) = (0u64, 0);
    let mut failures = Vec::new();
    for n in 2..=6 {
        for edges in connected_graphs(n) {
            graphs += 1;
            let t = Topology::from_edges(n, &edges, false).unwrap();
            let sched = Schedule::new(n, t.eccentricity(), 4);
            for u in 0..n {
                for v in u + 1..n {
                    for _ in 0..20 {
                        let (fu, fv) = (random_bits(&mut rng, 4), random_bits(&mut rng, 4));
                        let mut sim = Sim::new(&t, ChannelModel::Beep, 0, TraceLevel::Off).unwrap();
                        let out = beep_wave(&mut sim, &sched, &[(u, fu.clone()), (v, fv.clone())], 4).unwrap();
                        let joint = fu.or(&fv);
                        instances += 1;
                        let witnessed = out.outputs.iter().any(|m| joint.is_covered_by(m));
                        let nonempty = out.outputs.iter().all(|m| !m.is_empty());
                        if (!witnessed || !nonempty) && failures.len() < 10 {
                            failures.push(format!("edges {edges:?} sources {u}:{fu} {v}:{fv}"));
                        }
                    }
                }
            }
        }
    }
    Verdict::new(
        failures.is_empty(),
        format!("{graphs} connected graphs, {instances} two-source waves, {} failures", failures.len()),
        failures,
    )
}

fn criterion_3() -> Verdict {
    let n = 256;
    let trials = 10_000;
    let t = topo(Family::Star, n, 0.0, 0);
    let sched = Schedule::new(n, t.eccentricity(), 4);
    let mut pass = true;
    let mut details = Vec::new();
    for k in [1, 2, 4, 16] {
        let sources: Vec<_> = (1..=k).map(|v| (v, Bitstring::from_u64(v as u64, 8))).collect();
        let mut hits = 0;
        for seed in 0..trials {
            let mut sim = Sim::new(&t, ChannelModel::NoCd, seed, TraceLevel::Off).unwrap();
            hits += decay4(&mut sim, &sched, &sources).unwrap()[0].is_some() as u32;
        }
        let exact = 1.0 - (1.0 - decay_closed_form(k, ceil_log2(n))).powi(4);
        let freq = hits as f64 / trials as f64;
        let ok = (freq - exact).abs() <= DECAY_TOLERANCE;
        pass &= ok;
        details.push(format!("k={k:<2} empirical {freq:.4} exact {exact:.4} {}", if ok { "ok" } else { "OUT" }));
    }
    Verdict::new(pass, format!("decay4 at the hub of a 256-star within ±{DECAY_TOLERANCE}"), details)
}

fn criterion_4() -> Verdict {
    let n = 256;
    let runs = 2000;
    let q = (1.0 - 1.0 / n as f64).powi(n as i32 - 1);
    let mut pass = true;
    let mut details = vec![format!("exact mean 1/q = {:.4}", 1.0 / q)];
    for (protocol, family) in [
        (Protocol::Expected, Family::Star),
        (Protocol::Beep, Family::Star),
        (Protocol::SingleHop, Family::Complete),
    ] {
        let t = topo(family, n, 0.0, 0);
        let spec = ProtocolSpec::new(protocol);
        let mut total = 0u64;
        for seed in 0..runs {
            total += run_protocol(&t, &spec, seed).unwrap().0.iterations as u64;
        }
        let mean = total as f64 / runs as f64;
        let ok = (GEOMETRIC_MEAN_RANGE.0..=GEOMETRIC_MEAN_RANGE.1).contains(&mean);
        pass &= ok;
        details.push(format!("{:<10} on {:<8} mean iterations {mean:.4} {}", protocol.name(), family.name(), if ok { "ok" } else { "OUT" }));
    }
    Verdict::new(
        pass,
        format!("mean iterations at n=256 in [{}, {}]", GEOMETRIC_MEAN_RANGE.0, GEOMETRIC_MEAN_RANGE.1),
        details,
    )
}

fn criterion_5() -> Verdict {
    let runs = 1000;
    let mut pass = true;
    let mut details = Vec::new();
    let mut cells = Vec::new();
    for protocol in [Protocol::Expected, Protocol::Whp, Protocol::Beep] {
        for family in [Family::Path, Family::Grid, Family::RandomDigraph, Family::RandomUndirected] {
            if family == Family::RandomDigraph && protocol == Protocol::Beep {
                continue;
            }
            cells.push((protocol, family));
        }
    }
    // not in the grid above, which needs multi-hop graphs
    cells.push((Protocol::SingleHop, Family::Complete));
    for (protocol, family) in cells {
        for n in [16, 64, 256] {
            let p = (2.0 * (n as f64).ln() / n as f64).min(1.0);
            let t = topo(family, n, p, n as u64);
            let spec = ProtocolSpec::new(protocol).with_trace(TraceLevel::Invocations);
            let (mut ok, mut explained, mut duplicate_ids, mut dirty_successes) = (0, 0, 0, 0);
            let mut kinds = BTreeSet::new();
            for seed in 0..runs {
                let (outcome, trace) = run_protocol(&t, &spec, seed).unwrap();
                let report = audit_trace(&trace).unwrap();
                if outcome.success {
                    ok += 1;
                    dirty_successes += !report.is_clean() as u32;
                } else if !report.is_clean() {
                    explained += 1;
                    kinds.extend(report.violations.iter().map(|v| format!("{:?}", v.kind)));
                } else {
                    // not a primitive fault: did two candidates draw the same ID?
                    let last = trace.invocations().find(|i| i.iteration == outcome.iterations);
                    let ids: Vec<_> = last.map(|i| i.sources.iter().map(|s| &s.payload).collect()).unwrap_or_default();
                    duplicate_ids += (ids.iter().collect::<BTreeSet<_>>().len() < ids.len()) as u32;
                }
            }
            let rate = ok as f64 / runs as f64;
            let failures = runs as u32 - ok;
            let cell_ok = rate >= ELECTION_MIN_SUCCESS && explained == failures;
            pass &= cell_ok;
            details.push(format!(
                "{:<10} {:<17} n={n:<3} D={:<3} success {rate:.3}  failures {failures} ({explained} explained{}){}{}  {}",
                protocol.name(),
                family.name(),
                t.eccentricity(),
                if kinds.is_empty() { String::new() } else { format!(": {}", kinds.into_iter().collect::<Vec<_>>().join(", ")) },
                if duplicate_ids > 0 { format!("  {duplicate_ids} unexplained with duplicate candidate IDs") } else { String::new() },
                if dirty_successes > 0 { format!("  {dirty_successes} successes with violations") } else { String::new() },
                if cell_ok { "ok" } else { "OUT" }
            ));
        }
    }
    Verdict::new(pass, format!("success rate ≥ {ELECTION_MIN_SUCCESS} per cell, every failure audited"), details)
}

fn criterion_6() -> Verdict {
    let trials = 500;
    let t = topo(Family::RandomDigraph, 48, 0.05, 6);
    let sched = Schedule::new(t.n(), t.eccentricity(), 4);
    let id_len = 12;
    let mut rng = StdRng::seed_from_u64(606);
    let mut pass = true;
    let mut details = Vec::new();
    for k in 0..=8 {
        let mut good = 0;
        for trial in 0..trials {
            let cands = random_candidates(&mut rng, t.n(), k, id_len);
            let mut sim = Sim::new(&t, ChannelModel::NoCd, trial, TraceLevel::Off).unwrap();
            let out = selection(&mut sim, &sched, &cands, id_len).unwrap();
            let mut ids: Vec<&Bitstring> = cands.iter().map(|(_, id)| id).collect();
            ids.sort();
            let met = match k {
                0 => out.iter().all(|o| o.m.is_empty() && !o.b),
                1 => out.iter().all(|o| o.m == *ids[0] && o.b),
                _ => out.iter().all(|o| !o.b && ids[1..].contains(&&o.m)),
            };
            good += met as u32;
        }
        let rate = good as f64 / trials as f64;
        let ok = if k == 0 { good == trials as u32 } else { rate >= SELECTION_MIN_RATE };
        pass &= ok;
        details.push(format!("|S|={k}: contract met in {good}/{trials} {}", if ok { "ok" } else { "OUT" }));
    }
    Verdict::new(pass, format!("selection contract (|S|=0 always, otherwise ≥ {SELECTION_MIN_RATE})"), details)
}

fn criterion_7() -> Verdict {
    let trials = 500;
    let t = topo(Family::RandomDigraph, 48, 0.05, 7);
    let sched = Schedule::new(t.n(), t.eccentricity(), 4);
    let (id_len, prefix_len) = (12, 4);
    let mut rng = StdRng::seed_from_u64(707);
    let mut good = 0;
    for trial in 0..trials {
        let k = rng.random_range(1..=16);
        let nodes = sample(&mut rng, t.n(), k).into_vec();
        let cands: Vec<_> = nodes.into_iter().map(|v| (v, random_bits(&mut rng, id_len))).collect();
        let want = cands.iter().map(|(_, id)| id).max().unwrap().prefix(prefix_len);
        let mut sim = Sim::new(&t, ChannelModel::NoCd, trial, TraceLevel::Off).unwrap();
        let out = search(&mut sim, &sched, &cands, prefix_len).unwrap();
        good += out.iter().all(|m| *m == want) as u32;
    }
    let rate = good as f64 / trials as f64;
    Verdict::new(
        rate >= SEARCH_MIN_RATE,
        format!("search matched the max-ID prefix oracle in {good}/{trials} (need ≥ {SEARCH_MIN_RATE})"),
        vec![],
    )
}

fn criterion_8() -> Verdict {
    let runs = 10_000;
    let spec = ProtocolSpec::new(Protocol::Beep);
    let mut means = Vec::new();
    let mut details = Vec::new();
    for d in [64usize, 128, 256, 512] {
        let t = topo(Family::Path, d + 1, 0.0, 0);
        let mut total = 0u64;
        let mut iterations = 0u64;
        for seed in 0..runs {
            let (outcome, _) = run_protocol(&t, &spec, seed).unwrap();
            total += outcome.rounds;
            iterations += outcome.iterations as u64;
        }
        let log_n = ceil_log2(d + 1);
        let per_iteration = (d + 3 * (4 * log_n + 1) + 2) + (d + 3 * 2 + 2);
        let mean = total as f64 / runs as f64;
        details.push(format!(
            "D={d:<3} mean rounds {mean:>8.1}  mean iterations {:.3}  rounds per iteration {per_iteration}",
            iterations as f64 / runs as f64
        ));
        means.push((mean, per_iteration as f64));
    }
    let mut pass = true;
    for w in means.windows(2) {
        let ratio = w[1].0 / w[0].0;
        let predicted = w[1].1 / w[0].1;
        let ok = (BEEP_SCALING_RANGE.0..=BEEP_SCALING_RANGE.1).contains(&ratio);
        pass &= ok;
        details.push(format!(
            "ratio {ratio:.3} (iteration-length ratio {predicted:.3}) {}",
            if ok { "ok" } else { "OUT" }
        ));
    }

    // expected-time protocol against its own (D + log n)·log n schedule
    for d in [64usize, 128] {
        let t = topo(Family::Path, d + 1, 0.0, 0);
        let (outcome, _) = run_protocol(&t, &ProtocolSpec::new(Protocol::Expected), 1).unwrap();
        let log_n = ceil_log2(d + 1) as u64;
        let per_iteration = 2 * 4 * (d as u64 + log_n) * log_n + 16 * log_n * 4 * log_n;
        let exact = outcome.rounds == outcome.iterations as u64 * per_iteration;
        pass &= exact;
        details.push(format!(
            "expected on path D={d}: {} rounds = {} iterations × {per_iteration} {}",
            outcome.rounds,
            outcome.iterations,
            if exact { "ok" } else { "OUT" }
        ));
    }
    Verdict::new(
        pass,
        format!("beep rounds(2D)/rounds(D) in [{}, {}] on paths", BEEP_SCALING_RANGE.0, BEEP_SCALING_RANGE.1),
        details,
    )
}

fn criterion_9() -> Verdict {
    let mut details = Vec::new();
    let mut pass = true;
    let mut check = |ok: bool, what: &str| {
        pass &= ok;
        details.push(format!("{what}: {}", if ok { "ok" } else { "OUT" }));
    };

    for (protocol, family) in [
        (Protocol::Expected, Family::RandomDigraph),
        (Protocol::Whp, Family::Grid),
        (Protocol::Beep, Family::RandomUndirected),
        (Protocol::SingleHop, Family::Complete),
    ] {
        let t = topo(family, 24, 0.1, 9);
        let spec = ProtocolSpec::new(protocol).with_trace(TraceLevel::Full);
        let a = run_protocol(&t, &spec, 77).unwrap().1.to_jsonl_string();
        let b = run_protocol(&t, &spec, 77).unwrap().1.to_jsonl_string();
        check(a == b, &format!("{} trace bytes identical", protocol.name()));
    }

    let sweep = ExperimentSpec::from_toml(
        "protocol = \"beep\"\nfamilies = [\"path\", \"random-undirected\"]\nn = [12, 20]\np = [0.2]\ntrials = 10\nseed = 9",
    )
    .unwrap();
    let (a, b) = (run_sweep(&sweep).unwrap(), run_sweep(&sweep).unwrap());
    check(a.stats_csv_string() == b.stats_csv_string(), "sweep stats bytes identical");

    // a corrupted reception
    let t = topo(Family::Grid, 16, 0.0, 0);
    let spec = ProtocolSpec::new(Protocol::Expected).with_trace(TraceLevel::Full);
    let (_, mut trace) = run_protocol(&t, &spec, 3).unwrap();
    check(audit_trace(&trace).unwrap().is_clean(), "clean trace audits clean");
    let mut planted = None;
    for r in trace.records.iter_mut() {
        if let Record::Round(round) = r {
            if let Some(e) = round.receptions.iter_mut().find(|e| e.kind == "message") {
                e.kind = "silence".into();
                e.payload = None;
                planted = Some(round.round);
                break;
            }
        }
    }
    let report = audit_trace(&trace).unwrap();
    check(
        report.violations.len() == 1
            && report.violations[0].kind == ViolationKind::Channel
            && Some(report.violations[0].round) == planted,
        "corrupted reception flagged exactly once at its round",
    );

    // every node outputs the minimum ID
    let mut fixture = Trace::new(Header::new("fixture", &t, ChannelModel::NoCd, 0));
    let mut inv = Invocation::new(Primitive::Selection, 40, 10, 1);
    inv.sources = vec![SourceEntry { node: 2, payload: bs("0011") }, SourceEntry { node: 9, payload: bs("1010") }];
    inv.outputs = vec![bs("0011"); 16];
    inv.flags = vec![false; 16];
    fixture.records.push(Record::Invocation(inv));
    let report = audit_trace(&fixture).unwrap();
    check(
        report.violations.len() == 16
            && report.violations.iter().all(|v| v.kind == ViolationKind::SelectionMinRemoval && v.round == 40),
        "min-ID selection outputs flagged",
    );
    Verdict::new(pass, "determinism and planted-fault audit", details)
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "beep-wave exactness", criterion_1),
        (2, "beep-wave witness", criterion_2),
        (3, "decay success probability", criterion_3),
        (4, "geometric outer loop", criterion_4),
        (5, "election correctness", criterion_5),
        (6, "selection contract", criterion_6),
        (7, "search oracle", criterion_7),
        (8, "beep-model scaling", criterion_8),
        (9, "determinism and audit", criterion_9),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let verdict = run();
        println!(
            "{} criterion {id} ({name}): {} [{:.1}s]",
            if verdict.pass { "PASS" } else { "FAIL" },
            verdict.summary,
            start.elapsed().as_secs_f64()
        );
        for line in &verdict.details {
            println!("    {line}");
        }
        if !verdict.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
