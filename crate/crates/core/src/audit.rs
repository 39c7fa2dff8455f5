//! Trace auditing.
//!
//! Replays every recorded round through the reference channel semantics and
//! checks every recorded primitive invocation against its contract, using
//! the true inputs stored in the trace. Halted nodes are excluded from the
//! contract checks.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::bits::Bitstring;
use crate::channel::{step_beep_actions, step_radio_round, ChannelModel, RoundAction};
use crate::error::Result;
use crate::topology::{NodeId, Topology};
use crate::trace::{Invocation, Primitive, RoundRecord, Trace};

/// Round tag for rounds deliberately outside any primitive.
pub const BOOKKEEPING: &str = "bookkeeping";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Synchrony,
    Channel,
    UnauditedRound,
    DecaySoundness,
    PmbContract,
    SelectionContract,
    SelectionMinRemoval,
    WitnessSoundness,
    SearchOracle,
    BeepWaveExactness,
    BeepWaveNonEmpty,
    BeepWaveWitness,
    SingleHop,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub round: u64,
    /// Primitive the violation belongs to; `channel` for round-level faults.
    pub primitive: String,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub rounds_checked: usize,
    pub invocations_checked: usize,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violation counts keyed by primitive name.
    pub fn counts_by_primitive(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for v in &self.violations {
            *counts.entry(v.primitive.clone()).or_insert(0) += 1;
        }
        counts
    }
}

pub fn audit_jsonl<R: BufRead>(reader: R) -> Result<AuditReport> {
    audit_trace(&Trace::read_jsonl(reader)?)
}

pub fn audit_trace(trace: &Trace) -> Result<AuditReport> {
    let topo = trace.header.topology()?;
    let model = trace.header.model;
    let mut report = AuditReport::default();
    let invocations: Vec<&Invocation> = trace.invocations().collect();

    for r in trace.rounds() {
        report.rounds_checked += 1;
        check_round(&topo, model, r, &mut report.violations);
        let covered = invocations.iter().any(|i| (i.start_round..i.end_round()).contains(&r.round));
        if !covered && r.primitive != BOOKKEEPING {
            report.violations.push(Violation {
                round: r.round,
                primitive: r.primitive.clone(),
                kind: ViolationKind::UnauditedRound,
                detail: "round not inside any recorded invocation".into(),
            });
        }
    }
    for inv in invocations {
        report.invocations_checked += 1;
        check_invocation(&topo, inv, &mut report.violations);
    }
    Ok(report)
}

fn check_round(topo: &Topology, model: ChannelModel, r: &RoundRecord, out: &mut Vec<Violation>) {
    let n = topo.n();
    let mut fault = |kind, detail: String| {
        out.push(Violation { round: r.round, primitive: "channel".into(), kind, detail });
    };
    let in_order = |entries: &[crate::trace::Entry]| {
        entries.len() == n && entries.iter().enumerate().all(|(i, e)| e.node == i)
    };
    if !in_order(&r.actions) || !in_order(&r.receptions) {
        fault(ViolationKind::Synchrony, "not exactly one action and one reception per node".into());
        return;
    }
    let Some(actions) = r.actions.iter().map(|e| e.to_action()).collect::<Option<Vec<RoundAction>>>() else {
        fault(ViolationKind::Channel, "malformed action entry".into());
        return;
    };
    let expected = match model {
        ChannelModel::NoCd => step_radio_round(topo, &actions, false),
        ChannelModel::Cd => step_radio_round(topo, &actions, true),
        ChannelModel::Beep => step_beep_actions(topo, &actions),
    };
    let expected = match expected {
        Ok(e) => e,
        Err(e) => {
            fault(ViolationKind::Channel, e.to_string());
            return;
        }
    };
    let bad: Vec<NodeId> = r
        .receptions
        .iter()
        .zip(&expected)
        .filter(|(got, want)| got.to_reception().as_ref() != Some(*want))
        .map(|(got, _)| got.node)
        .collect();
    if !bad.is_empty() {
        fault(ViolationKind::Channel, format!("receptions disagree with channel semantics at nodes {bad:?}"));
    }
}

struct Ctx<'a> {
    inv: &'a Invocation,
    out: &'a mut Vec<Violation>,
}

impl Ctx<'_> {
    fn flag(&mut self, kind: ViolationKind, detail: String) {
        self.out.push(Violation {
            round: self.inv.start_round,
            primitive: self.inv.primitive.name().into(),
            kind,
            detail,
        });
    }
}

fn check_invocation(topo: &Topology, inv: &Invocation, out: &mut Vec<Violation>) {
    let n = topo.n();
    let mut ctx = Ctx { inv, out };
    if inv.outputs.len() != n {
        ctx.flag(ViolationKind::Synchrony, format!("{} outputs for {n} nodes", inv.outputs.len()));
        return;
    }
    let mut live = vec![true; n];
    for &h in &inv.halted {
        if h < n {
            live[h] = false;
        }
    }
    let live_nodes: Vec<NodeId> = (0..n).filter(|&v| live[v]).collect();
    let payloads: Vec<&Bitstring> = inv.sources.iter().map(|s| &s.payload).collect();
    match inv.primitive {
        Primitive::Decay => {
            for &v in &live_nodes {
                let got = &inv.outputs[v];
                if got.is_empty() {
                    continue;
                }
                let sound = inv.sources.iter().any(|s| topo.has_arc(s.node, v) && s.payload == *got);
                if !sound {
                    ctx.flag(ViolationKind::DecaySoundness, format!("node {v} recorded {got} from no in-neighbor source"));
                }
            }
        }
        Primitive::Pmb => {
            for &v in &live_nodes {
                let m = &inv.outputs[v];
                let ok = if payloads.is_empty() { m.is_empty() } else { payloads.contains(&m) };
                if !ok {
                    ctx.flag(ViolationKind::PmbContract, format!("node {v} holds {m:?}"));
                }
            }
        }
        Primitive::Selection => check_selection(&mut ctx, &live_nodes),
        Primitive::Search => {
            let Some(len) = inv.length else {
                ctx.flag(ViolationKind::SearchOracle, "missing prefix length".into());
                return;
            };
            if let Some(max) = payloads.iter().max() {
                let want = max.prefix(len);
                let wrong: Vec<NodeId> = live_nodes.iter().copied().filter(|&v| inv.outputs[v] != want).collect();
                if !wrong.is_empty() {
                    ctx.flag(ViolationKind::SearchOracle, format!("expected {want} but nodes {wrong:?} disagree"));
                }
            }
        }
        Primitive::BeepWave => check_beep_wave(&mut ctx, topo, &live_nodes),
        Primitive::SingleHop => {
            let want = match inv.sources.as_slice() {
                [only] => Some(&only.payload),
                _ => None,
            };
            for &v in &live_nodes {
                let is_sender = inv.sources.iter().any(|s| s.node == v);
                let ok = match want {
                    Some(id) if !is_sender => inv.outputs[v] == *id,
                    _ => inv.outputs[v].is_empty(),
                };
                if !ok {
                    ctx.flag(ViolationKind::SingleHop, format!("node {v} received {:?}", inv.outputs[v]));
                }
            }
        }
    }
}

fn check_selection(ctx: &mut Ctx<'_>, live: &[NodeId]) {
    let inv = ctx.inv;
    let mut ids: Vec<&Bitstring> = inv.sources.iter().map(|s| &s.payload).collect();
    ids.sort();
    let flags = &inv.flags;
    if flags.len() != inv.outputs.len() {
        ctx.flag(ViolationKind::SelectionContract, "missing output bits".into());
        return;
    }
    for w in &inv.witnesses {
        let sound = w.held != w.received
            && w.bit < w.held.len()
            && w.bit < w.received.len()
            && !w.held.get(w.bit)
            && w.received.get(w.bit);
        if !sound {
            ctx.flag(ViolationKind::WitnessSoundness, format!("witness {} at bit {} without two distinct IDs", w.node, w.bit));
        }
    }
    match ids.len() {
        0 => {
            for &v in live {
                if !inv.outputs[v].is_empty() || flags[v] {
                    ctx.flag(ViolationKind::SelectionContract, format!("node {v} output ({:?},{}) with no candidates", inv.outputs[v], flags[v] as u8));
                }
            }
        }
        1 => {
            for &v in live {
                if inv.outputs[v] != *ids[0] || !flags[v] {
                    ctx.flag(ViolationKind::SelectionContract, format!("node {v} output ({:?},{}) with a sole candidate", inv.outputs[v], flags[v] as u8));
                }
            }
        }
        _ => {
            // IDs of S minus the argmin candidate
            let allowed = &ids[1..];
            for &v in live {
                let m = &inv.outputs[v];
                if flags[v] {
                    ctx.flag(ViolationKind::SelectionContract, format!("node {v} output b=1 with {} candidates", ids.len()));
                } else if m == ids[0] && !allowed.contains(&m) {
                    ctx.flag(ViolationKind::SelectionMinRemoval, format!("node {v} output the minimum ID {m}"));
                } else if !allowed.contains(&m) {
                    ctx.flag(ViolationKind::SelectionContract, format!("node {v} output {m:?}, not a candidate ID"));
                }
            }
        }
    }
}

fn check_beep_wave(ctx: &mut Ctx<'_>, topo: &Topology, live: &[NodeId]) {
    let inv = ctx.inv;
    let n = topo.n();
    match inv.sources.as_slice() {
        [] => {
            let wrong: Vec<NodeId> = live.iter().copied().filter(|&v| !inv.outputs[v].is_empty()).collect();
            if !wrong.is_empty() || inv.first_beep.iter().any(Option::is_some) {
                ctx.flag(ViolationKind::BeepWaveExactness, format!("beeps without sources; non-empty at {wrong:?}"));
            }
        }
        [s] => {
            let wrong: Vec<NodeId> = live.iter().copied().filter(|&v| inv.outputs[v] != s.payload).collect();
            if !wrong.is_empty() {
                ctx.flag(ViolationKind::BeepWaveExactness, format!("nodes {wrong:?} did not decode {}", s.payload));
            }
            if live.len() == n && inv.first_beep.len() == n {
                let dist = topo.distances_from(s.node);
                let late: Vec<NodeId> = (0..n)
                    .filter(|&v| inv.first_beep[v] != dist[v].map(|d| d as u64))
                    .collect();
                if !late.is_empty() {
                    ctx.flag(ViolationKind::BeepWaveExactness, format!("first beep differs from distance at {late:?}"));
                }
            }
        }
        sources => {
            let empty: Vec<NodeId> = live.iter().copied().filter(|&v| inv.outputs[v].is_empty()).collect();
            if !empty.is_empty() {
                ctx.flag(ViolationKind::BeepWaveNonEmpty, format!("nodes {empty:?} decoded ε"));
            }
            if live.len() == n {
                let witnessed = (0..sources.len()).any(|a| {
                    (a + 1..sources.len()).any(|b| {
                        let joint = sources[a].payload.or(&sources[b].payload);
                        inv.outputs.iter().any(|m| joint.is_covered_by(m))
                    })
                });
                if !witnessed {
                    ctx.flag(ViolationKind::BeepWaveWitness, "no node decoded the OR of two source payloads".into());
                }
            }
        }
    }
}
