//! Lockstep round engine.
//!
//! Protocols drive a [`Sim`] one round at a time. Each round every node
//! either transmits (beeps) or listens; the engine resolves the channel,
//! advances the global clock, and records the round when tracing at
//! [`TraceLevel::Full`]. Halted nodes are forced to listen.

use crate::bits::Bitstring;
use crate::channel::{ChannelModel, Reception, RoundAction};
use crate::error::{Error, Result};
use crate::rng::{NodeRng, Stream};
use crate::topology::{NodeId, Topology};
use crate::trace::{Entry, Header, Invocation, Record, RoundRecord, Trace, TraceLevel};

pub const DEFAULT_ROUND_CAP: u64 = 10_000_000;

/// Sparse radio reception. Nodes not listed heard silence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rx {
    Message { from: NodeId },
    Collision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Tag {
    primitive: &'static str,
    phase: &'static str,
    iteration: u32,
}

pub struct Sim<'t> {
    topo: &'t Topology,
    model: ChannelModel,
    seed: u64,
    round: u64,
    cap: u64,
    halted: Vec<bool>,
    halted_count: usize,
    level: TraceLevel,
    trace: Trace,
    tag: Tag,
    iteration: u32,
    // scratch for sparse resolution
    hits: Vec<u32>,
    sender: Vec<NodeId>,
    active_tx: Vec<bool>,
    touched: Vec<NodeId>,
    filtered: Vec<NodeId>,
}

impl<'t> Sim<'t> {
    pub fn new(topo: &'t Topology, model: ChannelModel, seed: u64, level: TraceLevel) -> Result<Self> {
        Self::with_header(topo, model, seed, level, Header::new("custom", topo, model, seed))
    }

    pub fn with_header(
        topo: &'t Topology,
        model: ChannelModel,
        seed: u64,
        level: TraceLevel,
        header: Header,
    ) -> Result<Self> {
        if model == ChannelModel::Beep && topo.is_directed() {
            return Err(Error::ModelMismatch("beep semantics require an undirected topology".into()));
        }
        let n = topo.n();
        Ok(Self {
            topo,
            model,
            seed,
            round: 0,
            cap: DEFAULT_ROUND_CAP,
            halted: vec![false; n],
            halted_count: 0,
            level,
            trace: Trace::new(header),
            tag: Tag { primitive: "", phase: "", iteration: 0 },
            iteration: 0,
            hits: vec![0; n],
            sender: vec![0; n],
            active_tx: vec![false; n],
            touched: Vec::new(),
            filtered: Vec::new(),
        })
    }

    pub fn set_round_cap(&mut self, cap: u64) {
        self.cap = cap;
    }

    pub fn topology(&self) -> &'t Topology {
        self.topo
    }

    pub fn n(&self) -> usize {
        self.topo.n()
    }

    pub fn model(&self) -> ChannelModel {
        self.model
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index of the next round to execute, which is also the number of
    /// rounds executed so far.
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Outer protocol iteration, stamped on invocation records.
    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn set_iteration(&mut self, iteration: u32) {
        self.iteration = iteration;
    }

    /// Generator for `node`'s draws in the upcoming round.
    pub fn rng(&self, node: NodeId, stream: Stream) -> NodeRng {
        NodeRng::new(self.seed, node, self.round, stream)
    }

    pub fn halt(&mut self, node: NodeId) {
        if !self.halted[node] {
            self.halted[node] = true;
            self.halted_count += 1;
        }
    }

    pub fn is_halted(&self, node: NodeId) -> bool {
        self.halted[node]
    }

    pub fn all_halted(&self) -> bool {
        self.halted_count == self.n()
    }

    pub fn halted_nodes(&self) -> Vec<NodeId> {
        (0..self.n()).filter(|&v| self.halted[v]).collect()
    }

    pub fn set_primitive(&mut self, primitive: &'static str) {
        self.tag = Tag { primitive, phase: primitive, iteration: 0 };
    }

    pub fn set_phase(&mut self, phase: &'static str, iteration: u32) {
        self.tag.phase = phase;
        self.tag.iteration = iteration;
    }

    pub fn trace_level(&self) -> TraceLevel {
        self.level
    }

    pub fn records_invocations(&self) -> bool {
        self.level >= TraceLevel::Invocations
    }

    pub fn record_invocation(&mut self, inv: Invocation) {
        if self.records_invocations() {
            self.trace.records.push(Record::Invocation(inv));
        }
    }

    pub fn header_mut(&mut self) -> &mut Header {
        &mut self.trace.header
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn into_trace(self) -> Trace {
        self.trace
    }

    fn tick(&mut self) -> Result<()> {
        if self.round >= self.cap {
            return Err(Error::RoundCap { cap: self.cap, trace: Box::new(self.trace.clone()) });
        }
        Ok(())
    }

    fn live<'a>(&'a mut self, nodes: &'a [NodeId]) -> &'a [NodeId] {
        if self.halted_count == 0 {
            return nodes;
        }
        self.filtered.clear();
        self.filtered.extend(nodes.iter().copied().filter(|&v| !self.halted[v]));
        &self.filtered
    }

    /// One radio round. `transmitters` send `payload_of(v)`; everyone else
    /// listens. Non-silent receptions are written to `out`.
    pub fn radio_round<F>(&mut self, transmitters: &[NodeId], payload_of: F, out: &mut Vec<(NodeId, Rx)>) -> Result<()>
    where
        F: Fn(NodeId) -> Bitstring,
    {
        if !self.model.is_radio() {
            return Err(Error::ModelMismatch("radio round under beep semantics".into()));
        }
        self.tick()?;
        out.clear();
        let cd = self.model == ChannelModel::Cd;
        let tx: Vec<NodeId> = self.live(transmitters).to_vec();
        for &u in &tx {
            self.active_tx[u] = true;
        }
        for &u in &tx {
            for &w in self.topo.out_neighbors(u) {
                if self.hits[w] == 0 {
                    self.touched.push(w);
                }
                self.hits[w] += 1;
                self.sender[w] = u;
            }
        }
        self.touched.sort_unstable();
        for &w in &self.touched {
            if self.active_tx[w] {
                continue;
            }
            match self.hits[w] {
                1 => out.push((w, Rx::Message { from: self.sender[w] })),
                _ if cd => out.push((w, Rx::Collision)),
                _ => {}
            }
        }
        if self.level == TraceLevel::Full {
            let n = self.n();
            let mut actions = vec![RoundAction::Listen; n];
            for &u in &tx {
                actions[u] = RoundAction::Transmit(payload_of(u));
            }
            let mut receptions = vec![Reception::Silence; n];
            for &(w, rx) in out.iter() {
                receptions[w] = match rx {
                    Rx::Message { from } => Reception::Message(payload_of(from)),
                    Rx::Collision => Reception::Collision,
                };
            }
            self.push_round(&actions, &receptions);
        }
        for &w in &self.touched {
            self.hits[w] = 0;
        }
        self.touched.clear();
        for &u in &tx {
            self.active_tx[u] = false;
        }
        self.round += 1;
        Ok(())
    }

    /// One beep round. Silent nodes that hear at least one neighbor are
    /// written to `heard`.
    pub fn beep_round(&mut self, beepers: &[NodeId], heard: &mut Vec<NodeId>) -> Result<()> {
        if self.model != ChannelModel::Beep {
            return Err(Error::ModelMismatch("beep round under radio semantics".into()));
        }
        self.tick()?;
        heard.clear();
        let tx: Vec<NodeId> = self.live(beepers).to_vec();
        for &u in &tx {
            self.active_tx[u] = true;
        }
        for &u in &tx {
            for &w in self.topo.out_neighbors(u) {
                if self.hits[w] == 0 {
                    self.hits[w] = 1;
                    self.touched.push(w);
                }
            }
        }
        self.touched.sort_unstable();
        heard.extend(self.touched.iter().copied().filter(|&w| !self.active_tx[w]));
        if self.level == TraceLevel::Full {
            let n = self.n();
            let mut actions = vec![RoundAction::Silent; n];
            for &u in &tx {
                actions[u] = RoundAction::Beep;
            }
            let mut receptions = vec![Reception::NoBeep; n];
            for &w in heard.iter() {
                receptions[w] = Reception::BeepHeard;
            }
            self.push_round(&actions, &receptions);
        }
        for &w in &self.touched {
            self.hits[w] = 0;
        }
        self.touched.clear();
        for &u in &tx {
            self.active_tx[u] = false;
        }
        self.round += 1;
        Ok(())
    }

    fn push_round(&mut self, actions: &[RoundAction], receptions: &[Reception]) {
        let record = RoundRecord {
            round: self.round,
            primitive: self.tag.primitive.to_string(),
            phase: self.tag.phase.to_string(),
            iteration: self.tag.iteration,
            actions: actions.iter().enumerate().map(|(v, a)| Entry::from_action(v, a)).collect(),
            receptions: receptions.iter().enumerate().map(|(v, r)| Entry::from_reception(v, r)).collect(),
        };
        self.trace.records.push(Record::Round(record));
    }
}
