//! Run traces and their JSON Lines encoding.
//!
//! A serialized trace is one header line followed by round and invocation
//! records in execution order. Every record carries a `record` tag. Field
//! order is fixed by the struct definitions, so identical runs serialize to
//! identical bytes.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::bits::Bitstring;
use crate::channel::{ChannelModel, Reception, RoundAction};
use crate::error::{Error, Result};
use crate::topology::{NodeId, Topology};

/// How much of a run to record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum TraceLevel {
    /// Header only.
    #[default]
    Off,
    /// Header plus one record per top-level primitive invocation.
    Invocations,
    /// Everything, including every round's actions and receptions.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub protocol: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub seed: u64,
    pub n: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub model: ChannelModel,
    pub directed: bool,
    pub edges: Vec<(NodeId, NodeId)>,
}

impl Header {
    pub fn new(protocol: &str, topo: &Topology, model: ChannelModel, seed: u64) -> Self {
        Self {
            protocol: protocol.to_string(),
            params: BTreeMap::new(),
            seed,
            n: topo.n(),
            d: topo.eccentricity(),
            model,
            directed: topo.is_directed(),
            edges: topo.arcs(),
        }
    }

    pub fn topology(&self) -> Result<Topology> {
        Topology::from_edges(self.n, &self.edges, self.directed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub node: NodeId,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<Bitstring>,
}

impl Entry {
    pub fn from_action(node: NodeId, a: &RoundAction) -> Self {
        let payload = match a {
            RoundAction::Transmit(p) => Some(p.clone()),
            _ => None,
        };
        Self { node, kind: a.kind().to_string(), payload }
    }

    pub fn from_reception(node: NodeId, r: &Reception) -> Self {
        let payload = match r {
            Reception::Message(p) => Some(p.clone()),
            _ => None,
        };
        Self { node, kind: r.kind().to_string(), payload }
    }

    pub fn to_action(&self) -> Option<RoundAction> {
        Some(match (self.kind.as_str(), &self.payload) {
            ("transmit", Some(p)) => RoundAction::Transmit(p.clone()),
            ("listen", None) => RoundAction::Listen,
            ("beep", None) => RoundAction::Beep,
            ("silent", None) => RoundAction::Silent,
            _ => return None,
        })
    }

    pub fn to_reception(&self) -> Option<Reception> {
        Some(match (self.kind.as_str(), &self.payload) {
            ("message", Some(p)) => Reception::Message(p.clone()),
            ("silence", None) => Reception::Silence,
            ("collision", None) => Reception::Collision,
            ("beep_heard", None) => Reception::BeepHeard,
            ("no_beep", None) => Reception::NoBeep,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub primitive: String,
    pub phase: String,
    pub iteration: u32,
    pub actions: Vec<Entry>,
    pub receptions: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    Decay,
    Pmb,
    Selection,
    Search,
    BeepWave,
    SingleHop,
}

impl Primitive {
    pub const ALL: [Primitive; 6] = [
        Primitive::Decay,
        Primitive::Pmb,
        Primitive::Selection,
        Primitive::Search,
        Primitive::BeepWave,
        Primitive::SingleHop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Primitive::Decay => "decay",
            Primitive::Pmb => "pmb",
            Primitive::Selection => "selection",
            Primitive::Search => "search",
            Primitive::BeepWave => "beep_wave",
            Primitive::SingleHop => "single_hop",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceEntry {
    pub node: NodeId,
    pub payload: Bitstring,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub node: NodeId,
    /// The node's kept string when it became a witness.
    pub held: Bitstring,
    /// The largest string it received in the decay phase for that bit.
    pub received: Bitstring,
    pub bit: usize,
}

/// Summary of one top-level primitive call: its inputs, per-node outputs,
/// and whatever internal evidence the auditor needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invocation {
    pub primitive: Primitive,
    pub start_round: u64,
    pub duration: u64,
    pub iteration: u32,
    pub sources: Vec<SourceEntry>,
    pub halted: Vec<NodeId>,
    pub outputs: Vec<Bitstring>,
    /// Selection output bit `b`, per node.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessEntry>,
    /// Beep-wave only: round (relative to start) of each node's first beep.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub first_beep: Vec<Option<u64>>,
    /// Payload / prefix length ℓ where the primitive takes one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
}

impl Invocation {
    pub fn new(primitive: Primitive, start_round: u64, duration: u64, iteration: u32) -> Self {
        Self {
            primitive,
            start_round,
            duration,
            iteration,
            sources: Vec::new(),
            halted: Vec::new(),
            outputs: Vec::new(),
            flags: Vec::new(),
            witnesses: Vec::new(),
            first_beep: Vec::new(),
            length: None,
        }
    }

    pub fn end_round(&self) -> u64 {
        self.start_round + self.duration
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Header(Header),
    Round(RoundRecord),
    Invocation(Invocation),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub header: Header,
    pub records: Vec<Record>,
}

impl Trace {
    pub fn new(header: Header) -> Self {
        Self { header, records: Vec::new() }
    }

    pub fn rounds(&self) -> impl Iterator<Item = &RoundRecord> {
        self.records.iter().filter_map(|r| match r {
            Record::Round(r) => Some(r),
            _ => None,
        })
    }

    pub fn invocations(&self) -> impl Iterator<Item = &Invocation> {
        self.records.iter().filter_map(|r| match r {
            Record::Invocation(i) => Some(i),
            _ => None,
        })
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        let header = Record::Header(self.header.clone());
        serde_json::to_writer(&mut w, &header)?;
        w.write_all(b"\n")?;
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    /// Parses a JSON Lines trace. Errors carry the 1-based line number.
    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Self> {
        let mut header = None;
        let mut records = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line)
                .map_err(|e| Error::TraceParse { line: line_no, msg: e.to_string() })?;
            match rec {
                Record::Header(h) if header.is_none() && records.is_empty() => header = Some(h),
                Record::Header(_) => {
                    return Err(Error::TraceParse { line: line_no, msg: "unexpected second header".into() })
                }
                _ if header.is_none() => {
                    return Err(Error::TraceParse { line: line_no, msg: "record before header".into() })
                }
                other => records.push(other),
            }
        }
        let header = header.ok_or(Error::TraceParse { line: 0, msg: "empty trace".into() })?;
        Ok(Self { header, records })
    }
}
