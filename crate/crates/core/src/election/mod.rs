//! Leader-election protocols composed from the primitives.

mod beep;
mod expected;
mod params;
mod single_hop;
mod whp;

pub use beep::elect_beep;
pub use expected::elect_expected;
pub use params::{sample_constant_weight_id, sample_uniform_id, ElectionParams, Protocol};
pub use single_hop::elect_single_hop;
pub use whp::elect_whp;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bits::Bitstring;
use crate::channel::ChannelModel;
use crate::engine::{Sim, DEFAULT_ROUND_CAP};
use crate::error::Result;
use crate::prims::DEFAULT_ALPHA;
use crate::rng::Stream;
use crate::topology::{NodeId, Topology};
use crate::trace::{Header, Trace, TraceLevel};

/// Result of one election run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolOutcome {
    pub protocol: Protocol,
    pub n: usize,
    /// The `D` the protocol scheduled with.
    pub d: usize,
    pub seed: u64,
    /// What each node output, `None` if it never terminated.
    pub outputs: Vec<Option<Bitstring>>,
    /// Node was a candidate in the iteration it terminated in and its output
    /// is its own ID.
    pub elected: Vec<bool>,
    pub rounds: u64,
    pub iterations: u32,
    pub success: bool,
}

/// All nodes output the same ID and exactly one node owns it.
pub fn success_predicate(outputs: &[Option<Bitstring>], elected: &[bool]) -> bool {
    let Some(Some(first)) = outputs.first() else {
        return false;
    };
    outputs.iter().all(|o| o.as_ref() == Some(first)) && elected.iter().filter(|&&e| e).count() == 1
}

impl ProtocolOutcome {
    pub(crate) fn new(protocol: Protocol, params: &ElectionParams, sim: &Sim<'_>, outputs: Vec<Option<Bitstring>>, elected: Vec<bool>, iterations: u32) -> Self {
        let success = success_predicate(&outputs, &elected);
        Self {
            protocol,
            n: sim.n(),
            d: params.d,
            seed: sim.seed(),
            outputs,
            elected,
            rounds: sim.round(),
            iterations,
            success,
        }
    }

    pub fn leader_node(&self) -> Option<NodeId> {
        let mut it = self.elected.iter().enumerate().filter(|(_, &e)| e);
        match (it.next(), it.next()) {
            (Some((v, _)), None) => Some(v),
            _ => None,
        }
    }

    /// The common output, when every node agrees.
    pub fn output_id(&self) -> Option<&Bitstring> {
        let first = self.outputs.first()?.as_ref()?;
        self.outputs.iter().all(|o| o.as_ref() == Some(first)).then_some(first)
    }

    pub fn record(&self) -> OutcomeRecord {
        OutcomeRecord {
            protocol: self.protocol,
            n: self.n,
            d: self.d,
            seed: self.seed,
            success: self.success,
            leader_node: self.leader_node(),
            output_id: self.output_id().cloned(),
            rounds: self.rounds,
            iterations: self.iterations,
        }
    }
}

/// JSON form of an outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub protocol: Protocol,
    pub n: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub seed: u64,
    pub success: bool,
    pub leader_node: Option<NodeId>,
    pub output_id: Option<Bitstring>,
    pub rounds: u64,
    pub iterations: u32,
}

/// Everything needed to run one election.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSpec {
    pub protocol: Protocol,
    pub model: ChannelModel,
    pub alpha: u32,
    /// Replaces the topology's exact eccentricity as the schedules' `D`.
    pub d_override: Option<usize>,
    pub round_cap: u64,
    pub trace: TraceLevel,
    /// Forced candidate IDs for the first iteration, indexed by node.
    pub script: Option<Vec<Option<Bitstring>>>,
}

impl ProtocolSpec {
    pub fn new(protocol: Protocol) -> Self {
        Self {
            protocol,
            model: protocol.default_model(),
            alpha: DEFAULT_ALPHA,
            d_override: None,
            round_cap: DEFAULT_ROUND_CAP,
            trace: TraceLevel::Off,
            script: None,
        }
    }

    pub fn with_model(mut self, model: ChannelModel) -> Self {
        self.model = model;
        self
    }

    pub fn with_trace(mut self, level: TraceLevel) -> Self {
        self.trace = level;
        self
    }

    pub fn with_alpha(mut self, alpha: u32) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d_override = Some(d);
        self
    }

    pub fn with_script(mut self, script: Vec<Option<Bitstring>>) -> Self {
        self.script = Some(script);
        self
    }

    pub fn params(&self, t: &Topology) -> ElectionParams {
        let mut params = ElectionParams::new(self.protocol, t.n(), self.d_override.unwrap_or(t.eccentricity()));
        params.alpha = self.alpha;
        params.script = self.script.clone();
        params
    }
}

/// Runs `spec.protocol` on `t` until every node has terminated.
///
/// Identical `(t, spec, seed)` give identical outcomes and traces. Hitting
/// the round cap returns [`crate::Error::RoundCap`] carrying the partial
/// trace.
pub fn run_protocol(t: &Topology, spec: &ProtocolSpec, seed: u64) -> Result<(ProtocolOutcome, Trace)> {
    spec.protocol.check_model(spec.model, t)?;
    let params = spec.params(t);
    let mut header = Header::new(spec.protocol.name(), t, spec.model, seed);
    header.params.insert("alpha".into(), json!(params.alpha));
    header.params.insert("d".into(), json!(params.d));
    header.params.insert("id_len".into(), json!(params.id_len));
    header.params.insert("candidate_probability".into(), json!(format!("{}/{}", params.candidate_num, params.candidate_den)));
    header.params.insert("round_cap".into(), json!(spec.round_cap));
    let mut sim = Sim::with_header(t, spec.model, seed, spec.trace, header)?;
    sim.set_round_cap(spec.round_cap);
    let outcome = match spec.protocol {
        Protocol::Expected => elect_expected(&mut sim, &params)?,
        Protocol::Whp => elect_whp(&mut sim, &params)?,
        Protocol::Beep => elect_beep(&mut sim, &params)?,
        Protocol::SingleHop => elect_single_hop(&mut sim, &params)?,
    };
    Ok((outcome, sim.into_trace()))
}

/// Candidate set for one iteration: the script on iteration 1 when given,
/// otherwise an independent coin per live node followed by an ID draw.
pub(crate) fn draw_candidates(sim: &Sim<'_>, params: &ElectionParams, iteration: u32) -> Vec<(NodeId, Bitstring)> {
    if iteration == 1 {
        if let Some(script) = &params.script {
            return script
                .iter()
                .enumerate()
                .filter_map(|(v, id)| id.clone().map(|id| (v, id)))
                .filter(|(v, _)| !sim.is_halted(*v))
                .collect();
        }
    }
    (0..sim.n())
        .filter(|&v| !sim.is_halted(v))
        .filter(|&v| params.coin(&mut sim.rng(v, Stream::Candidacy)))
        .map(|v| (v, params.draw_id(&mut sim.rng(v, Stream::Identifier))))
        .collect()
}

/// Owner check used when a node terminates with `output`.
pub(crate) fn owns(candidates: &[(NodeId, Bitstring)], v: NodeId, output: &Bitstring) -> bool {
    candidates.iter().any(|(c, id)| *c == v && id == output)
}
