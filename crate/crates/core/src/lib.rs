//! Simulator for randomized leader election in multi-hop radio networks.
//!
//! Nodes run in lockstep synchronous rounds under one of three channel
//! semantics: radio without collision detection, radio with collision
//! detection, or the beep model. On top of the [`engine`] sit the
//! communication primitives in [`prims`], the election protocols in
//! [`election`], a trace [`audit`]or, and a Monte Carlo [`harness`].

pub mod audit;
pub mod bits;
pub mod channel;
pub mod election;
pub mod engine;
pub mod error;
pub mod harness;
pub mod prims;
pub mod rng;
pub mod topology;
pub mod trace;

pub use bits::Bitstring;
pub use channel::{ChannelModel, Reception, RoundAction};
pub use engine::Sim;
pub use error::{Error, Result};
pub use topology::{build_topology, Family, NodeId, Topology, TopologySpec};
pub use trace::{Trace, TraceLevel};
pub use election::{run_protocol, ElectionParams, ProtocolOutcome, ProtocolSpec, Protocol};
