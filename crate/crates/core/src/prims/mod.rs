//! Communication primitives with fixed, globally known durations.
//!
//! Every primitive consumes a number of rounds that depends only on
//! `(n, D, α)` and its length parameter, never on the source set or on
//! randomness, so nodes stay in lockstep across compositions.

mod beep_wave;
mod broadcast;
mod decay;
mod search;
mod selection;

pub use beep_wave::{beep_wave, BeepWaveOutput};
pub use broadcast::partial_multi_broadcast;
pub use decay::{decay, decay4};
pub use search::search;
pub use selection::{selection, SelectionOutput};

pub(crate) use broadcast::run_pmb;

use crate::bits::Bitstring;
use crate::topology::{log2_ceil, NodeId};

pub const DEFAULT_ALPHA: u32 = 4;

/// Durations of every primitive for given `(n, D, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub n: usize,
    pub d: usize,
    pub log_n: usize,
    pub alpha: u32,
}

impl Schedule {
    pub fn new(n: usize, d: usize, alpha: u32) -> Self {
        assert!(alpha >= 1, "broadcast constant must be positive");
        Self { n, d, log_n: log2_ceil(n), alpha }
    }

    /// One Decay execution: `log n` rounds.
    pub fn decay_len(&self) -> u64 {
        self.log_n as u64
    }

    pub fn decay4_len(&self) -> u64 {
        4 * self.decay_len()
    }

    /// Number of Decay executions in one broadcast: `α·(D + log n)`.
    pub fn pmb_decays(&self) -> u64 {
        self.alpha as u64 * (self.d + self.log_n) as u64
    }

    pub fn pmb_len(&self) -> u64 {
        self.pmb_decays() * self.decay_len()
    }

    pub fn selection_len(&self, id_len: usize) -> u64 {
        2 * self.pmb_len() + id_len as u64 * self.decay4_len()
    }

    pub fn search_len(&self, prefix_len: usize) -> u64 {
        prefix_len as u64 * self.pmb_len()
    }

    /// `D + 3(ℓ+1) + 2`.
    pub fn beep_wave_len(&self, len: usize) -> u64 {
        (self.d + 3 * (len + 1) + 2) as u64
    }
}

/// Where a primitive call sits on the global clock.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimitiveSchedule {
    pub start_round: u64,
    pub duration: u64,
}

impl PrimitiveSchedule {
    pub fn end_round(&self) -> u64 {
        self.start_round + self.duration
    }
}

/// Dense per-node vector from a sparse source list; non-sources get ε.
pub(crate) fn dense_payloads(n: usize, sources: &[(NodeId, Bitstring)]) -> Vec<Bitstring> {
    let mut out = vec![Bitstring::empty(); n];
    for (v, p) in sources {
        out[*v] = p.clone();
    }
    out
}

pub(crate) fn source_entries(sources: &[(NodeId, Bitstring)]) -> Vec<crate::trace::SourceEntry> {
    sources.iter().map(|(node, payload)| crate::trace::SourceEntry { node: *node, payload: payload.clone() }).collect()
}
