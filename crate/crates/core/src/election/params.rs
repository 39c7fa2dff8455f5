use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::bits::Bitstring;
use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::prims::DEFAULT_ALPHA;
use crate::topology::{log2_ceil, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// Repeated Selection among `1/n`-probability candidates.
    Expected,
    /// Search then at most `3·sqrt(log n)` Selections.
    Whp,
    /// Beep-wave election.
    Beep,
    /// One-hop reference election with collision detection.
    SingleHop,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [Protocol::Expected, Protocol::Whp, Protocol::Beep, Protocol::SingleHop];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Expected => "expected",
            Protocol::Whp => "whp",
            Protocol::Beep => "beep",
            Protocol::SingleHop => "single-hop",
        }
    }

    pub fn default_model(self) -> ChannelModel {
        match self {
            Protocol::Expected | Protocol::Whp => ChannelModel::NoCd,
            Protocol::Beep => ChannelModel::Beep,
            Protocol::SingleHop => ChannelModel::Cd,
        }
    }

    /// Rejects protocol/model/topology combinations the protocol cannot run on.
    pub fn check_model(self, model: ChannelModel, t: &Topology) -> Result<()> {
        let ok = match self {
            Protocol::Expected | Protocol::Whp => model.is_radio(),
            Protocol::Beep => model == ChannelModel::Beep && !t.is_directed(),
            Protocol::SingleHop => {
                let n = t.n();
                model == ChannelModel::Cd && (0..n).all(|v| t.out_neighbors(v).len() == n - 1)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ModelMismatch(format!(
                "protocol {} cannot run under {} semantics on the {} {} topology",
                self.name(),
                model,
                if t.is_directed() { "directed" } else { "undirected" },
                t.label()
            )))
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::ModelMismatch(format!("unknown protocol {s:?}")))
    }
}

/// Per-protocol constants, fixed by `(protocol, n, D)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectionParams {
    pub protocol: Protocol,
    pub n: usize,
    pub d: usize,
    pub log_n: usize,
    pub alpha: u32,
    /// Candidate probability `candidate_num / candidate_den`.
    pub candidate_num: u64,
    pub candidate_den: u64,
    pub id_len: usize,
    /// Exact number of 1s in an ID (beep protocol only).
    pub id_weight: Option<usize>,
    /// Search prefix length (whp only).
    pub prefix_len: usize,
    /// Selection loop bound (whp only).
    pub loop_bound: Option<u32>,
    pub script: Option<Vec<Option<Bitstring>>>,
}

impl ElectionParams {
    pub fn new(protocol: Protocol, n: usize, d: usize) -> Self {
        let log_n = log2_ceil(n);
        let sqrt_log = (log_n as f64).sqrt();
        let (candidate_num, id_len, id_weight) = match protocol {
            Protocol::Expected => (1, 16 * log_n, None),
            Protocol::Whp => ((4 * log_n).min(n) as u64, log_n, None),
            Protocol::Beep => (1, 4 * log_n, Some(log_n)),
            Protocol::SingleHop => (1, log_n, None),
        };
        let (prefix_len, loop_bound) = match protocol {
            Protocol::Whp => (sqrt_log.ceil() as usize, Some((3.0 * sqrt_log).ceil() as u32)),
            _ => (0, None),
        };
        Self {
            protocol,
            n,
            d,
            log_n,
            alpha: DEFAULT_ALPHA,
            candidate_num,
            candidate_den: n as u64,
            id_len,
            id_weight,
            prefix_len,
            loop_bound,
            script: None,
        }
    }

    pub fn candidate_probability(&self) -> f64 {
        self.candidate_num as f64 / self.candidate_den as f64
    }

    /// True with probability exactly `candidate_num / candidate_den`.
    pub fn coin<R: RngCore>(&self, rng: &mut R) -> bool {
        rng.random_range(0..self.candidate_den) < self.candidate_num
    }

    pub fn draw_id<R: RngCore>(&self, rng: &mut R) -> Bitstring {
        match self.id_weight {
            Some(w) => sample_constant_weight_id(rng, self.id_len, w),
            None => sample_uniform_id(rng, self.id_len),
        }
    }
}

pub fn sample_uniform_id<R: RngCore>(rng: &mut R, len: usize) -> Bitstring {
    Bitstring::from_bits((0..len).map(|_| rng.random::<bool>()))
}

/// Uniform over all `C(len, weight)` strings with exactly `weight` ones:
/// the first `weight` steps of a Fisher–Yates shuffle of the positions.
pub fn sample_constant_weight_id<R: RngCore>(rng: &mut R, len: usize, weight: usize) -> Bitstring {
    assert!(weight <= len, "weight {weight} exceeds length {len}");
    let mut positions: Vec<usize> = (0..len).collect();
    let mut out = Bitstring::zeros(len);
    for i in 0..weight {
        let j = rng.random_range(i..len);
        positions.swap(i, j);
        out.set(positions[i], true);
    }
    out
}
