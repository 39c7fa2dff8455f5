//! Channel semantics for one synchronous round.
//!
//! These are the reference (dense) definitions. The engine uses a sparse
//! equivalent internally and is checked against these.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::topology::{NodeId, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModel {
    /// Radio, no collision detection.
    NoCd,
    /// Radio with collision detection.
    Cd,
    Beep,
}

impl ChannelModel {
    pub fn name(self) -> &'static str {
        match self {
            ChannelModel::NoCd => "nocd",
            ChannelModel::Cd => "cd",
            ChannelModel::Beep => "beep",
        }
    }

    pub fn is_radio(self) -> bool {
        !matches!(self, ChannelModel::Beep)
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nocd" => Ok(ChannelModel::NoCd),
            "cd" => Ok(ChannelModel::Cd),
            "beep" => Ok(ChannelModel::Beep),
            other => Err(Error::ModelMismatch(format!("unknown channel model {other:?}"))),
        }
    }
}

/// What a node does in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundAction {
    Transmit(Bitstring),
    Listen,
    Beep,
    Silent,
}

impl RoundAction {
    pub fn kind(&self) -> &'static str {
        match self {
            RoundAction::Transmit(_) => "transmit",
            RoundAction::Listen => "listen",
            RoundAction::Beep => "beep",
            RoundAction::Silent => "silent",
        }
    }
}

/// What a node observes in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reception {
    Message(Bitstring),
    Silence,
    Collision,
    BeepHeard,
    NoBeep,
}

impl Reception {
    pub fn kind(&self) -> &'static str {
        match self {
            Reception::Message(_) => "message",
            Reception::Silence => "silence",
            Reception::Collision => "collision",
            Reception::BeepHeard => "beep_heard",
            Reception::NoBeep => "no_beep",
        }
    }
}

/// Radio round: a listener with exactly one transmitting in-neighbor gets
/// its payload; with two or more it gets `Collision` when `cd` is set and
/// `Silence` otherwise. Transmitters learn nothing.
pub fn step_radio_round(t: &Topology, actions: &[RoundAction], cd: bool) -> Result<Vec<Reception>> {
    if actions.len() != t.n() {
        return Err(Error::ActionCount { got: actions.len(), expected: t.n() });
    }
    let model = if cd { "cd" } else { "nocd" };
    for (node, a) in actions.iter().enumerate() {
        if matches!(a, RoundAction::Beep | RoundAction::Silent) {
            return Err(Error::IllegalAction { node, action: a.kind(), model });
        }
    }
    let receptions = (0..t.n())
        .map(|v| {
            if let RoundAction::Transmit(_) = actions[v] {
                return Reception::Silence;
            }
            let mut heard = t.in_neighbors(v).iter().filter_map(|&u| match &actions[u] {
                RoundAction::Transmit(p) => Some(p),
                _ => None,
            });
            match (heard.next(), heard.next()) {
                (None, _) => Reception::Silence,
                (Some(p), None) => Reception::Message(p.clone()),
                (Some(_), Some(_)) if cd => Reception::Collision,
                _ => Reception::Silence,
            }
        })
        .collect();
    Ok(receptions)
}

/// Beep round: a silent node hears `BeepHeard` iff at least one neighbor
/// beeped. Beepers receive `NoBeep`.
pub fn step_beep_round(t: &Topology, beepers: &[NodeId]) -> Vec<Reception> {
    let mut beeping = vec![false; t.n()];
    for &b in beepers {
        beeping[b] = true;
    }
    (0..t.n())
        .map(|v| {
            if !beeping[v] && t.in_neighbors(v).iter().any(|&u| beeping[u]) {
                Reception::BeepHeard
            } else {
                Reception::NoBeep
            }
        })
        .collect()
}

/// [`step_beep_round`] for a dense action map; rejects radio actions.
pub fn step_beep_actions(t: &Topology, actions: &[RoundAction]) -> Result<Vec<Reception>> {
    if actions.len() != t.n() {
        return Err(Error::ActionCount { got: actions.len(), expected: t.n() });
    }
    let mut beepers = Vec::new();
    for (node, a) in actions.iter().enumerate() {
        match a {
            RoundAction::Beep => beepers.push(node),
            RoundAction::Silent => {}
            other => return Err(Error::IllegalAction { node, action: other.kind(), model: "beep" }),
        }
    }
    Ok(step_beep_round(t, &beepers))
}
