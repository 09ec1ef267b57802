//! Every symbol a run puts on a link, in emission order.

use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::Fe;

/// An endpoint of a link. Party and database indices are 0-based here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    User,
    Party(usize),
    Database { party: usize, db: usize },
    /// Broadcast to every database of one party.
    PartyDatabases(usize),
    /// Broadcast to every participating database.
    AllDatabases,
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::User => write!(f, "user"),
            Node::Party(i) => write!(f, "party{}", i + 1),
            Node::Database { party, db } => write!(f, "party{}.db{}", party + 1, db + 1),
            Node::PartyDatabases(i) => write!(f, "party{}.*", i + 1),
            Node::AllDatabases => write!(f, "*.*"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Dealer party hands out masking vectors.
    MaskDealing,
    /// Blinding noise shared with the databases.
    NoiseProvisioning,
    /// Secret-shared incidence vectors sent to databases.
    StorageDistribution,
    Query,
    Answer,
}

impl Phase {
    pub fn round(self) -> u32 {
        match self {
            Phase::MaskDealing | Phase::NoiseProvisioning | Phase::StorageDistribution => 0,
            Phase::Query => 1,
            Phase::Answer => 2,
        }
    }
}

/// One field element on one link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub round: u32,
    pub phase: Phase,
    pub from: Node,
    pub to: Node,
    pub value: u64,
}

impl Event {
    pub fn link_id(&self) -> String {
        format!("{}->{}", self.from, self.to)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Transcript {
            events: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, phase: Phase, from: Node, to: Node, value: Fe) {
        self.events.push(Event {
            round: phase.round(),
            phase,
            from,
            to,
            value: value.value(),
        });
    }

    pub fn extend(&mut self, phase: Phase, from: Node, to: Node, values: &[Fe]) {
        for &v in values {
            self.push(phase, from, to, v);
        }
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn count_phase(&self, phase: Phase) -> usize {
        self.events.iter().filter(|e| e.phase == phase).count()
    }

    pub fn without_phase(&self, phase: Phase) -> Transcript {
        Transcript {
            events: self.events.iter().copied().filter(|e| e.phase != phase).collect(),
        }
    }

    /// Values on links touching `node` in the given phase, in emission order.
    pub fn values_at(&self, phase: Phase, node: Node) -> impl Iterator<Item = u64> + '_ {
        self.events
            .iter()
            .filter(move |e| e.phase == phase && (e.to == node || e.from == node))
            .map(|e| e.value)
    }

    /// SHA-256 over a canonical byte encoding of every event.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for e in &self.events {
            h.update(e.round.to_le_bytes());
            h.update(format!("{:?}|{}|{}|", e.phase, e.from, e.to).as_bytes());
            h.update(e.value.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}
