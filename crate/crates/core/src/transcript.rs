//! Ordered protocol messages and their line-delimited serialization.
//!
//! Each message is one JSON object per line with the fields `stage`,
//! `sender`, `receiver`, `kind` and `payload`. Recording can be switched off
//! for Monte Carlo loops; message construction is then skipped entirely.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::mbqc::MeasurementGraph;
use crate::quantum::{DensityMatrix, Octant};
use crate::{Error, Result};

/// Protocol stage: classical preparation, quantum transmission and first
/// measurement, adaptive second round onward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    #[serde(rename = "t0")]
    Preparation,
    #[serde(rename = "t1")]
    Transmission,
    #[serde(rename = "t2")]
    Measurement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Party {
    Source,
    /// Client `j`, 0-based position along the line.
    Client(usize),
    Orchestrator,
    Server,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Source => write!(f, "source"),
            Party::Client(j) => write!(f, "client{j}"),
            Party::Orchestrator => write!(f, "orchestrator"),
            Party::Server => write!(f, "server"),
        }
    }
}

/// Message contents. The serde tag doubles as the message kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Payload {
    /// A client's secrets (and, for clients that own them, inputs and
    /// algorithm angles) handed to the orchestrator.
    SecretParams {
        theta: Vec<(usize, Octant)>,
        r: Vec<(usize, bool)>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        x: Vec<(usize, bool)>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        phi: Vec<(usize, Octant)>,
    },
    /// Qubits travelling along a quantum channel, optionally with a snapshot
    /// of their joint state.
    QubitBatch {
        vertices: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        state: Option<DensityMatrix>,
    },
    ThetaPrime {
        vertex: usize,
        theta: Octant,
    },
    Delta {
        vertex: usize,
        delta: Octant,
    },
    Outcome {
        vertex: usize,
        m: bool,
    },
    /// Decrypted classical output handed back to the clients.
    Result {
        bits: Vec<(usize, bool)>,
    },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::SecretParams { .. } => "secret-params",
            Payload::QubitBatch { .. } => "qubit-batch",
            Payload::ThetaPrime { .. } => "theta-prime",
            Payload::Delta { .. } => "delta",
            Payload::Outcome { .. } => "outcome",
            Payload::Result { .. } => "result",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub stage: Stage,
    pub sender: Party,
    pub receiver: Party,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    enabled: bool,
    snapshots: bool,
    messages: Vec<Message>,
}

impl Transcript {
    /// Records messages without quantum state snapshots.
    pub fn recording() -> Self {
        Transcript {
            enabled: true,
            snapshots: false,
            messages: Vec::new(),
        }
    }

    /// Records messages including the joint state of every qubit batch.
    pub fn with_snapshots() -> Self {
        Transcript {
            enabled: true,
            snapshots: true,
            messages: Vec::new(),
        }
    }

    /// Drops everything; used on hot sampling paths.
    pub fn disabled() -> Self {
        Transcript::default()
    }

    pub fn is_recording(&self) -> bool {
        self.enabled
    }

    pub fn wants_snapshots(&self) -> bool {
        self.enabled && self.snapshots
    }

    /// Appends the message built by `build` when recording.
    pub fn record(&mut self, build: impl FnOnce() -> Message) {
        if self.enabled {
            self.messages.push(build());
        }
    }

    pub(crate) fn push(&mut self, stage: Stage, sender: Party, receiver: Party, payload: impl FnOnce() -> Payload) {
        self.record(|| Message {
            stage,
            sender,
            receiver,
            payload: payload(),
        });
    }

    /// Records a qubit hand-over, attaching `state` only when snapshots are on.
    pub(crate) fn push_qubits(
        &mut self,
        stage: Stage,
        sender: Party,
        receiver: Party,
        vertices: &[usize],
        state: &DensityMatrix,
    ) {
        let snap = self.wants_snapshots();
        self.push(stage, sender, receiver, || Payload::QubitBatch {
            vertices: vertices.to_vec(),
            state: snap.then(|| state.clone()),
        });
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Messages sent or received by `party`.
    pub fn view(&self, party: Party) -> Vec<&Message> {
        self.messages
            .iter()
            .filter(|m| m.sender == party || m.receiver == party)
            .collect()
    }

    /// All `delta` messages in order as `(vertex, δ)`.
    pub fn deltas(&self) -> Vec<(usize, Octant)> {
        self.messages
            .iter()
            .filter_map(|m| match m.payload {
                Payload::Delta { vertex, delta } => Some((vertex, delta)),
                _ => None,
            })
            .collect()
    }

    /// One JSON object per line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            out.push_str(&serde_json::to_string(m).expect("messages always serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_lines(text: &str) -> Result<Self> {
        let messages = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Config(format!("transcript line {}: {e}", i + 1))))
            .collect::<Result<Vec<Message>>>()?;
        Ok(Transcript {
            enabled: true,
            snapshots: false,
            messages,
        })
    }

    /// Checks the time scheme: stages never go backwards, every secret is
    /// committed before the first qubit moves, and qubits only travel on
    /// quantum edges (source → client → … → server).
    pub fn check_staging(&self) -> Result<()> {
        let mut stage = Stage::Preparation;
        let mut qubits_seen = false;
        for (i, m) in self.messages.iter().enumerate() {
            if m.stage < stage {
                return Err(Error::ProtocolOrder(format!(
                    "message {i} goes back to stage {:?}",
                    m.stage
                )));
            }
            stage = m.stage;
            match &m.payload {
                Payload::SecretParams { .. } if qubits_seen => {
                    return Err(Error::ProtocolOrder(format!(
                        "secret parameters at message {i} after quantum emission"
                    )));
                }
                Payload::QubitBatch { .. } => {
                    qubits_seen = true;
                    if !is_quantum_edge(m.sender, m.receiver) {
                        return Err(Error::ProtocolOrder(format!(
                            "qubits sent on classical edge {} → {}",
                            m.sender, m.receiver
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Checks that every `delta` for a vertex is sent only after the outcomes
    /// of all vertices its correction depends on have been reported.
    pub fn check_flow_order(&self, graph: &MeasurementGraph) -> Result<()> {
        let mut reported = BTreeSet::new();
        for m in &self.messages {
            match m.payload {
                Payload::Outcome { vertex, .. } => {
                    reported.insert(vertex);
                }
                Payload::Delta { vertex, .. } => {
                    for w in graph.dependencies(vertex) {
                        if !reported.contains(&w) {
                            return Err(Error::ProtocolOrder(format!(
                                "delta for vertex {vertex} sent before outcome of {w}"
                            )));
                        }
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn is_quantum_edge(from: Party, to: Party) -> bool {
    matches!(
        (from, to),
        (Party::Source, Party::Client(_))
            | (Party::Source, Party::Server)
            | (Party::Server, Party::Client(_))
            | (Party::Client(_), Party::Client(_))
            | (Party::Client(_), Party::Server)
            | (Party::Server, Party::Orchestrator)
    )
}
