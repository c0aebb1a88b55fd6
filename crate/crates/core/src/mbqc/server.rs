use std::collections::BTreeSet;

use super::MeasurementGraph;
use crate::quantum::{rz_gate, Basis2, DensityMatrix, Octant, OutcomeSource};
use crate::{Error, Result};

/// Where the graph edges are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntanglePlacement {
    /// The server applies `CZ` after receiving rotated `|+⟩` qubits.
    #[default]
    Server,
    /// The source emits the graph state; qubits travel already entangled.
    Source,
}

/// Reply to a measurement request, tagged with the vertex it claims to
/// answer so out-of-order replies are detectable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementReply {
    pub vertex: usize,
    pub outcome: bool,
}

/// What the protocol asks of the server. Implementations may deviate
/// arbitrarily; the drivers only check the replies' shape.
pub trait Server {
    /// Takes custody of qubits for `vertices` (in that order).
    fn receive(&mut self, vertices: &[usize], state: DensityMatrix) -> Result<()>;
    /// Applies `Rz(θ)` to a held qubit (the remote-rotation correction).
    fn rotate(&mut self, vertex: usize, theta: Octant) -> Result<()>;
    fn entangle(&mut self, a: usize, b: usize) -> Result<()>;
    fn measure(&mut self, vertex: usize, delta: Octant) -> Result<MeasurementReply>;
    /// Hands the listed qubits back, in the listed order.
    fn release(&mut self, vertices: &[usize]) -> Result<DensityMatrix>;
}

/// Turns a requested angle into a physical basis. The returned flag asks the
/// server to invert the detector reading (the outcome flip of a station that
/// only realises half of the angles directly).
pub trait Station {
    fn setting(&self, round: usize, delta: Octant) -> (Basis2, bool);
}

impl<T: Station + ?Sized> Station for &T {
    fn setting(&self, round: usize, delta: Octant) -> (Basis2, bool) {
        (**self).setting(round, delta)
    }
}

/// Ideal `|±_δ⟩` projective measurement.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdealStation;

impl Station for IdealStation {
    fn setting(&self, _round: usize, delta: Octant) -> (Basis2, bool) {
        (Basis2::delta(delta), false)
    }
}

/// Follows the protocol faithfully, holding all qubits in one register.
#[derive(Debug, Clone)]
pub struct HonestServer<S, M = IdealStation> {
    register: DensityMatrix,
    labels: Vec<usize>,
    received: BTreeSet<usize>,
    measured: BTreeSet<usize>,
    pending_edges: BTreeSet<(usize, usize)>,
    graph_edges: BTreeSet<(usize, usize)>,
    rounds: usize,
    outcomes: S,
    station: M,
}

impl<S: OutcomeSource> HonestServer<S, IdealStation> {
    pub fn new(graph: &MeasurementGraph, placement: EntanglePlacement, outcomes: S) -> Self {
        HonestServer::with_station(graph, placement, outcomes, IdealStation)
    }
}

impl<S: OutcomeSource, M: Station> HonestServer<S, M> {
    pub fn with_station(graph: &MeasurementGraph, placement: EntanglePlacement, outcomes: S, station: M) -> Self {
        let graph_edges: BTreeSet<_> = graph.edges().iter().copied().collect();
        HonestServer {
            register: DensityMatrix::empty(),
            labels: Vec::new(),
            received: BTreeSet::new(),
            measured: BTreeSet::new(),
            pending_edges: match placement {
                EntanglePlacement::Server => graph_edges.clone(),
                EntanglePlacement::Source => BTreeSet::new(),
            },
            graph_edges,
            rounds: 0,
            outcomes,
            station,
        }
    }

    pub fn into_outcome_source(self) -> S {
        self.outcomes
    }

    /// Joint state of the qubits still held.
    pub fn register(&self) -> (&[usize], &DensityMatrix) {
        (&self.labels, &self.register)
    }

    fn position(&self, v: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == v)
            .ok_or_else(|| Error::ProtocolOrder(format!("server does not hold a qubit for vertex {v}")))
    }
}

impl<S: OutcomeSource, M: Station> Server for HonestServer<S, M> {
    fn receive(&mut self, vertices: &[usize], state: DensityMatrix) -> Result<()> {
        if state.num_qubits() != vertices.len() {
            return Err(Error::Arity {
                expected: vertices.len(),
                got: state.num_qubits(),
            });
        }
        for &v in vertices {
            if !self.received.insert(v) {
                return Err(Error::ProtocolOrder(format!("qubit for vertex {v} received twice")));
            }
        }
        self.register = self.register.tensor(&state);
        self.labels.extend_from_slice(vertices);
        Ok(())
    }

    fn rotate(&mut self, vertex: usize, theta: Octant) -> Result<()> {
        let q = self.position(vertex)?;
        self.register.apply_single(q, &rz_gate(theta))
    }

    fn entangle(&mut self, a: usize, b: usize) -> Result<()> {
        let key = (a.min(b), a.max(b));
        if !self.graph_edges.contains(&key) {
            return Err(Error::ProtocolOrder(format!("edge {a}–{b} is not in the graph")));
        }
        if !self.pending_edges.remove(&key) {
            return Err(Error::ProtocolOrder(format!("edge {a}–{b} entangled twice")));
        }
        let (qa, qb) = (self.position(a)?, self.position(b)?);
        self.register.apply_cz(qa, qb)
    }

    fn measure(&mut self, vertex: usize, delta: Octant) -> Result<MeasurementReply> {
        if self.measured.contains(&vertex) {
            return Err(Error::ProtocolOrder(format!("vertex {vertex} measured twice")));
        }
        let q = self.position(vertex)?;
        if self.pending_edges.iter().any(|&(a, b)| a == vertex || b == vertex) {
            return Err(Error::Unentangled(vertex));
        }
        let (basis, flip) = self.station.setting(self.rounds, delta);
        let (raw, post) = self.register.measure_in(q, &basis, &mut self.outcomes, false)?;
        self.register = post;
        self.labels.remove(q);
        self.measured.insert(vertex);
        self.rounds += 1;
        Ok(MeasurementReply {
            vertex,
            outcome: raw ^ flip,
        })
    }

    fn release(&mut self, vertices: &[usize]) -> Result<DensityMatrix> {
        if vertices.is_empty() {
            return Ok(DensityMatrix::empty());
        }
        let positions = vertices.iter().map(|&v| self.position(v)).collect::<Result<Vec<_>>>()?;
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        let reduced = self.register.partial_trace(&sorted)?;
        let order: Vec<usize> = positions
            .iter()
            .map(|p| sorted.binary_search(p).expect("position is in the sorted set"))
            .collect();
        let out = reduced.permuted(&order)?;
        let keep: Vec<usize> = (0..self.labels.len()).filter(|p| !positions.contains(p)).collect();
        if keep.is_empty() {
            self.register = DensityMatrix::empty();
        } else {
            self.register = self.register.partial_trace(&keep)?;
        }
        self.labels = keep.iter().map(|&p| self.labels[p]).collect();
        Ok(out)
    }
}
