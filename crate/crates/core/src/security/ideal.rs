//! Ideal functionalities: remote state rotation and multi-client blind
//! computation with its corruption interface.

use crate::mbqc::{run_bqc, EntanglePlacement, HonestServer, MeasurementGraph, PatternSecrets};
use crate::quantum::{enumerate_branches, mixture_average, rz_gate, DensityMatrix, Octant, StateVector};
use crate::transcript::Transcript;
use crate::{Error, Result};

/// `Rz(θ) ρ Rz(θ)†`: the server supplies `ρ`, the client picks `θ`.
pub fn ideal_rsr(theta: Octant, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "remote rotation acts on one qubit, got {}",
            rho.num_qubits()
        )));
    }
    let mut out = rho.clone();
    out.apply_single(0, &rz_gate(theta))?;
    Ok(out)
}

/// The map `U` a blind computation is meant to realise: a graph with flow
/// and its measurement angles.
#[derive(Debug, Clone)]
pub struct TargetComputation {
    pub graph: MeasurementGraph,
    pub phi: Vec<Octant>,
}

impl TargetComputation {
    pub fn new(graph: MeasurementGraph, phi: Vec<Octant>) -> Result<Self> {
        if phi.len() != graph.num_vertices() {
            return Err(Error::Arity {
                expected: graph.num_vertices(),
                got: phi.len(),
            });
        }
        Ok(TargetComputation { graph, phi })
    }

    /// `U(x)` as a classical-quantum state: the corrected outcomes of the
    /// measured vertices (sorted, as computational-basis qubits) followed by
    /// the output qubits. Evaluated with all secrets zero.
    pub fn evaluate(&self, x: &[bool]) -> Result<DensityMatrix> {
        let n = self.graph.num_vertices();
        if x.len() != self.graph.inputs().len() {
            return Err(Error::Arity {
                expected: self.graph.inputs().len(),
                got: x.len(),
            });
        }
        let mut secrets = PatternSecrets::zero(n);
        secrets.phi = self.phi.clone();
        for (&v, &b) in self.graph.inputs().iter().zip(x) {
            secrets.x[v] = b;
        }
        let branches = enumerate_branches(self.graph.num_measured(), |forced| {
            let mut server = HonestServer::new(&self.graph, EntanglePlacement::Server, forced);
            run_bqc(&self.graph, &secrets, &mut server, &mut Transcript::disabled())
        })?;
        let k = self.graph.num_measured();
        let mut states = Vec::with_capacity(branches.len());
        let mut weights = Vec::with_capacity(branches.len());
        for (w, out) in branches {
            let label = StateVector::basis(k, out.classical_label())?;
            let classical = DensityMatrix::from_pure(&label);
            states.push(match out.quantum {
                Some(q) => classical.tensor(&q),
                None => classical,
            });
            weights.push(w);
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        mixture_average(&states, Some(&weights))
    }
}

/// Whether a party's corruption flag can be raised. The honest filter
/// (`⊥`) pins it to 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Filter {
    #[default]
    Honest,
    Open,
}

/// `ℰ(x, ψ)`: what the corrupted coalition makes the resource output, given
/// every client's input bits and the state `ψ` it injected.
pub type CorruptionMap = dyn Fn(&[bool], &DensityMatrix) -> Result<DensityMatrix>;

/// The coalition's joint contribution when any flag is raised.
pub struct CorruptionPayload<'a> {
    pub psi: DensityMatrix,
    pub map: &'a CorruptionMap,
}

/// Corruption flags of the server and of every client, each behind its
/// filter.
#[derive(Debug, Clone, Default)]
pub struct CorruptionFlags {
    pub server: (Filter, bool),
    pub clients: Vec<(Filter, bool)>,
}

impl CorruptionFlags {
    pub fn honest(n_clients: usize) -> Self {
        CorruptionFlags {
            server: (Filter::Honest, false),
            clients: vec![(Filter::Honest, false); n_clients],
        }
    }

    /// True when some flag is raised behind an open filter.
    pub fn any_effective(&self) -> bool {
        std::iter::once(&self.server)
            .chain(&self.clients)
            .any(|&(f, c)| f == Filter::Open && c)
    }
}

/// Multi-client blind computation resource. Client `j` owns the next
/// `inputs[j].len()` input vertices in the graph's input order.
pub fn ideal_mcbqc(
    target: &TargetComputation,
    inputs: &[Vec<bool>],
    flags: &CorruptionFlags,
    corruption: Option<&CorruptionPayload<'_>>,
) -> Result<DensityMatrix> {
    if flags.clients.len() != inputs.len() {
        return Err(Error::Arity {
            expected: inputs.len(),
            got: flags.clients.len(),
        });
    }
    let x: Vec<bool> = inputs.iter().flatten().copied().collect();
    if flags.any_effective() {
        let payload = corruption.ok_or(Error::MissingCorruption)?;
        (payload.map)(&x, &payload.psi)
    } else {
        target.evaluate(&x)
    }
}
