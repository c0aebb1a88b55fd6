use std::collections::BTreeMap;

use super::{blind_delta, MeasurementGraph, OutcomeRecord, PatternSecrets, Server};
use crate::quantum::{rz_gate, DensityMatrix, Octant, StateVector, Unitary2};
use crate::transcript::{Party, Payload, Stage, Transcript};
use crate::{Error, Result};

/// Result of one blind computation.
#[derive(Debug, Clone, PartialEq)]
pub struct BqcOutput {
    pub outcomes: OutcomeRecord,
    /// Angle sent for every measured vertex.
    pub deltas: BTreeMap<usize, Octant>,
    /// Decrypted output qubits in the order of `graph.outputs()`, when any.
    pub quantum: Option<DensityMatrix>,
}

impl BqcOutput {
    /// Corrected outcomes `m′(v)` for `v ∈ V ∖ O`, sorted by vertex.
    pub fn classical(&self) -> Vec<(usize, bool)> {
        self.outcomes.corrected_bits()
    }

    /// Corrected outcomes packed into a label, first vertex as the most
    /// significant bit.
    pub fn classical_label(&self) -> usize {
        self.classical()
            .iter()
            .fold(0, |acc, &(_, b)| acc << 1 | usize::from(b))
    }
}

/// Single-client blind computation. The client prepares `|+_θ(v)⟩` for
/// every vertex, the server entangles along the graph, then the
/// measurement rounds follow the layers. Output qubits are decrypted with
/// `θ(v)` and the byproducts from the corrected outcomes.
pub fn run_bqc<S: Server + ?Sized>(
    graph: &MeasurementGraph,
    secrets: &PatternSecrets,
    server: &mut S,
    transcript: &mut Transcript,
) -> Result<BqcOutput> {
    secrets.validate(graph)?;
    let client = Party::Client(0);
    for v in 0..graph.num_vertices() {
        let q = DensityMatrix::from_pure(&StateVector::plus_theta(secrets.theta[v]));
        transcript.push_qubits(Stage::Transmission, client, Party::Server, &[v], &q);
        server.receive(&[v], q)?;
    }
    for &(a, b) in graph.edges() {
        server.entangle(a, b)?;
    }
    drive_measurements(graph, secrets, client, server, transcript)
}

/// Measurement rounds and output decryption, shared by every protocol
/// variant. `secrets.theta` must be the rotation the server's qubits carry.
pub(crate) fn drive_measurements<S: Server + ?Sized>(
    graph: &MeasurementGraph,
    secrets: &PatternSecrets,
    controller: Party,
    server: &mut S,
    transcript: &mut Transcript,
) -> Result<BqcOutput> {
    let mut outcomes = OutcomeRecord::default();
    let mut deltas = BTreeMap::new();
    for (layer_idx, layer) in graph.layers().iter().enumerate() {
        let stage = if layer_idx == 0 {
            Stage::Transmission
        } else {
            Stage::Measurement
        };
        for &v in layer {
            let phi_c = graph.corrected_phi(v, secrets.phi[v], &outcomes)?;
            let delta = blind_delta(v, secrets, phi_c);
            transcript.push(stage, controller, Party::Server, || Payload::Delta { vertex: v, delta });
            let reply = server.measure(v, delta)?;
            if reply.vertex != v {
                return Err(Error::ProtocolOrder(format!(
                    "asked for vertex {v}, server answered for {}",
                    reply.vertex
                )));
            }
            transcript.push(stage, Party::Server, controller, || Payload::Outcome {
                vertex: v,
                m: reply.outcome,
            });
            outcomes.record(v, reply.outcome, secrets.r[v]);
            deltas.insert(v, delta);
        }
    }

    let quantum = if graph.outputs().is_empty() {
        None
    } else {
        let mut out = server.release(graph.outputs())?;
        if out.num_qubits() != graph.outputs().len() {
            return Err(Error::Arity {
                expected: graph.outputs().len(),
                got: out.num_qubits(),
            });
        }
        transcript.push_qubits(
            Stage::Measurement,
            Party::Server,
            controller_quantum_party(controller),
            graph.outputs(),
            &out,
        );
        for (q, &o) in graph.outputs().iter().enumerate() {
            let (sx, sz) = graph.byproduct(o, &outcomes)?;
            out.apply_single(q, &decryption_unitary(secrets.theta[o], sx, sz ^ secrets.x[o]))?;
        }
        Some(out)
    };
    Ok(BqcOutput {
        outcomes,
        deltas,
        quantum,
    })
}

// Output qubits go to a client; the orchestrator is purely classical.
fn controller_quantum_party(controller: Party) -> Party {
    match controller {
        Party::Orchestrator => Party::Client(0),
        p => p,
    }
}

/// `Z^{s_Z} X^{s_X} Rz(−θ)`: undo the rotation first, then the byproducts.
pub(crate) fn decryption_unitary(theta: Octant, sx: bool, sz: bool) -> Unitary2 {
    let mut u = rz_gate(-theta);
    if sx {
        u = Unitary2::pauli_x() * u;
    }
    if sz {
        u = Unitary2::pauli_z() * u;
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbqc::{EntanglePlacement, HonestServer};
    use crate::quantum::{enumerate_branches, ForcedOutcomes};

    #[test]
    fn transcript_follows_flow() {
        let g = MeasurementGraph::chain(4, false).unwrap();
        let mut secrets = PatternSecrets::zero(4);
        secrets.theta = vec![Octant::new(3), Octant::new(1), Octant::new(6), Octant::new(2)];
        secrets.r = vec![true, false, true, true];
        secrets.phi = vec![Octant::new(1), Octant::new(2), Octant::new(5), Octant::new(7)];
        let mut t = Transcript::recording();
        let mut server = HonestServer::new(
            &g,
            EntanglePlacement::Server,
            ForcedOutcomes::new(vec![true, false, true, true]),
        );
        let out = run_bqc(&g, &secrets, &mut server, &mut t).unwrap();
        assert_eq!(out.outcomes.len(), 4);
        t.check_staging().unwrap();
        t.check_flow_order(&g).unwrap();
        assert_eq!(t.deltas().len(), 4);
    }

    #[test]
    fn lying_server_is_caught() {
        struct Liar(HonestServer<ForcedOutcomes>);
        impl Server for Liar {
            fn receive(&mut self, v: &[usize], s: DensityMatrix) -> Result<()> {
                self.0.receive(v, s)
            }
            fn rotate(&mut self, v: usize, t: Octant) -> Result<()> {
                self.0.rotate(v, t)
            }
            fn entangle(&mut self, a: usize, b: usize) -> Result<()> {
                self.0.entangle(a, b)
            }
            fn measure(&mut self, v: usize, d: Octant) -> Result<super::super::MeasurementReply> {
                let mut r = self.0.measure(v, d)?;
                r.vertex += 1;
                Ok(r)
            }
            fn release(&mut self, v: &[usize]) -> Result<DensityMatrix> {
                self.0.release(v)
            }
        }
        let g = MeasurementGraph::two_chain(false);
        let inner = HonestServer::new(&g, EntanglePlacement::Server, ForcedOutcomes::new(vec![false, false]));
        let err = run_bqc(
            &g,
            &PatternSecrets::zero(2),
            &mut Liar(inner),
            &mut Transcript::disabled(),
        );
        assert!(matches!(err, Err(Error::ProtocolOrder(_))));
    }

    #[test]
    fn classical_outputs_ignore_secrets_on_three_chain() {
        // Determinism under flow: the corrected-outcome distribution is the
        // same for every choice of θ and r.
        let g = MeasurementGraph::chain(3, false).unwrap();
        let phi = vec![Octant::new(1), Octant::new(3), Octant::new(6)];
        let dist = |theta: [i64; 3], r: [bool; 3]| {
            let secrets = PatternSecrets {
                theta: theta.iter().map(|&k| Octant::new(k)).collect(),
                r: r.to_vec(),
                x: vec![true, false, false],
                phi: phi.clone(),
            };
            let mut p = [0.0; 8];
            for (w, label) in enumerate_branches(3, |src| {
                let mut s = HonestServer::new(&g, EntanglePlacement::Server, src);
                Ok(run_bqc(&g, &secrets, &mut s, &mut Transcript::disabled())?.classical_label())
            })
            .unwrap()
            {
                p[label] += w;
            }
            p
        };
        let reference = dist([0, 0, 0], [false; 3]);
        for theta in [[1, 5, 2], [7, 7, 7], [4, 0, 3]] {
            for r in [[true, false, true], [false, true, true]] {
                let p = dist(theta, r);
                for i in 0..8 {
                    assert!((p[i] - reference[i]).abs() < 1e-12);
                }
            }
        }
    }
}
