//! The n-client protocol on an arbitrary measurement graph.

use super::{client_rotate_layer, orchestrator_theta_prime, CorrectionMode, SessionSecrets};
use crate::hardware::{noisy_source_state, NoiseParams};
use crate::mbqc::{drive_measurements, BqcOutput, EntanglePlacement, HonestServer, MeasurementGraph, Server};
use crate::quantum::{enumerate_branches, DensityMatrix, StateVector};
use crate::transcript::{Party, Payload, Stage, Transcript};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MultiClientOptions {
    pub placement: EntanglePlacement,
    pub correction: CorrectionMode,
    /// Source noise. Only defined for a source-entangled two-vertex graph.
    pub noise: Option<NoiseParams>,
}

/// `Π CZ |+⟩^{⊗n}` over the graph's edges.
pub fn source_graph_state(graph: &MeasurementGraph) -> Result<DensityMatrix> {
    let mut psi = StateVector::empty();
    for _ in 0..graph.num_vertices() {
        psi = psi.tensor(&StateVector::plus());
    }
    for &(a, b) in graph.edges() {
        psi.apply_cz(a, b)?;
    }
    Ok(DensityMatrix::from_pure(&psi))
}

fn initial_state(graph: &MeasurementGraph, options: &MultiClientOptions) -> Result<DensityMatrix> {
    match (options.placement, options.noise) {
        (EntanglePlacement::Source, None) => source_graph_state(graph),
        (EntanglePlacement::Source, Some(p)) => {
            if graph.num_vertices() != 2 || graph.edges() != [(0, 1)] {
                return Err(Error::Unsupported(
                    "source noise is only modelled for the two-qubit pair".into(),
                ));
            }
            noisy_source_state(&p)
        }
        (EntanglePlacement::Server, None) => {
            let mut psi = StateVector::empty();
            for _ in 0..graph.num_vertices() {
                psi = psi.tensor(&StateVector::plus());
            }
            Ok(DensityMatrix::from_pure(&psi))
        }
        (EntanglePlacement::Server, Some(_)) => Err(Error::Unsupported(
            "noise is only modelled for source-entangled pairs".into(),
        )),
    }
}

/// Runs the protocol against `server`. Client 0 receives any quantum output;
/// every client receives the classical result.
pub fn run_multi_client<S: Server + ?Sized>(
    graph: &MeasurementGraph,
    secrets: &SessionSecrets,
    options: &MultiClientOptions,
    server: &mut S,
    transcript: &mut Transcript,
) -> Result<BqcOutput> {
    let pattern = secrets.pattern(graph, options.correction)?;
    let n = graph.num_vertices();
    let k = secrets.n_clients();
    let all: Vec<usize> = (0..n).collect();

    for j in 0..k {
        transcript.push(Stage::Preparation, Party::Client(j), Party::Orchestrator, || {
            Payload::SecretParams {
                theta: all.iter().map(|&v| (v, secrets.theta[j][v])).collect(),
                r: all.iter().map(|&v| (v, secrets.r[j][v])).collect(),
                x: if j == 0 {
                    all.iter().map(|&v| (v, secrets.x[v])).collect()
                } else {
                    vec![]
                },
                phi: if j + 1 == k {
                    all.iter().map(|&v| (v, secrets.phi[v])).collect()
                } else {
                    vec![]
                },
            }
        });
    }

    let mut state = initial_state(graph, options)?;
    let origin = match options.placement {
        EntanglePlacement::Source => Party::Source,
        EntanglePlacement::Server => Party::Server,
    };
    transcript.push_qubits(Stage::Transmission, origin, Party::Client(0), &all, &state);
    for j in 0..k {
        client_rotate_layer(&mut state, secrets.client_thetas(j))?;
        let next = if j + 1 == k {
            Party::Server
        } else {
            Party::Client(j + 1)
        };
        transcript.push_qubits(Stage::Transmission, Party::Client(j), next, &all, &state);
    }
    server.receive(&all, state)?;

    if options.correction == CorrectionMode::Physical {
        for v in 0..n {
            let client_thetas: Vec<_> = (0..k).map(|j| secrets.theta[j][v]).collect();
            let theta = orchestrator_theta_prime(secrets.target_theta[v], &client_thetas);
            transcript.push(Stage::Transmission, Party::Orchestrator, Party::Server, || {
                Payload::ThetaPrime { vertex: v, theta }
            });
            server.rotate(v, theta)?;
        }
    }
    if options.placement == EntanglePlacement::Server {
        for &(a, b) in graph.edges() {
            server.entangle(a, b)?;
        }
    }

    let out = drive_measurements(graph, &pattern, Party::Orchestrator, server, transcript)?;
    let bits = out.classical();
    for j in 0..k {
        transcript.push(Stage::Measurement, Party::Orchestrator, Party::Client(j), || {
            Payload::Result { bits: bits.clone() }
        });
    }
    Ok(out)
}

/// Every measurement branch with its probability, against an honest server
/// with ideal measurements.
pub fn multi_client_distribution(
    graph: &MeasurementGraph,
    secrets: &SessionSecrets,
    options: &MultiClientOptions,
) -> Result<Vec<(f64, BqcOutput)>> {
    enumerate_branches(graph.num_measured(), |forced| {
        let mut server = HonestServer::new(graph, options.placement, forced);
        run_multi_client(graph, secrets, options, &mut server, &mut Transcript::disabled())
    })
}
