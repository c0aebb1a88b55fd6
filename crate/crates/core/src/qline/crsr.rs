//! Collaborative remote state rotation: a qubit travels through every
//! client, each adding a secret `Rz`, and the orchestrator tells the server
//! the single correction `θ′` that turns the sum into its chosen angle.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::SessionRng;
use crate::hardware::{noisy_source_state, NoiseParams};
use crate::quantum::{rz_gate, DensityMatrix, Octant, StateVector};
use crate::transcript::{Party, Payload, Stage, Transcript};
use crate::{Error, Result};

/// The source's two-qubit state: `CZ(|+⟩⊗|+⟩)` without noise, the noisy
/// mixture otherwise.
pub fn source_emit(noise: Option<&NoiseParams>) -> Result<DensityMatrix> {
    match noise {
        None => Ok(DensityMatrix::from_pure(&StateVector::cluster_pair())),
        Some(p) => noisy_source_state(p),
    }
}

/// Applies `Rz(θ_q)` to every qubit `q` of the travelling state.
pub fn client_rotate_layer(state: &mut DensityMatrix, thetas: &[Octant]) -> Result<()> {
    if thetas.len() != state.num_qubits() {
        return Err(Error::Arity {
            expected: state.num_qubits(),
            got: thetas.len(),
        });
    }
    for (q, &t) in thetas.iter().enumerate() {
        if t != Octant::ZERO {
            state.apply_single(q, &rz_gate(t))?;
        }
    }
    Ok(())
}

/// `θ′ = θ − Σⱼ θⱼ`.
pub fn orchestrator_theta_prime(theta: Octant, client_thetas: &[Octant]) -> Octant {
    theta - client_thetas.iter().sum::<Octant>()
}

/// How a client behaves in one remote-rotation round. Honest clients report
/// the angle they apply; adversarial ones may do anything.
pub trait ClientStrategy {
    /// Angle reported to the orchestrator.
    fn report(&mut self, rng: &mut ChaCha8Rng) -> Octant;
    /// Acts on the travelling single-qubit state.
    fn act(&mut self, reported: Octant, state: &mut DensityMatrix) -> Result<()> {
        client_rotate_layer(state, &[reported])
    }
}

/// Samples `θⱼ` uniformly from its own stream.
#[derive(Debug, Clone, Copy, Default)]
pub struct HonestClient;

impl ClientStrategy for HonestClient {
    fn report(&mut self, rng: &mut ChaCha8Rng) -> Octant {
        Octant::new(rng.random_range(0..8))
    }
}

/// Uses a fixed angle. Models both a coalition member choosing its angle
/// and an honest client whose random draw is being enumerated.
#[derive(Debug, Clone, Copy)]
pub struct FixedClient(pub Octant);

impl ClientStrategy for FixedClient {
    fn report(&mut self, _rng: &mut ChaCha8Rng) -> Octant {
        self.0
    }
}

/// Everything a run of the rotation round produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CrsrRun {
    /// The server's qubit after applying `θ′`.
    pub final_state: DensityMatrix,
    pub client_thetas: Vec<Octant>,
    pub theta_prime: Octant,
    /// State handed on by client 0, the honest client in the security
    /// analysis.
    pub client0_output: DensityMatrix,
}

/// Remote rotation with `n_clients` honest clients.
pub fn run_crsr(
    n_clients: usize,
    theta: Octant,
    rho: &DensityMatrix,
    rng: &mut SessionRng,
    transcript: &mut Transcript,
) -> Result<CrsrRun> {
    let mut clients: Vec<Box<dyn ClientStrategy>> = (0..n_clients).map(|_| Box::new(HonestClient) as _).collect();
    run_crsr_with(theta, rho, &mut clients, rng, transcript)
}

/// Remote rotation with explicit client behaviour; client `j` sits at
/// position `j` on the line.
pub fn run_crsr_with(
    theta: Octant,
    rho: &DensityMatrix,
    clients: &mut [Box<dyn ClientStrategy>],
    rng: &mut SessionRng,
    transcript: &mut Transcript,
) -> Result<CrsrRun> {
    if clients.is_empty() {
        return Err(Error::Empty("remote rotation needs at least one client"));
    }
    if rho.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "remote rotation acts on one qubit, got {}",
            rho.num_qubits()
        )));
    }
    rho.validate()?;
    const V: usize = 0;
    let n = clients.len();

    let mut reported = Vec::with_capacity(n);
    for (j, c) in clients.iter_mut().enumerate() {
        let t = c.report(rng.party(Party::Client(j)));
        transcript.push(Stage::Preparation, Party::Client(j), Party::Orchestrator, || {
            Payload::SecretParams {
                theta: vec![(V, t)],
                r: vec![],
                x: vec![],
                phi: vec![],
            }
        });
        reported.push(t);
    }

    let mut state = rho.clone();
    transcript.push_qubits(Stage::Transmission, Party::Server, Party::Client(0), &[V], &state);
    let mut client0_output = None;
    for (j, c) in clients.iter_mut().enumerate() {
        c.act(reported[j], &mut state)?;
        if state.num_qubits() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "client {j} returned {} qubits",
                state.num_qubits()
            )));
        }
        let next = if j + 1 == n {
            Party::Server
        } else {
            Party::Client(j + 1)
        };
        transcript.push_qubits(Stage::Transmission, Party::Client(j), next, &[V], &state);
        if j == 0 {
            client0_output = Some(state.clone());
        }
    }

    let theta_prime = orchestrator_theta_prime(theta, &reported);
    transcript.push(Stage::Transmission, Party::Orchestrator, Party::Server, || {
        Payload::ThetaPrime {
            vertex: V,
            theta: theta_prime,
        }
    });
    state.apply_single(0, &rz_gate(theta_prime))?;
    Ok(CrsrRun {
        final_state: state,
        client_thetas: reported,
        theta_prime,
        client0_output: client0_output.expect("at least one client"),
    })
}
