//! What the server holds, averaged over the clients' secrets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exec::Execution;
use crate::hardware::{HardwareStation, NoiseParams};
use crate::mbqc::{blind_delta, MeasurementGraph, Station};
use crate::qline::{
    client_rotate_layer, multi_client_distribution, source_emit, CorrectionMode, MultiClientOptions, SessionSecrets,
};
use crate::quantum::{mixture_average, DensityMatrix, ForcedOutcomes, Octant, StateVector};
use crate::{Error, Result};

/// The three averaging procedures of the two-client experiment. Each runs
/// over the 64 pairs of client angles named in the variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlindnessGrid {
    /// First photon measured at `δ₁ = π`; average over `(θ₁ᴬ, θ₁ᴮ)` of the
    /// second photon's post-measurement state.
    SecondQubit,
    /// Second photon measured at `δ₂ = 3π/2`; average over `(θ₂ᴬ, θ₂ᴮ)` of
    /// the first photon's state.
    FirstQubit,
    /// No measurement; average over `(θ₁ᴬ, θ₂ᴮ)` of the received pair.
    FullState,
}

impl BlindnessGrid {
    pub const ALL: [BlindnessGrid; 3] = [
        BlindnessGrid::SecondQubit,
        BlindnessGrid::FirstQubit,
        BlindnessGrid::FullState,
    ];

    pub fn num_qubits(self) -> usize {
        match self {
            BlindnessGrid::FullState => 2,
            _ => 1,
        }
    }
}

/// Averaged state and its figures of merit against the maximally mixed
/// state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindnessResult {
    pub grid: BlindnessGrid,
    pub avg_state: DensityMatrix,
    pub fidelity_with_mixed: f64,
    pub trace_distance_to_mixed: f64,
    /// Von Neumann entropy in bits.
    pub entropy: f64,
}

impl BlindnessResult {
    pub fn from_average(grid: BlindnessGrid, avg_state: DensityMatrix) -> Result<Self> {
        let mixed = DensityMatrix::maximally_mixed(avg_state.num_qubits());
        Ok(BlindnessResult {
            grid,
            fidelity_with_mixed: avg_state.fidelity(&mixed)?,
            trace_distance_to_mixed: avg_state.trace_distance(&mixed)?,
            entropy: avg_state.von_neumann_entropy(),
            avg_state,
        })
    }
}

/// The 64 states the server holds for one grid, in `(a, b)` row-major order
/// of the two varied angles. `outcome` is the reported outcome the
/// post-measurement state is conditioned on.
pub fn grid_states(grid: BlindnessGrid, noise: Option<&NoiseParams>, outcome: bool) -> Result<Vec<DensityMatrix>> {
    let source = source_emit(noise)?;
    let station = HardwareStation::new(noise.map_or(0.0, |p| p.pc_phase_offset));
    let mut out = Vec::with_capacity(64);
    for a in Octant::ALL {
        for b in Octant::ALL {
            let mut rho = source.clone();
            let z = Octant::ZERO;
            let (first, second) = match grid {
                BlindnessGrid::SecondQubit => ([a, z], [b, z]),
                BlindnessGrid::FirstQubit => ([z, a], [z, b]),
                BlindnessGrid::FullState => ([a, z], [z, b]),
            };
            client_rotate_layer(&mut rho, &first)?;
            client_rotate_layer(&mut rho, &second)?;
            let state = match grid {
                BlindnessGrid::FullState => rho,
                BlindnessGrid::SecondQubit => measured(&rho, 0, station.setting(0, Octant::PI), outcome)?,
                BlindnessGrid::FirstQubit => measured(&rho, 1, station.setting(1, Octant::new(6)), outcome)?,
            };
            out.push(state);
        }
    }
    Ok(out)
}

fn measured(
    rho: &DensityMatrix,
    q: usize,
    (basis, flip): (crate::quantum::Basis2, bool),
    outcome: bool,
) -> Result<DensityMatrix> {
    let mut forced = ForcedOutcomes::new(vec![outcome ^ flip]);
    Ok(rho.measure_in(q, &basis, &mut forced, false)?.1)
}

/// Exact secret-averaged server state for one grid.
pub fn server_view_blindness(
    grid: BlindnessGrid,
    noise: Option<&NoiseParams>,
    outcome: bool,
) -> Result<BlindnessResult> {
    let states = grid_states(grid, noise, outcome)?;
    BlindnessResult::from_average(grid, mixture_average(&states, None)?)
}

/// The server's whole pre-measurement view of the two-client run: the
/// first angle `δ₁` (as a three-qubit computational register) together with
/// the received pair, averaged over every aggregate secret. Blindness means
/// this does not depend on `(φ, x)`.
pub fn server_view_joint(phi: [Octant; 2], x: [bool; 2], noise: Option<&NoiseParams>) -> Result<DensityMatrix> {
    let graph = MeasurementGraph::two_chain(false);
    let source = source_emit(noise)?;
    let mut states = Vec::with_capacity(256);
    for s in 0..256u32 {
        let t = [Octant::new(i64::from(s & 7)), Octant::new(i64::from(s >> 3 & 7))];
        let r = [s >> 6 & 1 == 1, s >> 7 & 1 == 1];
        let secrets = SessionSecrets::two_client(t, [Octant::ZERO; 2], r, [false; 2], phi, x);
        let pattern = secrets.pattern(&graph, CorrectionMode::Fused)?;
        let delta1 = blind_delta(0, &pattern, pattern.phi[0]);
        let mut rho = source.clone();
        client_rotate_layer(&mut rho, &t)?;
        let register = DensityMatrix::from_pure(&StateVector::basis(3, delta1.k() as usize)?);
        states.push(register.tensor(&rho));
    }
    mixture_average(&states, None)
}

/// Law of the angles the server receives, over every aggregate secret and
/// measurement branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaUniformity {
    pub phi: Vec<Octant>,
    pub x: Vec<bool>,
    /// `max |P(δ_v = d) − 1/8|` per measured vertex, in measurement order.
    pub marginal_max_deviation: Vec<f64>,
    /// `max |P(δ) − 8^{-k}|` over all angle tuples.
    pub joint_max_deviation: f64,
    pub uniform: bool,
}

/// Enumerates every `θ ∈ Aⁿ`, `r ∈ {0,1}ⁿ` with one client holding the
/// aggregate secrets (a sum of independent uniform shares is uniform, so
/// this covers any number of clients).
pub fn delta_uniformity(
    graph: &MeasurementGraph,
    phi: &[Octant],
    x: &[bool],
    exec: Execution,
) -> Result<DeltaUniformity> {
    let n = graph.num_vertices();
    if n > 4 {
        return Err(Error::Unsupported(format!(
            "exhaustive δ enumeration over {n} vertices"
        )));
    }
    let order: Vec<usize> = graph.measurement_order().collect();
    let k = order.len();
    let n_secrets = 16usize.pow(n as u32);
    let options = MultiClientOptions {
        correction: CorrectionMode::Fused,
        ..Default::default()
    };
    let parts = exec.map_range(n_secrets, |s| -> Result<Vec<(Vec<Octant>, f64)>> {
        let mut secrets = SessionSecrets::zero(1, phi.to_vec(), x.to_vec());
        for v in 0..n {
            let digit = s >> (4 * v) & 15;
            secrets.theta[0][v] = Octant::new(digit as i64 & 7);
            secrets.r[0][v] = digit & 8 != 0;
        }
        Ok(multi_client_distribution(graph, &secrets, &options)?
            .into_iter()
            .map(|(w, out)| (order.iter().map(|v| out.deltas[v]).collect(), w))
            .collect())
    });
    let mut joint: BTreeMap<Vec<Octant>, f64> = BTreeMap::new();
    let mut marginals = vec![[0.0; 8]; k];
    let scale = 1.0 / n_secrets as f64;
    for part in parts {
        for (deltas, w) in part? {
            for (m, d) in marginals.iter_mut().zip(&deltas) {
                m[d.k() as usize] += w * scale;
            }
            *joint.entry(deltas).or_insert(0.0) += w * scale;
        }
    }
    let target = 8f64.powi(-(k as i32));
    let total = 8usize.pow(k as u32);
    let joint_max_deviation = if joint.len() < total {
        target
    } else {
        joint.values().map(|p| (p - target).abs()).fold(0.0, f64::max)
    };
    let marginal_max_deviation: Vec<f64> = marginals
        .iter()
        .map(|m| m.iter().map(|p| (p - 0.125).abs()).fold(0.0, f64::max))
        .collect();
    let uniform = joint_max_deviation < 1e-12 && marginal_max_deviation.iter().all(|&d| d < 1e-12);
    Ok(DeltaUniformity {
        phi: phi.to_vec(),
        x: x.to_vec(),
        marginal_max_deviation,
        joint_max_deviation,
        uniform,
    })
}
