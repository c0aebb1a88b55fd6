//! Blindness figures of merit for the three averaging grids.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{simulate_tomography, ExperimentConfig, Mode};
use crate::exec::Execution;
use crate::quantum::mixture_average;
use crate::security::{grid_states, server_view_blindness, BlindnessGrid, BlindnessResult};
use crate::Result;

/// Values measured in the two-client experiment, reported for comparison
/// only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentalReference {
    pub fidelity: f64,
    pub entropy: f64,
}

pub fn experimental_reference(grid: BlindnessGrid) -> ExperimentalReference {
    let (fidelity, entropy) = match grid {
        BlindnessGrid::FirstQubit => (0.99949, 0.99852),
        BlindnessGrid::SecondQubit => (0.99870, 0.9963),
        BlindnessGrid::FullState => (0.99433, 1.9836),
    };
    ExperimentalReference { fidelity, entropy }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindnessEntry {
    #[serde(flatten)]
    pub result: BlindnessResult,
    pub reference: ExperimentalReference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlindnessReport {
    pub mode: Mode,
    pub seed: u64,
    pub tomography_shots: Option<u64>,
    pub entries: Vec<BlindnessEntry>,
}

/// Exact averages in `ideal` and `noisy` mode. In `sampled` mode every one
/// of the 64 noisy states is reconstructed by simulated tomography before
/// averaging, so finite statistics pull fidelity and entropy below their
/// exact values.
pub fn run_blindness(config: &ExperimentConfig, exec: Execution) -> Result<BlindnessReport> {
    config.validate()?;
    let noise = (config.mode != Mode::Ideal).then_some(config.noise);
    let shots = config.blindness.tomography_shots;
    let outcome = config.blindness.outcome;
    let mut entries = Vec::new();
    for (g, &grid) in config.blindness.grids.iter().enumerate() {
        let result = match config.mode {
            Mode::Ideal | Mode::Noisy => server_view_blindness(grid, noise.as_ref(), outcome)?,
            Mode::Sampled => {
                let states = grid_states(grid, noise.as_ref(), outcome)?;
                let seed = config.seed;
                let estimates = exec.map(states.into_iter().enumerate().collect(), |(i, rho)| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream((g as u64) << 32 | i as u64);
                    simulate_tomography(&rho, shots, &mut rng)
                });
                let estimates = estimates.into_iter().collect::<Result<Vec<_>>>()?;
                BlindnessResult::from_average(grid, mixture_average(&estimates, None)?)?
            }
        };
        entries.push(BlindnessEntry {
            result,
            reference: experimental_reference(grid),
        });
    }
    Ok(BlindnessReport {
        mode: config.mode,
        seed: config.seed,
        tomography_shots: (config.mode == Mode::Sampled).then_some(shots),
        entries,
    })
}
