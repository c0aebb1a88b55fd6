//! Output distributions of the two-client experiment in the three modes,
//! and the distances between them.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{avg_distance, distance_from_uniform, two_bit_labels, Algorithm, Distribution, ExperimentConfig, Mode};
use crate::exec::Execution;
use crate::hardware::NoiseParams;
use crate::qline::{sample_two_client, two_client_distribution_on, SessionRng, SessionSecrets, TwoClientSetup};
use crate::quantum::Octant;
use crate::transcript::Party;
use crate::{Error, Result};

/// Shots per independently seeded block. Blocks are the unit of parallel
/// work; the result does not depend on how they are scheduled.
pub const SHOT_BLOCK: u64 = 8192;

/// Threshold below which two distributions count as indistinguishable.
pub const CONFUSION_THRESHOLD: f64 = 0.05;

fn aggregate_secrets(alg: &Algorithm, s: u32) -> SessionSecrets {
    let theta = [Octant::new(i64::from(s & 7)), Octant::new(i64::from(s >> 3 & 7))];
    let r = [s >> 6 & 1 == 1, s >> 7 & 1 == 1];
    SessionSecrets::two_client(theta, [Octant::ZERO; 2], r, [false; 2], alg.phi, alg.x)
}

/// Exact distribution of `(m₁, m₂)`, averaged over all 256 aggregate
/// secrets `(θ₁, θ₂, r₁, r₂)`. Without noise every secret gives the same
/// answer; the Pockels-cell offset makes the noisy one secret-dependent.
pub fn exact_distribution(alg: &Algorithm, noise: Option<&NoiseParams>) -> Result<Distribution> {
    let setup = TwoClientSetup::new(noise)?;
    let mut p = [0.0; 4];
    for s in 0..256 {
        let q = two_client_distribution_on(&setup, &aggregate_secrets(alg, s))?;
        for (a, b) in p.iter_mut().zip(q) {
            *a += b / 256.0;
        }
    }
    Distribution::from_probs(two_bit_labels(), p.to_vec())
}

/// Seed of one shot block, derived from the run seed, the algorithm's
/// position and the block index.
pub fn block_seed(seed: u64, alg_index: usize, block: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((alg_index as u64) << 32 | block);
    rng.next_u64()
}

fn sample_block(setup: &TwoClientSetup, alg: &Algorithm, shots: u64, seed: u64) -> Result<[u64; 4]> {
    let mut rng = SessionRng::new(seed);
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        let secrets = SessionSecrets::random(2, alg.phi.to_vec(), alg.x.to_vec(), &mut rng);
        let out = sample_two_client(setup, &secrets, rng.party(Party::Server))?;
        counts[out.label()] += 1;
    }
    Ok(counts)
}

/// Frequencies from `shots` runs of the full protocol. Every shot draws
/// fresh client secrets from the clients' streams and outcomes from the
/// server's stream.
pub fn sampled_distributions(
    algorithms: &[Algorithm],
    noise: Option<&NoiseParams>,
    shots: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<Distribution>> {
    if shots == 0 {
        return Err(Error::Config("sampling needs shots > 0".into()));
    }
    let setup = TwoClientSetup::new(noise)?;
    let blocks = shots.div_ceil(SHOT_BLOCK);
    let mut cells = Vec::new();
    for i in 0..algorithms.len() {
        for b in 0..blocks {
            cells.push((i, b));
        }
    }
    let results = exec.map(cells, |(i, b)| {
        let n = SHOT_BLOCK.min(shots - b * SHOT_BLOCK);
        sample_block(&setup, &algorithms[i], n, block_seed(seed, i, b)).map(|c| (i, c))
    });
    let mut counts = vec![[0u64; 4]; algorithms.len()];
    for r in results {
        let (i, c) = r?;
        for (a, b) in counts[i].iter_mut().zip(c) {
            *a += b;
        }
    }
    counts
        .into_iter()
        .map(|c| Distribution::from_counts(two_bit_labels(), c.to_vec()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectnessRow {
    pub algorithm: Algorithm,
    pub label: String,
    pub ideal: Distribution,
    pub noisy: Option<Distribution>,
    pub sampled: Option<Distribution>,
    pub ideal_distance_from_uniform: f64,
    pub noisy_distance_from_uniform: Option<f64>,
    pub sampled_distance_from_uniform: Option<f64>,
    pub noisy_vs_ideal: Option<f64>,
    pub sampled_vs_noisy: Option<f64>,
}

/// Pairwise average distances; rows and columns follow the algorithm list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    /// `"noisy-noisy"` or `"sampled-noisy"`: what the rows and columns hold.
    pub kind: String,
    pub labels: Vec<String>,
    pub cells: Vec<Vec<f64>>,
    pub threshold: f64,
    pub below_threshold: Vec<Vec<bool>>,
}

impl ConfusionMatrix {
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.cells.len()).map(|i| self.cells[i][i]).collect()
    }
}

/// `cells[i][j] = avg_distance(rows[i], cols[j])`.
pub fn confusion_matrix(
    kind: &str,
    labels: Vec<String>,
    rows: &[Distribution],
    cols: &[Distribution],
) -> Result<ConfusionMatrix> {
    if rows.len() < 2 || rows.len() != cols.len() || labels.len() != rows.len() {
        return Err(Error::ParameterOutOfRange(
            "confusion matrix needs at least two algorithms and matching rows and columns".into(),
        ));
    }
    let cells = rows
        .iter()
        .map(|r| cols.iter().map(|c| avg_distance(r, c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let below_threshold = cells
        .iter()
        .map(|row| row.iter().map(|&d| d <= CONFUSION_THRESHOLD).collect())
        .collect();
    Ok(ConfusionMatrix {
        kind: kind.to_string(),
        labels,
        cells,
        threshold: CONFUSION_THRESHOLD,
        below_threshold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectnessReport {
    pub mode: Mode,
    pub shots: Option<u64>,
    pub seed: u64,
    pub noise: NoiseParams,
    pub rows: Vec<CorrectnessRow>,
    pub confusion_noisy: Option<ConfusionMatrix>,
    pub confusion_sampled: Option<ConfusionMatrix>,
}

/// Ideal distributions always; noisy ones in `noisy` and `sampled` mode;
/// protocol shots under the noise model in `sampled` mode.
pub fn run_correctness(config: &ExperimentConfig, exec: Execution) -> Result<CorrectnessReport> {
    config.validate()?;
    let algorithms = config.algorithms();
    let noise = config.noise;
    let with_noise = config.mode != Mode::Ideal;
    let exact = exec.map(algorithms.clone(), |a| -> Result<_> {
        let ideal = exact_distribution(&a, None)?;
        let noisy = if with_noise {
            Some(exact_distribution(&a, Some(&noise))?)
        } else {
            None
        };
        Ok((ideal, noisy))
    });
    let exact = exact.into_iter().collect::<Result<Vec<_>>>()?;
    let sampled = if config.mode == Mode::Sampled {
        Some(sampled_distributions(
            &algorithms,
            Some(&noise),
            config.shots,
            config.seed,
            exec,
        )?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(algorithms.len());
    for (i, (alg, (ideal, noisy))) in algorithms.iter().zip(exact).enumerate() {
        let sampled = sampled.as_ref().map(|s| s[i].clone());
        rows.push(CorrectnessRow {
            algorithm: *alg,
            label: alg.label(),
            ideal_distance_from_uniform: distance_from_uniform(&ideal),
            noisy_distance_from_uniform: noisy.as_ref().map(distance_from_uniform),
            sampled_distance_from_uniform: sampled.as_ref().map(distance_from_uniform),
            noisy_vs_ideal: noisy.as_ref().map(|n| avg_distance(n, &ideal)).transpose()?,
            sampled_vs_noisy: match (&sampled, &noisy) {
                (Some(s), Some(n)) => Some(avg_distance(s, n)?),
                _ => None,
            },
            ideal,
            noisy,
            sampled,
        });
    }

    let labels: Vec<String> = rows.iter().map(|r| r.label.clone()).collect();
    let noisy: Option<Vec<Distribution>> = rows.iter().map(|r| r.noisy.clone()).collect();
    let sampled: Option<Vec<Distribution>> = rows.iter().map(|r| r.sampled.clone()).collect();
    let confusion_noisy = match &noisy {
        Some(n) if n.len() >= 2 => Some(confusion_matrix("noisy-noisy", labels.clone(), n, n)?),
        _ => None,
    };
    let confusion_sampled = match (&sampled, &noisy) {
        (Some(s), Some(n)) if n.len() >= 2 => Some(confusion_matrix("sampled-noisy", labels, s, n)?),
        _ => None,
    };
    Ok(CorrectnessReport {
        mode: config.mode,
        shots: (config.mode == Mode::Sampled).then_some(config.shots),
        seed: config.seed,
        noise,
        rows,
        confusion_noisy,
        confusion_sampled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_zero_angles_are_uniform() {
        let d = exact_distribution(&Algorithm::new(0, 0, false, false), None).unwrap();
        assert!(distance_from_uniform(&d) < 1e-12);
    }

    #[test]
    fn noise_moves_generic_algorithms() {
        let a = Algorithm::new(2, 2, false, false);
        let ideal = exact_distribution(&a, None).unwrap();
        let noisy = exact_distribution(&a, Some(&NoiseParams::EXPERIMENTAL)).unwrap();
        assert!(avg_distance(&ideal, &noisy).unwrap() > 0.01);
    }

    #[test]
    fn sampling_is_schedule_independent() {
        let algs = [Algorithm::new(1, 3, true, false), Algorithm::new(2, 2, false, false)];
        let shots = 2 * SHOT_BLOCK + 17;
        let seq = sampled_distributions(&algs, None, shots, 5, Execution::Sequential).unwrap();
        let par = sampled_distributions(&algs, None, shots, 5, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq[0].shots(), Some(shots));
        let other = sampled_distributions(&algs, None, shots, 6, Execution::Sequential).unwrap();
        assert_ne!(seq, other);
    }

    #[test]
    fn confusion_needs_two() {
        let d = exact_distribution(&Algorithm::new(0, 0, false, false), None).unwrap();
        assert!(confusion_matrix(
            "noisy-noisy",
            vec!["a".into()],
            std::slice::from_ref(&d),
            std::slice::from_ref(&d)
        )
        .is_err());
    }

    #[test]
    fn report_in_noisy_mode() {
        let cfg = ExperimentConfig {
            mode: Mode::Noisy,
            algorithms: vec![Algorithm::new(2, 2, false, false), Algorithm::new(2, 2, true, false)],
            ..Default::default()
        };
        let r = run_correctness(&cfg, Execution::Parallel).unwrap();
        let c = r.confusion_noisy.unwrap();
        assert_eq!(c.diagonal(), vec![0.0, 0.0]);
        assert_eq!(c.cells[0][1], c.cells[1][0]);
        assert!(r.confusion_sampled.is_none());
        assert!(r.rows[0].sampled.is_none());
    }
}
