//! Config-driven experiment runners and the statistics they report.

mod blindness;
mod chsh;
mod config;
mod correctness;
mod distribution;
mod hwcheck;
mod report;
mod tomography;

pub use blindness::{experimental_reference, run_blindness, BlindnessEntry, BlindnessReport, ExperimentalReference};
pub use chsh::{chsh_report, chsh_value, ChshReport, EXPERIMENTAL_CHSH};
pub use config::{default_grid, Algorithm, BlindnessConfig, ExperimentConfig, Mode};
pub use correctness::{
    block_seed, confusion_matrix, exact_distribution, run_correctness, sampled_distributions, ConfusionMatrix,
    CorrectnessReport, CorrectnessRow, CONFUSION_THRESHOLD, SHOT_BLOCK,
};
pub use distribution::{avg_distance, distance_from_uniform, two_bit_labels, Distribution, NORMALIZATION_TOL};
pub use hwcheck::{
    ff_encoding_fixture, phase_shift_fixture, run_hw_check, FfEncodingRow, HwCheckReport, PhaseShiftRow, CHAIN_PROBES,
};
pub use report::{blindness_csv, confusion_csv, correctness_csv, run_subcommand, security_csv, RunOutput, Subcommand};
pub use tomography::simulate_tomography;
