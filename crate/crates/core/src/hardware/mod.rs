//! Model of the experimental measurement chain: waveplate and Pockels-cell
//! stations, the phase-shift table, the feed-forward logic, drive voltages,
//! the delay-line budget and the source noise.

mod feedforward;
mod noise;
mod optics;
mod timing;

pub use feedforward::{delta2_table, ff_circuit, lines_to_pc_shift, FfOutput, PhaseShiftEntry, VoltageMap};
pub use noise::{noisy_source_state, psi_minus, psi_plus, source_basis, source_basis_weights, NoiseParams};
pub use optics::{
    apply_pc_imperfection, build_o_delta1, build_o_delta2, hwp, pockels, qwp, Element, HardwareStation, OpticalChain,
};
pub use timing::{timing_check, TimingBudget, TimingReport};
