//! Ideal resources, the remote-rotation simulator, exact real/ideal view
//! comparison and blindness checks.

mod blindness;
mod ideal;
mod report;
mod views;

pub use blindness::{
    delta_uniformity, grid_states, server_view_blindness, server_view_joint, BlindnessGrid, BlindnessResult,
    DeltaUniformity,
};
pub use ideal::{ideal_mcbqc, ideal_rsr, CorruptionFlags, CorruptionMap, CorruptionPayload, Filter, TargetComputation};
pub use report::{crsr_security_sweep, security_report, CrsrVerdict, NegativeControl, SecurityReport};
pub use views::{
    all_assignments, enumerate_views, simulator_crsr, simulator_crsr_with, substituted_real_view, CanonicalState,
    HonestAngle, Probe, SimulatedView, ViewDistribution, ViewRecord, World, CANONICAL_STEP,
};
