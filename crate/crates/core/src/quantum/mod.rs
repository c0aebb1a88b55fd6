//! Exact-angle dense quantum state engine.
//!
//! Protocol angles are [`Octant`]s (integers mod 8, angle `kπ/4`) and only
//! become complex phases at the gate-matrix boundary, so blind-angle
//! arithmetic is exact. Hardware imperfections that are not multiples of
//! `π/4` use plain radians through [`RotationAngle`].

mod basis;
mod density;
mod gates;
mod measure;
mod octant;
mod state;

pub use basis::Basis2;
pub use density::{mixture_average, DensityMatrix};
pub use gates::{rz_gate, RotationAngle, Unitary2};
pub use measure::{enumerate_branches, ForcedOutcomes, OutcomeSource};
pub use octant::Octant;
pub use state::StateVector;

pub use num_complex::Complex64;

/// Tolerance for exact-algebra checks (norms, traces, unitarity).
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for composed operator equivalence.
pub const COMPOSED_TOL: f64 = 1e-9;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
