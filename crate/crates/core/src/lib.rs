//! Simulator for multi-client blind quantum computation on a linear quantum
//! network (Qline).
//!
//! A source emits qubits that travel through a chain of clients, each of
//! which applies a secret `Rz` rotation, before reaching a measuring server.
//! A trusted classical orchestrator turns the clients' secrets into blinded
//! measurement angles so the server learns nothing about inputs, algorithm or
//! outputs.
//!
//! The crate is organised bottom-up:
//!
//! - [`quantum`]: exact-angle dense state engine (octant angles, state
//!   vectors, density matrices, fidelity/entropy).
//! - [`mbqc`]: measurement graphs with flow, blind angle arithmetic and the
//!   single-client blind computation protocol against an abstract server.
//! - [`qline`]: the actor-level Qline simulation: collaborative remote state
//!   rotation, the two-client experiment and the n-client protocol.
//! - [`hardware`]: waveplate/Pockels-cell operator chains, the feed-forward
//!   logic, voltages, timing and the source noise model.
//! - [`security`]: ideal resources, the CRSR simulator and exhaustive
//!   real/ideal view comparison plus blindness checks.
//! - [`analysis`]: distributions, distances, confusion matrices, CHSH and the
//!   config-driven experiment runners used by the `qline` CLI.
//!
//! Qubits are indexed from 0; qubit 0 is the leftmost ket symbol and the most
//! significant bit of a basis index.

pub mod analysis;
pub mod error;
pub mod exec;
pub mod hardware;
pub mod mbqc;
pub mod qline;
pub mod quantum;
pub mod security;
pub mod transcript;

pub use error::{Error, Result};
pub use exec::Execution;
pub use quantum::{DensityMatrix, Octant, StateVector, Unitary2};
