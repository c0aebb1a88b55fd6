//! Actor-level simulation of blind computation on a line of clients.
//!
//! Qubits leave a source (or the server), pass through every client, and end
//! at the server. Each client applies secret `Rz` rotations on the way; the
//! orchestrator knows all secrets and drives the measurement rounds. The
//! two-client experiment with its hardware feed-forward lives in
//! [`two_client`], the general protocol in [`multi`].

mod crsr;
mod multi;
mod secrets;
mod two_client;

use serde::{Deserialize, Serialize};

pub use crate::mbqc::EntanglePlacement;
pub use crsr::{
    client_rotate_layer, orchestrator_theta_prime, run_crsr, run_crsr_with, source_emit, ClientStrategy, CrsrRun,
    FixedClient, HonestClient,
};
pub use multi::{multi_client_distribution, run_multi_client, source_graph_state, MultiClientOptions};
pub use secrets::{SessionRng, SessionSecrets};
pub use two_client::{
    run_two_client_session, sample_two_client, two_client_distribution, two_client_distribution_on, TwoClientOutcome,
    TwoClientSetup,
};

/// How the orchestrator reconciles the clients' rotations with its own
/// angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrectionMode {
    /// The server applies `Rz(θ′)` so every qubit carries the orchestrator's
    /// target angle.
    #[default]
    Physical,
    /// No `θ′` is sent; the client sum is folded into the measurement angle.
    Fused,
}
