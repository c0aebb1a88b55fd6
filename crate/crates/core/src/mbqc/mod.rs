//! Measurement-calculus layer: open graphs with flow, blind angle
//! arithmetic and the single-client blind computation protocol run against
//! an abstract [`Server`].

mod graph;
mod pattern;
mod protocol;
mod server;

pub use graph::{GraphSpec, MeasurementGraph};
pub use pattern::{blind_delta, decrypt_outcome, OutcomeRecord, PatternSecrets};
pub(crate) use protocol::drive_measurements;
pub use protocol::{run_bqc, BqcOutput};
pub use server::{EntanglePlacement, HonestServer, IdealStation, MeasurementReply, Server, Station};
