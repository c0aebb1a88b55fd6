//! The two-client experiment: an entangled pair through two clients, a
//! waveplate station for the first photon and a Pockels-cell station for
//! the delayed second photon, whose angle the feed-forward circuit picks
//! from the first click.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{client_rotate_layer, source_emit, CorrectionMode, SessionSecrets};
use crate::hardware::{ff_circuit, FfOutput, HardwareStation, NoiseParams};
use crate::mbqc::{blind_delta, EntanglePlacement, HonestServer, MeasurementGraph, Server};
use crate::quantum::{enumerate_branches, DensityMatrix, Octant, OutcomeSource};
use crate::transcript::{Party, Payload, Stage, Transcript};
use crate::{Error, Result};

/// One run of the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoClientOutcome {
    /// Server's reported outcomes.
    pub m1: bool,
    pub m2: bool,
    /// Outcomes after removing the one-time pads.
    pub m1_true: bool,
    pub m2_true: bool,
    pub delta1: Octant,
    pub delta2: Octant,
    pub ff: FfOutput,
}

impl TwoClientOutcome {
    /// `2·m₁ + m₂` over the corrected outcomes.
    pub fn label(&self) -> usize {
        usize::from(self.m1_true) << 1 | usize::from(self.m2_true)
    }
}

/// Hardware built once for many runs: both measurement stations and the
/// source state.
#[derive(Debug, Clone)]
pub struct TwoClientSetup {
    station: HardwareStation,
    source: DensityMatrix,
}

impl TwoClientSetup {
    /// The Pockels-cell phase error and source noise come from `noise`;
    /// `None` is the ideal setup.
    pub fn new(noise: Option<&NoiseParams>) -> Result<Self> {
        Ok(TwoClientSetup {
            station: HardwareStation::new(noise.map_or(0.0, |p| p.pc_phase_offset)),
            source: source_emit(noise)?,
        })
    }

    pub fn run<S: OutcomeSource>(
        &self,
        secrets: &SessionSecrets,
        outcomes: S,
        transcript: &mut Transcript,
    ) -> Result<TwoClientOutcome> {
        session(self, secrets, outcomes, transcript)
    }
}

/// Runs the experiment once on freshly built hardware.
pub fn run_two_client_session<S: OutcomeSource>(
    secrets: &SessionSecrets,
    noise: Option<&NoiseParams>,
    outcomes: S,
    transcript: &mut Transcript,
) -> Result<TwoClientOutcome> {
    TwoClientSetup::new(noise)?.run(secrets, outcomes, transcript)
}

fn session<S: OutcomeSource>(
    setup: &TwoClientSetup,
    secrets: &SessionSecrets,
    outcomes: S,
    transcript: &mut Transcript,
) -> Result<TwoClientOutcome> {
    let graph = MeasurementGraph::two_chain(false);
    if secrets.n_clients() != 2 {
        return Err(Error::Arity {
            expected: 2,
            got: secrets.n_clients(),
        });
    }
    // Aggregate angles; no θ′ is sent in the experiment.
    let pattern = secrets.pattern(&graph, CorrectionMode::Fused)?;
    for j in 0..2 {
        transcript.push(Stage::Preparation, Party::Client(j), Party::Orchestrator, || {
            Payload::SecretParams {
                theta: (0..2).map(|v| (v, secrets.theta[j][v])).collect(),
                r: (0..2).map(|v| (v, secrets.r[j][v])).collect(),
                x: if j == 0 {
                    (0..2).map(|v| (v, secrets.x[v])).collect()
                } else {
                    vec![]
                },
                phi: if j == 1 {
                    (0..2).map(|v| (v, secrets.phi[v])).collect()
                } else {
                    vec![]
                },
            }
        });
    }
    // The first station's waveplates are set before emission.
    let delta1 = blind_delta(0, &pattern, pattern.phi[0]);
    transcript.push(Stage::Preparation, Party::Orchestrator, Party::Server, || {
        Payload::Delta {
            vertex: 0,
            delta: delta1,
        }
    });

    let mut server = HonestServer::with_station(&graph, EntanglePlacement::Source, outcomes, &setup.station);
    let mut state = setup.source.clone();
    transcript.push_qubits(Stage::Transmission, Party::Source, Party::Client(0), &[0, 1], &state);
    for j in 0..2 {
        client_rotate_layer(&mut state, secrets.client_thetas(j))?;
        let next = if j == 0 { Party::Client(1) } else { Party::Server };
        transcript.push_qubits(Stage::Transmission, Party::Client(j), next, &[0, 1], &state);
    }
    server.receive(&[0, 1], state)?;

    let m1 = server.measure(0, delta1)?.outcome;
    transcript.push(Stage::Transmission, Party::Server, Party::Orchestrator, || {
        Payload::Outcome { vertex: 0, m: m1 }
    });

    // The orchestrator's circuit sees the two detector lines; outcome 0 is
    // the `+` detector.
    let a = pattern.theta[1].plus_pi_if(pattern.x[1] ^ pattern.r[1]);
    let ff = ff_circuit(a, pattern.phi[1], pattern.r[0], !m1, m1)?;
    let delta2 = ff.delta2()?;
    transcript.push(Stage::Measurement, Party::Orchestrator, Party::Server, || {
        Payload::Delta {
            vertex: 1,
            delta: delta2,
        }
    });
    let m2 = server.measure(1, delta2)?.outcome;
    transcript.push(Stage::Measurement, Party::Server, Party::Orchestrator, || {
        Payload::Outcome { vertex: 1, m: m2 }
    });

    let out = TwoClientOutcome {
        m1,
        m2,
        m1_true: ff.m1_true(),
        m2_true: m2 ^ pattern.r[1],
        delta1,
        delta2,
        ff,
    };
    for j in 0..2 {
        transcript.push(Stage::Measurement, Party::Orchestrator, Party::Client(j), || {
            Payload::Result {
                bits: vec![(0, out.m1_true), (1, out.m2_true)],
            }
        });
    }
    Ok(out)
}

/// One shot with outcomes drawn from `rng`.
pub fn sample_two_client<R: Rng>(
    setup: &TwoClientSetup,
    secrets: &SessionSecrets,
    rng: &mut R,
) -> Result<TwoClientOutcome> {
    setup.run(secrets, rng, &mut Transcript::disabled())
}

/// Exact distribution of the corrected outcomes, indexed by
/// [`TwoClientOutcome::label`].
pub fn two_client_distribution(secrets: &SessionSecrets, noise: Option<&NoiseParams>) -> Result<[f64; 4]> {
    two_client_distribution_on(&TwoClientSetup::new(noise)?, secrets)
}

/// [`two_client_distribution`] on prebuilt hardware.
pub fn two_client_distribution_on(setup: &TwoClientSetup, secrets: &SessionSecrets) -> Result<[f64; 4]> {
    let mut p = [0.0; 4];
    for (w, o) in enumerate_branches(2, |forced| setup.run(secrets, forced, &mut Transcript::disabled()))? {
        p[o.label()] += w;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardware::delta2_table;
    use crate::mbqc::decrypt_outcome;
    use crate::qline::{multi_client_distribution, MultiClientOptions, SessionRng};

    fn secrets(bits: u32, phi: [Octant; 2], x: [bool; 2]) -> SessionSecrets {
        // Client A's angles vary with `bits`; client B's are fixed.
        let ta = [Octant::new(i64::from(bits & 7)), Octant::new(i64::from(bits >> 3 & 7))];
        let tb = [Octant::new(5), Octant::new(2)];
        let ra = [bits >> 6 & 1 == 1, bits >> 7 & 1 == 1];
        SessionSecrets::two_client(ta, tb, ra, [false, true], phi, x)
    }

    #[test]
    fn ideal_distribution_is_blind_to_secrets() {
        for (phi, x) in [
            ([Octant::PI_2, Octant::PI_2], [false, false]),
            ([Octant::PI_4, Octant::new(3)], [true, false]),
            ([Octant::ZERO, Octant::PI_2], [false, true]),
        ] {
            let reference = two_client_distribution(&secrets(0, phi, x), None).unwrap();
            for bits in 0..256 {
                let p = two_client_distribution(&secrets(bits, phi, x), None).unwrap();
                for (a, b) in p.iter().zip(&reference) {
                    assert!((a - b).abs() < 1e-10, "{bits}: {p:?} vs {reference:?}");
                }
            }
        }
    }

    #[test]
    fn agrees_with_general_protocol() {
        let g = MeasurementGraph::two_chain(false);
        let opts = MultiClientOptions {
            placement: EntanglePlacement::Source,
            correction: CorrectionMode::Fused,
            noise: None,
        };
        let mut rng = SessionRng::new(4);
        for phi1 in 0..8 {
            for phi2 in 0..8 {
                for x in 0..4u8 {
                    let s = SessionSecrets::random(
                        2,
                        vec![Octant::new(phi1), Octant::new(phi2)],
                        vec![x & 2 != 0, x & 1 != 0],
                        &mut rng,
                    );
                    let a = two_client_distribution(&s, None).unwrap();
                    let mut b = [0.0; 4];
                    for (w, o) in multi_client_distribution(&g, &s, &opts).unwrap() {
                        b[o.classical_label()] += w;
                    }
                    for (p, q) in a.iter().zip(&b) {
                        assert!((p - q).abs() < 1e-10, "{a:?} vs {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn second_angle_follows_first_outcome() {
        let s = secrets(0b1010_0110, [Octant::new(3), Octant::new(6)], [true, false]);
        let pattern = s
            .pattern(&MeasurementGraph::two_chain(false), CorrectionMode::Fused)
            .unwrap();
        let base = pattern.theta[1].plus_pi_if(pattern.x[1] ^ pattern.r[1]);
        for forced in [[false, false], [true, false]] {
            let m1_true = decrypt_outcome(forced[0], pattern.r[0]);
            let forced = crate::quantum::ForcedOutcomes::new(forced.to_vec());
            let o = run_two_client_session(&s, None, forced, &mut Transcript::disabled()).unwrap();
            let want = if m1_true {
                base - pattern.phi[1]
            } else {
                base + pattern.phi[1]
            };
            assert_eq!(o.delta2, want);
            assert_eq!(o.m1_true, m1_true);
            let row = delta2_table(o.delta2);
            assert_eq!(row.flip, o.ff.f);
        }
    }

    #[test]
    fn transcript_shape() {
        let s = secrets(77, [Octant::PI_2, Octant::PI_4], [false, true]);
        let mut t = Transcript::with_snapshots();
        let mut rng = SessionRng::new(8);
        run_two_client_session(&s, Some(&NoiseParams::EXPERIMENTAL), rng.party(Party::Server), &mut t).unwrap();
        t.check_staging().unwrap();
        t.check_flow_order(&MeasurementGraph::two_chain(false)).unwrap();
        let server = t.view(Party::Server);
        assert_eq!(
            server
                .iter()
                .filter(|m| matches!(m.payload, Payload::Delta { .. }))
                .count(),
            2
        );
        assert!(server
            .iter()
            .all(|m| !matches!(m.payload, Payload::SecretParams { .. })));
    }

    #[test]
    fn rejects_wrong_client_count() {
        let s = SessionSecrets::zero(3, vec![Octant::ZERO; 2], vec![false; 2]);
        assert!(two_client_distribution(&s, None).is_err());
    }
}
