use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::mbqc::{MeasurementGraph, PatternSecrets};
use crate::quantum::Octant;
use crate::transcript::Party;
use crate::{Error, Result};

/// Root seed split into one independent ChaCha stream per party.
#[derive(Debug, Clone)]
pub struct SessionRng {
    seed: u64,
    streams: HashMap<Party, ChaCha8Rng>,
}

impl SessionRng {
    pub fn new(seed: u64) -> Self {
        SessionRng {
            seed,
            streams: HashMap::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The stream owned by `party`, created on first use.
    pub fn party(&mut self, party: Party) -> &mut ChaCha8Rng {
        let seed = self.seed;
        self.streams.entry(party).or_insert_with(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_id(party));
            rng
        })
    }
}

fn stream_id(p: Party) -> u64 {
    match p {
        Party::Source => 1,
        Party::Orchestrator => 2,
        Party::Server => 3,
        Party::Client(j) => 16 + j as u64,
    }
}

/// Every client's secrets plus the inputs and algorithm of one session.
///
/// `theta[j][v]` and `r[j][v]` belong to client `j`. The inputs `x` are
/// reported by the first client and the angles `phi` by the last one, as in
/// the two-client experiment. `target_theta[v]` is the orchestrator's own
/// angle for the remote-rotation round when the correction `θ′` is applied
/// physically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSecrets {
    pub theta: Vec<Vec<Octant>>,
    pub r: Vec<Vec<bool>>,
    pub x: Vec<bool>,
    pub phi: Vec<Octant>,
    pub target_theta: Vec<Octant>,
}

impl SessionSecrets {
    /// Secrets with every client angle and bit zero.
    pub fn zero(n_clients: usize, phi: Vec<Octant>, x: Vec<bool>) -> Self {
        let n = phi.len();
        SessionSecrets {
            theta: vec![vec![Octant::ZERO; n]; n_clients],
            r: vec![vec![false; n]; n_clients],
            x,
            phi,
            target_theta: vec![Octant::ZERO; n],
        }
    }

    /// Each client draws its angles and bits from its own stream; the
    /// orchestrator draws the target angles from its stream.
    pub fn random(n_clients: usize, phi: Vec<Octant>, x: Vec<bool>, rng: &mut SessionRng) -> Self {
        let n = phi.len();
        let mut s = SessionSecrets::zero(n_clients, phi, x);
        for j in 0..n_clients {
            let stream = rng.party(Party::Client(j));
            for v in 0..n {
                s.theta[j][v] = Octant::new(stream.random_range(0..8));
                s.r[j][v] = stream.random();
            }
        }
        let orch = rng.party(Party::Orchestrator);
        for t in &mut s.target_theta {
            *t = Octant::new(orch.random_range(0..8));
        }
        s
    }

    /// Two clients on two qubits with explicit per-client secrets.
    pub fn two_client(
        theta_a: [Octant; 2],
        theta_b: [Octant; 2],
        r_a: [bool; 2],
        r_b: [bool; 2],
        phi: [Octant; 2],
        x: [bool; 2],
    ) -> Self {
        SessionSecrets {
            theta: vec![theta_a.to_vec(), theta_b.to_vec()],
            r: vec![r_a.to_vec(), r_b.to_vec()],
            x: x.to_vec(),
            phi: phi.to_vec(),
            target_theta: vec![Octant::ZERO; 2],
        }
    }

    pub fn n_clients(&self) -> usize {
        self.theta.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.phi.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_vertices();
        if self.theta.is_empty() {
            return Err(Error::Empty("session without clients"));
        }
        if self.r.len() != self.theta.len() {
            return Err(Error::Arity {
                expected: self.theta.len(),
                got: self.r.len(),
            });
        }
        for len in self
            .theta
            .iter()
            .map(Vec::len)
            .chain(self.r.iter().map(Vec::len))
            .chain([self.x.len(), self.target_theta.len()])
        {
            if len != n {
                return Err(Error::Arity { expected: n, got: len });
            }
        }
        Ok(())
    }

    /// `θ(v) = Σⱼ θⱼ(v)`.
    pub fn aggregate_theta(&self, v: usize) -> Octant {
        self.theta.iter().map(|t| t[v]).sum()
    }

    /// `r(v) = ⊕ⱼ rⱼ(v)`.
    pub fn aggregate_r(&self, v: usize) -> bool {
        self.r.iter().fold(false, |acc, r| acc ^ r[v])
    }

    /// Client `j`'s angles for all vertices.
    pub fn client_thetas(&self, j: usize) -> &[Octant] {
        &self.theta[j]
    }

    /// The single-party pattern the orchestrator runs. `theta` is the
    /// rotation the server's qubits actually carry: the target angles when
    /// `θ′` is applied, the client sum when it is folded into `δ`.
    pub fn pattern(&self, graph: &MeasurementGraph, mode: super::CorrectionMode) -> Result<PatternSecrets> {
        self.validate()?;
        let n = graph.num_vertices();
        if self.n_vertices() != n {
            return Err(Error::Arity {
                expected: n,
                got: self.n_vertices(),
            });
        }
        let theta = match mode {
            super::CorrectionMode::Physical => self.target_theta.clone(),
            super::CorrectionMode::Fused => (0..n).map(|v| self.aggregate_theta(v)).collect(),
        };
        let p = PatternSecrets {
            theta,
            r: (0..n).map(|v| self.aggregate_r(v)).collect(),
            x: self.x.clone(),
            phi: self.phi.clone(),
        };
        p.validate(graph)?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregates() {
        let s = SessionSecrets::two_client(
            [Octant::new(3), Octant::new(7)],
            [Octant::new(6), Octant::new(2)],
            [true, false],
            [true, true],
            [Octant::ZERO; 2],
            [false; 2],
        );
        assert_eq!(s.aggregate_theta(0), Octant::new(1));
        assert_eq!(s.aggregate_theta(1), Octant::new(1));
        assert!(!s.aggregate_r(0));
        assert!(s.aggregate_r(1));
    }

    #[test]
    fn party_streams_are_independent_and_reproducible() {
        let mut a = SessionRng::new(7);
        let mut b = SessionRng::new(7);
        let x: u64 = a.party(Party::Client(0)).random();
        // Drawing from another party first must not change client 0's stream.
        let _: u64 = b.party(Party::Server).random();
        let y: u64 = b.party(Party::Client(0)).random();
        assert_eq!(x, y);
        let z: u64 = SessionRng::new(7).party(Party::Client(1)).random();
        assert_ne!(x, z);
    }

    #[test]
    fn random_secrets_are_valid() {
        let mut rng = SessionRng::new(1);
        let s = SessionSecrets::random(3, vec![Octant::PI_4; 4], vec![false; 4], &mut rng);
        assert!(s.validate().is_ok());
        assert_eq!(s.n_clients(), 3);
    }
}
