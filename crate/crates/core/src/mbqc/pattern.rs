use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MeasurementGraph;
use crate::quantum::Octant;
use crate::{Error, Result};

/// Client secrets and algorithm for one run of the blind protocol, indexed
/// by vertex. `x` must be `false` outside the input set; `r` is ignored on
/// output vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSecrets {
    pub theta: Vec<Octant>,
    pub r: Vec<bool>,
    pub x: Vec<bool>,
    pub phi: Vec<Octant>,
}

impl PatternSecrets {
    /// All-zero secrets for `n` vertices.
    pub fn zero(n: usize) -> Self {
        PatternSecrets {
            theta: vec![Octant::ZERO; n],
            r: vec![false; n],
            x: vec![false; n],
            phi: vec![Octant::ZERO; n],
        }
    }

    /// Uniform `θ(v) ∈ A` and `r(v) ∈ {0,1}` for the given algorithm.
    pub fn random<R: Rng + ?Sized>(phi: Vec<Octant>, x: Vec<bool>, rng: &mut R) -> Self {
        let n = phi.len();
        PatternSecrets {
            theta: (0..n).map(|_| Octant::new(rng.random_range(0..8))).collect(),
            r: (0..n).map(|_| rng.random()).collect(),
            x,
            phi,
        }
    }

    pub fn validate(&self, graph: &MeasurementGraph) -> Result<()> {
        let n = graph.num_vertices();
        for len in [self.theta.len(), self.r.len(), self.x.len(), self.phi.len()] {
            if len != n {
                return Err(Error::Arity { expected: n, got: len });
            }
        }
        if let Some(v) = (0..n).find(|&v| self.x[v] && !graph.is_input(v)) {
            return Err(Error::ParameterOutOfRange(format!(
                "input bit set on non-input vertex {v}"
            )));
        }
        Ok(())
    }
}

/// Raw and corrected outcomes of the measured vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    m: BTreeMap<usize, bool>,
    m_true: BTreeMap<usize, bool>,
}

impl OutcomeRecord {
    /// Stores the raw outcome `m` and its decryption `m ⊕ r`.
    pub fn record(&mut self, v: usize, m: bool, r: bool) {
        self.m.insert(v, m);
        self.m_true.insert(v, decrypt_outcome(m, r));
    }

    pub fn raw(&self, v: usize) -> Option<bool> {
        self.m.get(&v).copied()
    }

    pub fn corrected(&self, v: usize) -> Option<bool> {
        self.m_true.get(&v).copied()
    }

    /// Corrected outcomes sorted by vertex.
    pub fn corrected_bits(&self) -> Vec<(usize, bool)> {
        self.m_true.iter().map(|(&v, &b)| (v, b)).collect()
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }
}

/// Blind angle `δ(v) = φ′(v) + θ(v) + (r(v) + x(v))π`.
pub fn blind_delta(v: usize, secrets: &PatternSecrets, phi_corrected: Octant) -> Octant {
    (phi_corrected + secrets.theta[v]).plus_pi_if(secrets.r[v] ^ secrets.x[v])
}

/// One-time-pad removal `m ⊕ r`.
pub fn decrypt_outcome(m: bool, r: bool) -> bool {
    m ^ r
}
