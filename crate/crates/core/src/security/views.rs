//! Real and ideal views of the remote-rotation round, enumerated exactly
//! over the honest client's angle.
//!
//! The coalition is the server plus clients `1..n`; client 0 is honest. Its
//! view holds the angle `θ` and the probe `ρ` (both fixed by the
//! distinguisher), the state client 0 hands on, and the correction `θ′`.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ideal_rsr;
use crate::qline::{run_crsr_with, ClientStrategy, FixedClient, SessionRng};
use crate::quantum::{rz_gate, DensityMatrix, Octant};
use crate::transcript::Transcript;
use crate::Result;

/// Grid for turning state entries into hashable keys.
pub const CANONICAL_STEP: f64 = 1e-10;

/// The six Pauli eigenstates used as probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Probe {
    #[serde(rename = "|0>")]
    Zero,
    #[serde(rename = "|1>")]
    One,
    #[serde(rename = "|+>")]
    Plus,
    #[serde(rename = "|->")]
    Minus,
    #[serde(rename = "|+i>")]
    PlusI,
    #[serde(rename = "|-i>")]
    MinusI,
}

impl Probe {
    pub const ALL: [Probe; 6] = [
        Probe::Zero,
        Probe::One,
        Probe::Plus,
        Probe::Minus,
        Probe::PlusI,
        Probe::MinusI,
    ];

    pub fn state(self) -> DensityMatrix {
        let bloch = match self {
            Probe::Zero => [0.0, 0.0, 1.0],
            Probe::One => [0.0, 0.0, -1.0],
            Probe::Plus => [1.0, 0.0, 0.0],
            Probe::Minus => [-1.0, 0.0, 0.0],
            Probe::PlusI => [0.0, 1.0, 0.0],
            Probe::MinusI => [0.0, -1.0, 0.0],
        };
        DensityMatrix::from_bloch(bloch).expect("unit Bloch vector")
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Probe::Zero => "|0>",
            Probe::One => "|1>",
            Probe::Plus => "|+>",
            Probe::Minus => "|->",
            Probe::PlusI => "|+i>",
            Probe::MinusI => "|-i>",
        };
        f.write_str(s)
    }
}

/// Density matrix rounded to [`CANONICAL_STEP`] in the computational basis,
/// real and imaginary parts interleaved row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalState(Vec<i64>);

impl CanonicalState {
    pub fn new(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let round = |x: f64| {
            let k = (x / CANONICAL_STEP).round() as i64;
            // Avoid distinct keys for ±0.
            if k == 0 {
                0
            } else {
                k
            }
        };
        let mut v = Vec::with_capacity(2 * d * d);
        for i in 0..d {
            for j in 0..d {
                let z = rho.entry(i, j);
                v.push(round(z.re));
                v.push(round(z.im));
            }
        }
        CanonicalState(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum World {
    Real,
    Ideal,
}

/// One point of the coalition's view.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ViewRecord {
    pub theta: Octant,
    pub probe: Probe,
    pub client0_output: CanonicalState,
    pub correction: Octant,
}

/// Law of the honest client's angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HonestAngle {
    Uniform,
    /// Degenerate law, used as a negative control.
    Fixed(Octant),
}

impl HonestAngle {
    fn support(self) -> Vec<(Octant, f64)> {
        match self {
            HonestAngle::Uniform => Octant::ALL.iter().map(|&t| (t, 1.0 / 8.0)).collect(),
            HonestAngle::Fixed(t) => vec![(t, 1.0)],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViewDistribution {
    pub world: World,
    pub probs: BTreeMap<ViewRecord, f64>,
}

impl ViewDistribution {
    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// `½ Σ |p − q|` over the union of supports.
    pub fn statistical_distance(&self, other: &ViewDistribution) -> f64 {
        let mut d = 0.0;
        for (k, p) in &self.probs {
            d += (p - other.probs.get(k).copied().unwrap_or(0.0)).abs();
        }
        for (k, q) in &other.probs {
            if !self.probs.contains_key(k) {
                d += q.abs();
            }
        }
        d / 2.0
    }

    /// Same support and probabilities equal within `tol`.
    pub fn equals(&self, other: &ViewDistribution, tol: f64) -> bool {
        self.probs.len() == other.probs.len()
            && self
                .probs
                .iter()
                .all(|(k, p)| other.probs.get(k).is_some_and(|q| (p - q).abs() <= tol))
    }

    /// Marginal law of the correction angle.
    pub fn correction_marginal(&self) -> [f64; 8] {
        let mut m = [0.0; 8];
        for (k, p) in &self.probs {
            m[k.correction.k() as usize] += p;
        }
        m
    }

    fn add(&mut self, rec: ViewRecord, p: f64) {
        *self.probs.entry(rec).or_insert(0.0) += p;
    }
}

/// The simulator's output for one honest angle.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedView {
    pub client0_output: DensityMatrix,
    pub correction: Octant,
}

/// The simulator with its angle already drawn. It only sees `ρ′` from the
/// ideal box, never `θ`.
pub fn simulator_crsr_with(
    theta1: Octant,
    malicious: &[Octant],
    rho: &DensityMatrix,
    ideal: impl FnOnce(&DensityMatrix) -> Result<DensityMatrix>,
) -> Result<SimulatedView> {
    let mut out = ideal(rho)?;
    out.apply_single(0, &rz_gate(theta1))?;
    let sum: Octant = std::iter::once(theta1).chain(malicious.iter().copied()).sum();
    Ok(SimulatedView {
        client0_output: out,
        correction: -sum,
    })
}

/// Samples the honest angle uniformly and runs the simulator.
pub fn simulator_crsr<R: Rng + ?Sized>(
    malicious: &[Octant],
    rho: &DensityMatrix,
    ideal: impl FnOnce(&DensityMatrix) -> Result<DensityMatrix>,
    rng: &mut R,
) -> Result<SimulatedView> {
    let theta1 = Octant::new(rng.random_range(0..8));
    simulator_crsr_with(theta1, malicious, rho, ideal)
}

/// Exact view distribution in one world. Real views come from running the
/// protocol; ideal views from the simulator attached to [`ideal_rsr`].
pub fn enumerate_views(
    world: World,
    theta: Octant,
    probe: Probe,
    malicious: &[Octant],
    honest: HonestAngle,
) -> Result<ViewDistribution> {
    let rho = probe.state();
    let mut dist = ViewDistribution {
        world,
        probs: BTreeMap::new(),
    };
    for (theta1, p) in honest.support() {
        let (out, correction) = match world {
            World::Real => {
                let mut clients: Vec<Box<dyn ClientStrategy>> = std::iter::once(theta1)
                    .chain(malicious.iter().copied())
                    .map(|t| Box::new(FixedClient(t)) as _)
                    .collect();
                let run = run_crsr_with(
                    theta,
                    &rho,
                    &mut clients,
                    &mut SessionRng::new(0),
                    &mut Transcript::disabled(),
                )?;
                (run.client0_output, run.theta_prime)
            }
            World::Ideal => {
                let v = simulator_crsr_with(theta1, malicious, &rho, |r| ideal_rsr(theta, r))?;
                (v.client0_output, v.correction)
            }
        };
        dist.add(
            ViewRecord {
                theta,
                probe,
                client0_output: CanonicalState::new(&out),
                correction,
            },
            p,
        );
    }
    Ok(dist)
}

/// Every assignment of `n` angles.
pub fn all_assignments(n: usize) -> Vec<Vec<Octant>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                Octant::ALL.iter().map(move |&t| {
                    let mut p = prefix.clone();
                    p.push(t);
                    p
                })
            })
            .collect();
    }
    out
}

/// Real view for the simulator's angle `θ₁`: the honest client uses
/// `θ₁ + θ`, i.e. the real-world angle `θ₁` corresponds to the simulator's
/// `θ₁ − θ`. Pointwise equal to the ideal view, which is why the uniform
/// laws coincide.
pub fn substituted_real_view(
    theta: Octant,
    theta1: Octant,
    malicious: &[Octant],
    probe: Probe,
) -> Result<SimulatedView> {
    let rho = probe.state();
    let mut clients: Vec<Box<dyn ClientStrategy>> = std::iter::once(theta1 + theta)
        .chain(malicious.iter().copied())
        .map(|t| Box::new(FixedClient(t)) as _)
        .collect();
    let run = run_crsr_with(
        theta,
        &rho,
        &mut clients,
        &mut SessionRng::new(0),
        &mut Transcript::disabled(),
    )?;
    Ok(SimulatedView {
        client0_output: run.client0_output,
        correction: run.theta_prime,
    })
}
