use rand::Rng;

use crate::{Error, Result};

/// Below this branch probability a measurement outcome is treated as
/// impossible.
pub(crate) const ZERO_BRANCH: f64 = 1e-14;

/// Decides measurement outcomes. `draw` receives the Born probability of
/// outcome 0 and returns the chosen outcome (`true` = 1).
pub trait OutcomeSource {
    fn draw(&mut self, p0: f64) -> bool;
}

impl<R: Rng> OutcomeSource for R {
    fn draw(&mut self, p0: f64) -> bool {
        self.random::<f64>() >= p0
    }
}

/// Replays a fixed outcome sequence and accumulates the probability of that
/// branch. Used to enumerate measurement trees exactly.
#[derive(Debug, Clone)]
pub struct ForcedOutcomes {
    outcomes: Vec<bool>,
    next: usize,
    weight: f64,
}

impl ForcedOutcomes {
    pub fn new(outcomes: Vec<bool>) -> Self {
        ForcedOutcomes {
            outcomes,
            next: 0,
            weight: 1.0,
        }
    }

    /// Product of the Born probabilities of every outcome drawn so far.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn consumed(&self) -> usize {
        self.next
    }
}

impl OutcomeSource for ForcedOutcomes {
    fn draw(&mut self, p0: f64) -> bool {
        let b = *self.outcomes.get(self.next).expect("forced outcome sequence exhausted");
        self.next += 1;
        self.weight *= if b { 1.0 - p0 } else { p0 };
        b
    }
}

impl OutcomeSource for &mut ForcedOutcomes {
    fn draw(&mut self, p0: f64) -> bool {
        (**self).draw(p0)
    }
}

/// Runs `f` once per sequence of `k` outcomes and returns `(probability,
/// value)` for every branch with nonzero probability. Branches rejected with
/// [`Error::ZeroProbabilityBranch`] are dropped; any other error aborts.
pub fn enumerate_branches<T, F>(k: usize, mut f: F) -> Result<Vec<(f64, T)>>
where
    F: FnMut(&mut ForcedOutcomes) -> Result<T>,
{
    let mut out = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let bits = (0..k).map(|i| mask >> (k - 1 - i) & 1 == 1).collect();
        let mut forced = ForcedOutcomes::new(bits);
        match f(&mut forced) {
            Ok(v) => {
                if forced.weight() > ZERO_BRANCH {
                    out.push((forced.weight(), v));
                }
            }
            Err(Error::ZeroProbabilityBranch) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
