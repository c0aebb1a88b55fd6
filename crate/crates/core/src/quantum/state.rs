use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::measure::ZERO_BRANCH;
use super::{c, Basis2, Octant, OutcomeSource, Unitary2, EXACT_TOL};
use crate::{Error, Result};

/// Dense pure state of `n` qubits. Qubit 0 is the most significant bit of
/// the basis index, so `|q0 q1 … q(n−1)⟩` has index `q0·2^(n−1) + …`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates the length and normalisation (within `1e−10`).
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "{len} amplitudes is not a power of two"
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::ParameterOutOfRange(format!(
                "state is not normalised (norm² = {norm})"
            )));
        }
        Ok(StateVector {
            n: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Zero-qubit state (the scalar 1); the unit of [`tensor`](Self::tensor).
    pub fn empty() -> Self {
        StateVector {
            n: 0,
            amps: vec![c(1.0, 0.0)],
        }
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "basis index {index} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[index] = c(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// `|+_θ⟩ = (|0⟩ + e^{iθ}|1⟩)/√2`.
    pub fn plus_theta(theta: Octant) -> Self {
        StateVector {
            n: 1,
            amps: vec![c(FRAC_1_SQRT_2, 0.0), theta.phase() * FRAC_1_SQRT_2],
        }
    }

    pub fn plus() -> Self {
        Self::plus_theta(Octant::ZERO)
    }

    /// `CZ(|+⟩⊗|+⟩) = ½(|00⟩+|01⟩+|10⟩−|11⟩)`, the two-qubit cluster state.
    pub fn cluster_pair() -> Self {
        let h = c(0.5, 0.0);
        StateVector {
            n: 2,
            amps: vec![h, h, h, -h],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_size(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `self ⊗ other`; the qubits of `other` come after those of `self`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            n: self.n + other.n,
            amps,
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::QubitOutOfRange { index: q, n: self.n })
        } else {
            Ok(())
        }
    }

    fn check_same_size(&self, other: &StateVector) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} qubits", self.n, other.n)));
        }
        Ok(())
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// Index pairs `(i0, i1)` differing only in qubit `q` (0 then 1).
    fn pairs(&self, q: usize) -> impl Iterator<Item = (usize, usize)> {
        let m = self.mask(q);
        (0..self.amps.len())
            .filter(move |i| i & m == 0)
            .map(move |i| (i, i | m))
    }

    pub fn apply_single(&mut self, q: usize, u: &Unitary2) -> Result<()> {
        self.check_qubit(q)?;
        let m = u.matrix();
        let pairs: Vec<_> = self.pairs(q).collect();
        for (i0, i1) in pairs {
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            self.amps[i1] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
        Ok(())
    }

    /// `Rz(θ)` on qubit `q` without a matrix multiply.
    pub fn apply_rz(&mut self, q: usize, theta: Octant) -> Result<()> {
        self.check_qubit(q)?;
        let m = self.mask(q);
        let ph = theta.phase();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & m != 0 {
                *a *= ph;
            }
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::SameQubit(a));
        }
        let m = self.mask(a) | self.mask(b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m == m {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    // Projection amplitudes ⟨b_k|_q ψ for every pair of indices.
    fn project(&self, q: usize, basis: &Basis2, k: usize) -> Vec<Complex64> {
        let v = basis.vector(k);
        let (b0, b1) = (v[0].conj(), v[1].conj());
        self.pairs(q)
            .map(|(i0, i1)| b0 * self.amps[i0] + b1 * self.amps[i1])
            .collect()
    }

    /// Exact Born probabilities `(p0, p1)` for measuring qubit `q` in `basis`.
    pub fn outcome_distribution_in(&self, q: usize, basis: &Basis2) -> Result<(f64, f64)> {
        self.check_qubit(q)?;
        let p0 = self.project(q, basis, 0).iter().map(|a| a.norm_sqr()).sum();
        let p1 = self.project(q, basis, 1).iter().map(|a| a.norm_sqr()).sum();
        Ok((p0, p1))
    }

    /// Exact Born probabilities for the `|±_δ⟩` basis.
    pub fn outcome_distribution(&self, q: usize, delta: Octant) -> Result<(f64, f64)> {
        self.outcome_distribution_in(q, &Basis2::delta(delta))
    }

    /// Measures qubit `q` in `basis`. With `keep_qubit` the post-state still
    /// has `n` qubits (qubit `q` collapsed onto the basis vector), otherwise
    /// qubit `q` is removed.
    pub fn measure_in<S: OutcomeSource + ?Sized>(
        &self,
        q: usize,
        basis: &Basis2,
        source: &mut S,
        keep_qubit: bool,
    ) -> Result<(bool, StateVector)> {
        let (p0, _) = self.outcome_distribution_in(q, basis)?;
        let outcome = source.draw(p0);
        let k = usize::from(outcome);
        let proj = self.project(q, basis, k);
        let p: f64 = proj.iter().map(|a| a.norm_sqr()).sum();
        if p <= ZERO_BRANCH {
            return Err(Error::ZeroProbabilityBranch);
        }
        let scale = 1.0 / p.sqrt();
        let post = if keep_qubit {
            let v = basis.vector(k);
            let mut amps = vec![c(0.0, 0.0); self.amps.len()];
            for ((i0, i1), a) in self.pairs(q).zip(&proj) {
                amps[i0] = v[0] * a * scale;
                amps[i1] = v[1] * a * scale;
            }
            StateVector { n: self.n, amps }
        } else {
            StateVector {
                n: self.n - 1,
                amps: proj.iter().map(|a| a * scale).collect(),
            }
        };
        Ok((outcome, post))
    }

    /// Measures qubit `q` in the `|±_δ⟩` basis; outcome 0 is `|+_δ⟩`.
    pub fn measure_in_delta_basis<S: OutcomeSource + ?Sized>(
        &self,
        q: usize,
        delta: Octant,
        source: &mut S,
        keep_qubit: bool,
    ) -> Result<(bool, StateVector)> {
        self.measure_in(q, &Basis2::delta(delta), source, keep_qubit)
    }

    /// Checks the `Σ|a|² = 1` invariant at [`EXACT_TOL`].
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= EXACT_TOL
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{rz_gate, ForcedOutcomes};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn approx_eq(a: &StateVector, b: &StateVector, tol: f64) -> bool {
        a.n == b.n && a.amps.iter().zip(&b.amps).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn rz_zero_is_noop() {
        let mut s = StateVector::cluster_pair();
        let before = s.clone();
        for q in 0..2 {
            s.apply_single(q, &rz_gate(Octant::ZERO)).unwrap();
        }
        assert_eq!(s, before);
    }

    #[test]
    fn rz_pi_on_second_qubit_of_cluster() {
        // Hand expansion: diag phases (1, −1) on qubit 1 flip the sign of
        // |01⟩ and |11⟩.
        let mut s = StateVector::cluster_pair();
        s.apply_single(1, &rz_gate(Octant::PI)).unwrap();
        let h = c(0.5, 0.0);
        let want = StateVector::from_amplitudes(vec![h, -h, h, h]).unwrap();
        assert!(approx_eq(&s, &want, 1e-15));
    }

    #[test]
    fn rz_composes_additively() {
        for (a, b) in [(1, 2), (3, 7), (5, 5)] {
            let (a, b) = (Octant::new(a), Octant::new(b));
            let mut s1 = StateVector::cluster_pair();
            s1.apply_single(0, &rz_gate(a)).unwrap();
            s1.apply_single(0, &rz_gate(b)).unwrap();
            let mut s2 = StateVector::cluster_pair();
            s2.apply_single(0, &rz_gate(a + b)).unwrap();
            assert!(approx_eq(&s1, &s2, 1e-15));
        }
    }

    #[test]
    fn apply_single_rejects_bad_index() {
        let mut s = StateVector::plus();
        assert_eq!(
            s.apply_single(1, &Unitary2::hadamard()),
            Err(Error::QubitOutOfRange { index: 1, n: 1 })
        );
    }

    #[test]
    fn cz_cases() {
        let mut s = StateVector::basis(2, 3).unwrap();
        s.apply_cz(0, 1).unwrap();
        assert_eq!(s.amps[3], c(-1.0, 0.0));

        let mut pp = StateVector::plus().tensor(&StateVector::plus());
        pp.apply_cz(0, 1).unwrap();
        assert!(approx_eq(&pp, &StateVector::cluster_pair(), 1e-15));
        pp.apply_cz(1, 0).unwrap();
        let want = StateVector::plus().tensor(&StateVector::plus());
        assert!(approx_eq(&pp, &want, 1e-15));

        assert_eq!(pp.apply_cz(1, 1), Err(Error::SameQubit(1)));
    }

    #[test]
    fn delta_measurement_probabilities() {
        let (p0, p1) = StateVector::plus().outcome_distribution(0, Octant::ZERO).unwrap();
        assert!((p0 - 1.0).abs() < 1e-15 && p1.abs() < 1e-15);

        for t in Octant::ALL {
            let (p0, _) = StateVector::plus_theta(t).outcome_distribution(0, t).unwrap();
            assert!((p0 - 1.0).abs() < 1e-15);
        }

        // |⟨+_δ|+_θ⟩|² = cos²((δ−θ)/2)
        let (p0, p1) = StateVector::plus_theta(Octant::PI_4)
            .outcome_distribution(0, Octant::PI_2)
            .unwrap();
        let want = (std::f64::consts::PI / 8.0).cos().powi(2);
        assert!((p0 - want).abs() < 1e-15);
        assert!((p0 + p1 - 1.0).abs() < EXACT_TOL);
    }

    #[test]
    fn half_turn_swaps_distribution_exactly() {
        let mut s = StateVector::cluster_pair();
        s.apply_rz(0, Octant::new(3)).unwrap();
        s.apply_rz(1, Octant::new(5)).unwrap();
        for q in 0..2 {
            for d in Octant::ALL {
                let (a0, a1) = s.outcome_distribution(q, d).unwrap();
                let (b0, b1) = s.outcome_distribution(q, d + Octant::PI).unwrap();
                assert_eq!((a0, a1), (b1, b0));
            }
        }
    }

    #[test]
    fn measurement_post_states() {
        let s = StateVector::cluster_pair();
        let mut forced = ForcedOutcomes::new(vec![true]);
        let (m, post) = s.measure_in_delta_basis(0, Octant::ZERO, &mut forced, false).unwrap();
        assert!(m);
        // ⟨−| on qubit 0 leaves (|+⟩ − |−⟩)/√2 = |1⟩ on qubit 1.
        assert_eq!(post.num_qubits(), 1);
        assert!((post.amps[1].norm() - 1.0).abs() < 1e-15);
        assert!((forced.weight() - 0.5).abs() < 1e-15);

        let mut forced = ForcedOutcomes::new(vec![false]);
        let (_, kept) = s.measure_in_delta_basis(1, Octant::PI_2, &mut forced, true).unwrap();
        assert_eq!(kept.num_qubits(), 2);
        assert!(kept.is_normalized());
        let (p0, _) = kept.outcome_distribution(1, Octant::PI_2).unwrap();
        assert!((p0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn impossible_branch_is_reported() {
        let s = StateVector::plus();
        let mut forced = ForcedOutcomes::new(vec![true]);
        assert_eq!(
            s.measure_in_delta_basis(0, Octant::ZERO, &mut forced, false),
            Err(Error::ZeroProbabilityBranch)
        );
    }

    #[test]
    fn sampler_matches_born_rule() {
        let s = StateVector::plus_theta(Octant::PI_4);
        let (p0, _) = s.outcome_distribution(0, Octant::PI_2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 100_000;
        let zeros = (0..n)
            .filter(|_| !s.measure_in_delta_basis(0, Octant::PI_2, &mut rng, false).unwrap().0)
            .count();
        let sigma = (p0 * (1.0 - p0) / n as f64).sqrt();
        assert!((zeros as f64 / n as f64 - p0).abs() < 5.0 * sigma);
    }
}
