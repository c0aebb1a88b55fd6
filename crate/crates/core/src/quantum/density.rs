use nalgebra::{DMatrix, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::measure::ZERO_BRANCH;
use super::{c, Basis2, OutcomeSource, StateVector, Unitary2, EXACT_TOL, PSD_TOL};
use crate::{Error, Result};

/// Mixed state of `n` qubits with the same qubit ordering as
/// [`StateVector`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps a matrix after checking it is Hermitian, unit-trace and PSD.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(m)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Result<Self> {
        let d = m.nrows();
        if d != m.ncols() || d == 0 || !d.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} is not a qubit density matrix shape",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(DensityMatrix {
            n: d.trailing_zeros() as usize,
            m,
        })
    }

    /// Nearest valid state to a Hermitian estimate: negative eigenvalues are
    /// set to zero and the trace renormalised. Used for tomography, where
    /// linear inversion can leave the PSD cone.
    pub fn from_hermitian_clipped(m: DMatrix<Complex64>) -> Result<Self> {
        let raw = Self::from_matrix_unchecked(m)?;
        let herm = (&raw.m + raw.m.adjoint()) * c(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let clipped = eig.eigenvalues.map(|l| l.max(0.0));
        let total: f64 = clipped.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDensityMatrix("estimate has no positive part".into()));
        }
        let d = DMatrix::from_diagonal(&clipped.map(|l| c(l / total, 0.0)));
        let m = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
        Ok(DensityMatrix { n: raw.n, m })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        DensityMatrix {
            n: psi.num_qubits(),
            m: &v * v.adjoint(),
        }
    }

    /// The zero-qubit state (scalar 1), neutral for [`DensityMatrix::tensor`].
    pub fn empty() -> Self {
        Self::maximally_mixed(0)
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1 << n;
        DensityMatrix {
            n,
            m: DMatrix::identity(d, d) * c(1.0 / d as f64, 0.0),
        }
    }

    /// Single-qubit state from a Bloch vector `(x, y, z)`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                c((1.0 + r[2]) / 2.0, 0.0),
                c(r[0] / 2.0, -r[1] / 2.0),
                c(r[0] / 2.0, r[1] / 2.0),
                c((1.0 - r[2]) / 2.0, 0.0),
            ],
        );
        Self::new(m)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Checks Hermiticity and trace at [`EXACT_TOL`] and the smallest
    /// eigenvalue against `−`[`PSD_TOL`].
    pub fn validate(&self) -> Result<()> {
        let herm = (&self.m - self.m.adjoint()).norm();
        if herm > EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (‖ρ−ρ†‖ = {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > EXACT_TOL || tr.im.abs() > EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        let min = self.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(Error::QubitOutOfRange { index: q, n: self.n })
        } else {
            Ok(())
        }
    }

    fn check_same_shape(&self, other: &DensityMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("{} vs {} qubits", self.n, other.n)));
        }
        Ok(())
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// `ρ → U ρ U†` with `U` on qubit `q`.
    pub fn apply_single(&mut self, q: usize, u: &Unitary2) -> Result<()> {
        self.check_qubit(q)?;
        self.conjugate_by(q, u.matrix());
        Ok(())
    }

    fn conjugate_by(&mut self, q: usize, u: &Matrix2<Complex64>) {
        let d = self.dim();
        let mask = self.mask(q);
        // Left multiply: rows.
        for col in 0..d {
            for i0 in (0..d).filter(|i| i & mask == 0) {
                let i1 = i0 | mask;
                let (a0, a1) = (self.m[(i0, col)], self.m[(i1, col)]);
                self.m[(i0, col)] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                self.m[(i1, col)] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        }
        // Right multiply by U†: columns.
        for row in 0..d {
            for j0 in (0..d).filter(|j| j & mask == 0) {
                let j1 = j0 | mask;
                let (a0, a1) = (self.m[(row, j0)], self.m[(row, j1)]);
                self.m[(row, j0)] = a0 * u[(0, 0)].conj() + a1 * u[(0, 1)].conj();
                self.m[(row, j1)] = a0 * u[(1, 0)].conj() + a1 * u[(1, 1)].conj();
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::SameQubit(a));
        }
        let m = self.mask(a) | self.mask(b);
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let si = i & m == m;
                let sj = j & m == m;
                if si != sj {
                    self.m[(i, j)] = -self.m[(i, j)];
                }
            }
        }
        Ok(())
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            n: self.n + other.n,
            m: self.m.kronecker(&other.m),
        }
    }

    /// Reduced state on the qubits in `keep` (kept in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::Empty("partial trace keep set"));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &q in &keep {
            self.check_qubit(q)?;
        }
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let k = keep.len();
        let dk = 1 << k;
        let mut out = DMatrix::from_element(dk, dk, c(0.0, 0.0));
        let spread = |sub: usize, qubits: &[usize]| -> usize {
            qubits
                .iter()
                .enumerate()
                .filter(|(pos, _)| sub >> (qubits.len() - 1 - pos) & 1 == 1)
                .map(|(_, &q)| self.mask(q))
                .sum()
        };
        for t in 0..(1usize << traced.len()) {
            let base = spread(t, &traced);
            for a in 0..dk {
                let ia = base | spread(a, &keep);
                for b in 0..dk {
                    let ib = base | spread(b, &keep);
                    out[(a, b)] += self.m[(ia, ib)];
                }
            }
        }
        Ok(DensityMatrix { n: k, m: out })
    }

    /// Reorders qubits so that new qubit `i` is old qubit `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<DensityMatrix> {
        let mut seen = vec![false; self.n];
        if order.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: order.len(),
            });
        }
        for &q in order {
            self.check_qubit(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::SameQubit(q));
            }
        }
        let n = self.n;
        let map = |new: usize| -> usize {
            (0..n)
                .filter(|&i| new >> (n - 1 - i) & 1 == 1)
                .map(|i| 1usize << (n - 1 - order[i]))
                .sum()
        };
        let old_index: Vec<usize> = (0..self.dim()).map(map).collect();
        let m = DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.m[(old_index[i], old_index[j])]);
        Ok(DensityMatrix { n, m })
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.m + self.m.adjoint()) * c(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// `−Σ λ log₂ λ` in bits, with `0·log 0 = 0`.
    pub fn von_neumann_entropy(&self) -> f64 {
        self.eigenvalues()
            .into_iter()
            .filter(|&l| l > 0.0)
            .map(|l| -l * l.log2())
            .sum::<f64>()
            .max(0.0)
    }

    /// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
    pub fn fidelity(&self, sigma: &DensityMatrix) -> Result<f64> {
        self.check_same_shape(sigma)?;
        let sqrt_rho = psd_sqrt(&self.m);
        let inner = &sqrt_rho * &sigma.m * &sqrt_rho;
        let herm = (&inner + inner.adjoint()) * c(0.5, 0.0);
        let tr: f64 = SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .sum();
        Ok((tr * tr).clamp(0.0, 1.0))
    }

    /// `½ ‖ρ − σ‖₁`.
    pub fn trace_distance(&self, sigma: &DensityMatrix) -> Result<f64> {
        self.check_same_shape(sigma)?;
        let diff = &self.m - &sigma.m;
        let herm = (&diff + diff.adjoint()) * c(0.5, 0.0);
        Ok(SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .map(|l| l.abs())
            .sum::<f64>()
            / 2.0)
    }

    /// Largest entrywise deviation `max |ρᵢⱼ − σᵢⱼ|`.
    pub fn max_abs_diff(&self, sigma: &DensityMatrix) -> Result<f64> {
        self.check_same_shape(sigma)?;
        Ok((&self.m - &sigma.m).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// `⟨b|ρ_q|b⟩`-style Born probabilities for measuring qubit `q`.
    pub fn outcome_distribution_in(&self, q: usize, basis: &Basis2) -> Result<(f64, f64)> {
        self.check_qubit(q)?;
        let p = |k| self.projected_block(q, basis, k).trace().re;
        Ok((p(0), p(1)))
    }

    // (⟨b_k|_q ⊗ I) ρ (|b_k⟩_q ⊗ I), an unnormalised (n−1)-qubit block.
    fn projected_block(&self, q: usize, basis: &Basis2, k: usize) -> DMatrix<Complex64> {
        let mask = self.mask(q);
        let v = basis.vector(k);
        let d = self.dim();
        let low: Vec<usize> = (0..d).filter(|i| i & mask == 0).collect();
        let h = low.len();
        let mut out = DMatrix::from_element(h, h, c(0.0, 0.0));
        for (a, &i0) in low.iter().enumerate() {
            let i1 = i0 | mask;
            for (b, &j0) in low.iter().enumerate() {
                let j1 = j0 | mask;
                out[(a, b)] = v[0].conj() * (self.m[(i0, j0)] * v[0] + self.m[(i0, j1)] * v[1])
                    + v[1].conj() * (self.m[(i1, j0)] * v[0] + self.m[(i1, j1)] * v[1]);
            }
        }
        out
    }

    /// Measures qubit `q` in `basis`; see [`StateVector::measure_in`].
    pub fn measure_in<S: OutcomeSource + ?Sized>(
        &self,
        q: usize,
        basis: &Basis2,
        source: &mut S,
        keep_qubit: bool,
    ) -> Result<(bool, DensityMatrix)> {
        let (p0, _) = self.outcome_distribution_in(q, basis)?;
        let outcome = source.draw(p0);
        let k = usize::from(outcome);
        let block = self.projected_block(q, basis, k);
        let p = block.trace().re;
        if p <= ZERO_BRANCH {
            return Err(Error::ZeroProbabilityBranch);
        }
        let block = block * c(1.0 / p, 0.0);
        let rest = DensityMatrix {
            n: self.n - 1,
            m: block,
        };
        if !keep_qubit {
            return Ok((outcome, rest));
        }
        // Re-insert the collapsed qubit at position q.
        let v = basis.vector(k);
        let proj = DensityMatrix {
            n: 1,
            m: DMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj()),
        };
        let (before, after) = (q, self.n - 1 - q);
        let d = self.dim();
        let mask = self.mask(q);
        let mut m = DMatrix::from_element(d, d, c(0.0, 0.0));
        let split = |i: usize| -> (usize, usize) {
            let hi = i >> (after + 1);
            let lo = i & ((1 << after) - 1);
            let bit = usize::from(i & mask != 0);
            ((hi << after) | lo, bit)
        };
        let _ = before;
        for i in 0..d {
            let (ri, bi) = split(i);
            for j in 0..d {
                let (rj, bj) = split(j);
                m[(i, j)] = rest.m[(ri, rj)] * proj.m[(bi, bj)];
            }
        }
        Ok((outcome, DensityMatrix { n: self.n, m }))
    }

    /// `Tr(ρ (O on qubit q))` for a 2×2 operator `O`.
    pub fn expectation_single(&self, q: usize, op: &Matrix2<Complex64>) -> Result<f64> {
        self.check_qubit(q)?;
        let mask = self.mask(q);
        let d = self.dim();
        let mut acc = c(0.0, 0.0);
        for i in 0..d {
            let bi = usize::from(i & mask != 0);
            for bj in 0..2 {
                let j = if bj == 1 { i | mask } else { i & !mask };
                acc += op[(bi, bj)] * self.m[(j, i)];
            }
        }
        Ok(acc.re)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityRepr {
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..d).map(|i| (0..d).map(|j| f(&self.m[(i, j)])).collect()).collect()
        };
        DensityRepr {
            n: self.n,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DensityRepr::deserialize(d)?;
        let dim = 1usize << r.n;
        if r.re.len() != dim || r.im.len() != dim || r.re.iter().chain(&r.im).any(|row| row.len() != dim) {
            return Err(serde::de::Error::custom("density matrix rows do not match n"));
        }
        let m = DMatrix::from_fn(dim, dim, |i, j| c(r.re[i][j], r.im[i][j]));
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

// √A for a Hermitian PSD matrix via eigendecomposition (negative rounding
// noise clipped).
fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| c(l.max(0.0).sqrt(), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Convex combination `Σ wᵢ ρᵢ`; uniform weights when `weights` is `None`.
pub fn mixture_average(states: &[DensityMatrix], weights: Option<&[f64]>) -> Result<DensityMatrix> {
    let first = states.first().ok_or(Error::Empty("mixture of zero states"))?;
    let uniform;
    let w = match weights {
        Some(w) => {
            if w.len() != states.len() {
                return Err(Error::Arity {
                    expected: states.len(),
                    got: w.len(),
                });
            }
            let total: f64 = w.iter().sum();
            if (total - 1.0).abs() > 1e-9 || w.iter().any(|&x| x < 0.0) {
                return Err(Error::ParameterOutOfRange(format!(
                    "mixture weights must be nonnegative and sum to 1 (sum = {total})"
                )));
            }
            w
        }
        None => {
            uniform = vec![1.0 / states.len() as f64; states.len()];
            &uniform[..]
        }
    };
    let mut acc = DMatrix::from_element(first.dim(), first.dim(), c(0.0, 0.0));
    for (rho, &wi) in states.iter().zip(w) {
        first.check_same_shape(rho)?;
        acc += &rho.m * c(wi, 0.0);
    }
    Ok(DensityMatrix { n: first.n, m: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{rz_gate, ForcedOutcomes, Octant};

    fn pure(amps: &[(f64, f64)]) -> DensityMatrix {
        DensityMatrix::from_pure(&StateVector::from_amplitudes(amps.iter().map(|&(r, i)| c(r, i)).collect()).unwrap())
    }

    #[test]
    fn validity_checks() {
        assert!(DensityMatrix::maximally_mixed(2).validate().is_ok());
        let bad = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(DensityMatrix::new(bad).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::InvalidDensityMatrix(_))));
    }

    #[test]
    fn clipping_repairs_negative_estimates() {
        let est = DMatrix::from_row_slice(2, 2, &[c(1.1, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.1, 0.0)]);
        let rho = DensityMatrix::from_hermitian_clipped(est).unwrap();
        assert!(rho.validate().is_ok());
        assert!((rho.entry(0, 0).re - 1.0).abs() < 1e-12);
        let ok = DensityMatrix::maximally_mixed(2);
        let same = DensityMatrix::from_hermitian_clipped(ok.matrix().clone()).unwrap();
        assert!(same.max_abs_diff(&ok).unwrap() < 1e-14);
    }

    #[test]
    fn partial_trace_of_product_basis_state() {
        let rho = DensityMatrix::from_pure(&StateVector::basis(2, 0).unwrap());
        let r = rho.partial_trace(&[0]).unwrap();
        assert_eq!(r.entry(0, 0), c(1.0, 0.0));
        assert_eq!(r.entry(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn partial_trace_of_cluster_pair_is_mixed() {
        let rho = DensityMatrix::from_pure(&StateVector::cluster_pair());
        // Brute force: (Tr₁ρ)_{ab} = Σ_t ρ_{(a,t),(b,t)} and Tr₀ likewise.
        for keep in [0usize, 1] {
            let r = rho.partial_trace(&[keep]).unwrap();
            for a in 0..2 {
                for b in 0..2 {
                    let mut want = c(0.0, 0.0);
                    for t in 0..2 {
                        let (ia, ib) = if keep == 0 {
                            (2 * a + t, 2 * b + t)
                        } else {
                            (2 * t + a, 2 * t + b)
                        };
                        want += rho.entry(ia, ib);
                    }
                    assert!((r.entry(a, b) - want).norm() < 1e-15);
                }
            }
            assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(1)).unwrap() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_tensor_product() {
        let a = pure(&[(0.6, 0.0), (0.0, 0.8)]);
        let b = DensityMatrix::from_pure(&StateVector::cluster_pair());
        let ab = a.tensor(&b);
        assert!(ab.partial_trace(&[0]).unwrap().max_abs_diff(&a).unwrap() < 1e-15);
        assert!(ab.partial_trace(&[1, 2]).unwrap().max_abs_diff(&b).unwrap() < 1e-15);
        assert!((ab.partial_trace(&[2]).unwrap().trace().re - 1.0).abs() < 1e-15);
        assert_eq!(ab.partial_trace(&[]), Err(Error::Empty("partial trace keep set")));
    }

    #[test]
    fn permutation_swaps_factors() {
        let a = pure(&[(0.6, 0.0), (0.0, 0.8)]);
        let b = DensityMatrix::from_pure(&StateVector::plus());
        let ab = a.tensor(&b);
        let ba = ab.permuted(&[1, 0]).unwrap();
        assert!(ba.max_abs_diff(&b.tensor(&a)).unwrap() < 1e-15);
        assert_eq!(ab.permuted(&[0, 1]).unwrap(), ab);
        assert!(ab.permuted(&[0, 0]).is_err());
    }

    #[test]
    fn fidelity_cases() {
        let zero = pure(&[(1.0, 0.0), (0.0, 0.0)]);
        let one = pure(&[(0.0, 0.0), (1.0, 0.0)]);
        let mixed = DensityMatrix::maximally_mixed(1);
        assert!((zero.fidelity(&zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(zero.fidelity(&one).unwrap() < 1e-12);
        assert!((zero.fidelity(&mixed).unwrap() - 0.5).abs() < 1e-12);
        assert!((mixed.fidelity(&zero).unwrap() - 0.5).abs() < 1e-12);
        assert!(zero.fidelity(&DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn entropy_cases() {
        assert!((DensityMatrix::maximally_mixed(1).von_neumann_entropy() - 1.0).abs() < 1e-12);
        assert!((DensityMatrix::maximally_mixed(2).von_neumann_entropy() - 2.0).abs() < 1e-12);
        let p = DensityMatrix::from_pure(&StateVector::cluster_pair());
        assert!(p.von_neumann_entropy().abs() < 1e-12);
    }

    #[test]
    fn phase_average_over_octants_is_mixed() {
        let states: Vec<_> = Octant::ALL
            .iter()
            .map(|&t| {
                let mut rho = DensityMatrix::from_pure(&StateVector::plus());
                rho.apply_single(0, &rz_gate(t)).unwrap();
                rho
            })
            .collect();
        let avg = mixture_average(&states, None).unwrap();
        assert!(avg.max_abs_diff(&DensityMatrix::maximally_mixed(1)).unwrap() < 1e-15);

        let single = mixture_average(&states[3..4], None).unwrap();
        assert_eq!(single, states[3]);
        assert_eq!(mixture_average(&[], None), Err(Error::Empty("mixture of zero states")));
        assert!(mixture_average(&states[..2], Some(&[0.7, 0.7])).is_err());
    }

    #[test]
    fn conjugation_matches_pure_evolution() {
        let mut psi = StateVector::cluster_pair();
        let mut rho = DensityMatrix::from_pure(&psi);
        let u = Unitary2::hadamard() * rz_gate(Octant::new(3));
        psi.apply_single(1, &u).unwrap();
        rho.apply_single(1, &u).unwrap();
        psi.apply_cz(0, 1).unwrap();
        rho.apply_cz(0, 1).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::from_pure(&psi)).unwrap() < 1e-15);
    }

    #[test]
    fn measurement_matches_pure_measurement() {
        let mut psi = StateVector::cluster_pair();
        psi.apply_rz(0, Octant::new(3)).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        for q in 0..2 {
            for d in Octant::ALL {
                let b = Basis2::delta(d);
                let (a0, a1) = psi.outcome_distribution_in(q, &b).unwrap();
                let (r0, r1) = rho.outcome_distribution_in(q, &b).unwrap();
                assert!((a0 - r0).abs() < 1e-15 && (a1 - r1).abs() < 1e-15);
                for keep in [false, true] {
                    for outcome in [false, true] {
                        let mut f1 = ForcedOutcomes::new(vec![outcome]);
                        let mut f2 = ForcedOutcomes::new(vec![outcome]);
                        let (_, sp) = psi.measure_in(q, &b, &mut f1, keep).unwrap();
                        let (_, sr) = rho.measure_in(q, &b, &mut f2, keep).unwrap();
                        assert!(sr.max_abs_diff(&DensityMatrix::from_pure(&sp)).unwrap() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn serde_roundtrip_validates() {
        let rho = DensityMatrix::from_pure(&StateVector::cluster_pair());
        let json = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&json).unwrap();
        assert!(back.max_abs_diff(&rho).unwrap() < 1e-15);
        let bad = r#"{"n":1,"re":[[2.0,0.0],[0.0,0.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#;
        assert!(serde_json::from_str::<DensityMatrix>(bad).is_err());
    }

    #[test]
    fn single_qubit_expectations() {
        let rho = DensityMatrix::from_bloch([0.1, -0.2, 0.3]).unwrap();
        let x = Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        let y = Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0));
        assert!((rho.expectation_single(0, &x).unwrap() - 0.1).abs() < 1e-15);
        assert!((rho.expectation_single(0, &y).unwrap() + 0.2).abs() < 1e-15);
    }
}
