//! Simulated Pauli tomography: finite-shot measurement of every product
//! Pauli setting, linear inversion, then projection onto valid states.

use nalgebra::{DMatrix, Matrix2};
use rand::Rng;

use crate::quantum::{rz_gate, Complex64, DensityMatrix, Octant, Unitary2};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn matrix(self) -> Matrix2<Complex64> {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => Matrix2::new(one, z, z, one),
            Pauli::X => Matrix2::new(z, one, one, z),
            Pauli::Y => Matrix2::new(z, -i, i, z),
            Pauli::Z => Matrix2::new(one, z, z, -one),
        }
    }

    /// Rotation taking this observable's eigenbasis to the computational
    /// one (`+1` eigenvector to `|0⟩`).
    fn rotation(self) -> Option<Unitary2> {
        match self {
            Pauli::X => Some(Unitary2::hadamard()),
            Pauli::Y => Some(Unitary2::hadamard() * rz_gate(-Octant::PI_2)),
            Pauli::Z | Pauli::I => None,
        }
    }
}

fn settings(n: usize) -> Vec<Vec<Pauli>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                [Pauli::X, Pauli::Y, Pauli::Z].into_iter().map(move |q| {
                    let mut v = p.clone();
                    v.push(q);
                    v
                })
            })
            .collect();
    }
    out
}

fn kron_all(ops: &[Pauli]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for p in ops {
        let pm = p.matrix();
        let pd = DMatrix::from_fn(2, 2, |i, j| pm[(i, j)]);
        m = m.kronecker(&pd);
    }
    m
}

/// Reconstructs `rho` from `shots` samples per setting (`3ⁿ` settings).
pub fn simulate_tomography<R: Rng + ?Sized>(rho: &DensityMatrix, shots: u64, rng: &mut R) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    if n == 0 || n > 3 {
        return Err(Error::Unsupported(format!("tomography of {n} qubits")));
    }
    if shots == 0 {
        return Err(Error::Empty("tomography without shots"));
    }
    let d = rho.dim();
    // Empirical outcome frequencies for each setting.
    let mut freqs = Vec::new();
    for setting in settings(n) {
        let mut r = rho.clone();
        for (q, p) in setting.iter().enumerate() {
            if let Some(u) = p.rotation() {
                r.apply_single(q, &u)?;
            }
        }
        let probs: Vec<f64> = (0..d).map(|i| r.entry(i, i).re.max(0.0)).collect();
        let mut counts = vec![0u64; d];
        for _ in 0..shots {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut k = d - 1;
            for (i, p) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    k = i;
                    break;
                }
            }
            counts[k] += 1;
        }
        freqs.push((
            setting,
            counts.iter().map(|&c| c as f64 / shots as f64).collect::<Vec<_>>(),
        ));
    }

    // ⟨P⟩ for every Pauli string, averaging over compatible settings.
    let mut est = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    for idx in 0..4usize.pow(n as u32) {
        let string: Vec<Pauli> = (0..n).map(|q| all[idx / 4usize.pow((n - 1 - q) as u32) % 4]).collect();
        let mut sum = 0.0;
        let mut used = 0usize;
        for (setting, f) in &freqs {
            if string.iter().zip(setting).all(|(p, s)| *p == Pauli::I || p == s) {
                let value: f64 = f
                    .iter()
                    .enumerate()
                    .map(|(k, fk)| {
                        let parity = string
                            .iter()
                            .enumerate()
                            .filter(|(q, p)| **p != Pauli::I && k >> (n - 1 - q) & 1 == 1)
                            .count();
                        if parity % 2 == 0 {
                            *fk
                        } else {
                            -fk
                        }
                    })
                    .sum();
                sum += value;
                used += 1;
            }
        }
        let expectation = sum / used as f64;
        est += kron_all(&string) * Complex64::new(expectation / d as f64, 0.0);
    }
    DensityMatrix::from_hermitian_clipped(est)
}
