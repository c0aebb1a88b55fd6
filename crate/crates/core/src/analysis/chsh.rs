use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::hardware::{noisy_source_state, NoiseParams};
use crate::quantum::{Complex64, DensityMatrix, StateVector};
use crate::{Error, Result};

/// Bell parameter measured on the source in the experiment.
pub const EXPERIMENTAL_CHSH: f64 = 2.752;

fn paulis() -> [DMatrix<Complex64>; 3] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

/// Maximal CHSH value over all measurement settings, from the correlation
/// matrix `Tᵢⱼ = Tr(ρ σᵢ⊗σⱼ)`: `2√(u₁ + u₂)` with `u₁ ≥ u₂` the two largest
/// eigenvalues of `TᵀT`.
pub fn chsh_value(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch("CHSH needs a two-qubit state".into()));
    }
    let s = paulis();
    let t = Matrix3::from_fn(|i, j| (rho.matrix() * s[i].kronecker(&s[j])).trace().re);
    let mut u: Vec<f64> = SymmetricEigen::new(t.transpose() * t)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    u.sort_by(|a, b| b.total_cmp(a));
    Ok(2.0 * (u[0] + u[1]).max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    pub ideal: f64,
    pub noise: NoiseParams,
    pub noisy_model: f64,
    pub experimental_reference: f64,
}

pub fn chsh_report(noise: &NoiseParams) -> Result<ChshReport> {
    Ok(ChshReport {
        ideal: chsh_value(&DensityMatrix::from_pure(&StateVector::cluster_pair()))?,
        noise: *noise,
        noisy_model: chsh_value(&noisy_source_state(noise)?)?,
        experimental_reference: EXPERIMENTAL_CHSH,
    })
}
