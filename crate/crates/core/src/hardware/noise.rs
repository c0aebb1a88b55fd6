//! Source noise: the ideal pair state mixed with coloured and white noise.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::quantum::{c, DensityMatrix, StateVector};
use crate::{Error, Result};

/// Visibility `v`, coloured-noise fraction `λ` and the Pockels-cell phase
/// error in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub v: f64,
    pub lambda: f64,
    #[serde(default)]
    pub pc_phase_offset: f64,
}

impl NoiseParams {
    /// Values fitted to the two-client experiment.
    pub const EXPERIMENTAL: NoiseParams = NoiseParams {
        v: 0.76,
        lambda: 0.63,
        pc_phase_offset: -PI / 20.0,
    };

    pub const NOISELESS: NoiseParams = NoiseParams {
        v: 1.0,
        lambda: 0.0,
        pc_phase_offset: 0.0,
    };

    pub fn validate(&self) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(self.v) || !unit(self.lambda) {
            return Err(Error::ParameterOutOfRange(format!(
                "noise needs v, λ in [0, 1], got v = {}, λ = {}",
                self.v, self.lambda
            )));
        }
        if !self.pc_phase_offset.is_finite() {
            return Err(Error::ParameterOutOfRange("Pockels offset must be finite".into()));
        }
        Ok(())
    }
}

fn half(signs: [f64; 4]) -> StateVector {
    StateVector::from_amplitudes(signs.iter().map(|&s| c(s / 2.0, 0.0)).collect()).expect("±½ entries have unit norm")
}

/// The ideal source state `½(|00⟩ + |01⟩ + |10⟩ − |11⟩)`.
pub fn psi_minus() -> StateVector {
    half([1.0, 1.0, 1.0, -1.0])
}

/// Coloured-noise partner `½(|00⟩ + |01⟩ − |10⟩ + |11⟩)`.
pub fn psi_plus() -> StateVector {
    half([1.0, 1.0, -1.0, 1.0])
}

/// Orthonormal basis containing the two states above (in that order),
/// completed by two further maximally entangled states.
pub fn source_basis() -> [StateVector; 4] {
    [
        psi_minus(),
        psi_plus(),
        half([1.0, -1.0, 1.0, 1.0]),
        half([-1.0, 1.0, 1.0, 1.0]),
    ]
}

/// `v|ψ⁻⟩⟨ψ⁻| + (1−v)[λ/2 (|ψ⁺⟩⟨ψ⁺| + |ψ⁻⟩⟨ψ⁻|) + (1−λ)/4 I]`.
pub fn noisy_source_state(p: &NoiseParams) -> Result<DensityMatrix> {
    p.validate()?;
    let proj = |s: StateVector| DensityMatrix::from_pure(&s).matrix().clone();
    let minus = proj(psi_minus());
    let plus = proj(psi_plus());
    let w = 1.0 - p.v;
    let m = &minus * c(p.v + w * p.lambda / 2.0, 0.0)
        + &plus * c(w * p.lambda / 2.0, 0.0)
        + DMatrix::identity(4, 4) * c(w * (1.0 - p.lambda) / 4.0, 0.0);
    DensityMatrix::new(m)
}

/// `⟨b|ρ|b⟩` for each state of [`source_basis`].
pub fn source_basis_weights(rho: &DensityMatrix) -> Result<[f64; 4]> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch("source basis weights need two qubits".into()));
    }
    let basis = source_basis();
    let mut out = [0.0; 4];
    for (o, b) in out.iter_mut().zip(&basis) {
        let amps = b.amplitudes();
        let mut acc = c(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += amps[i].conj() * rho.entry(i, j) * amps[j];
            }
        }
        *o = acc.re;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits() {
        let pure = noisy_source_state(&NoiseParams {
            v: 1.0,
            lambda: 0.3,
            pc_phase_offset: 0.0,
        })
        .unwrap();
        let ideal = DensityMatrix::from_pure(&psi_minus());
        assert!(pure.max_abs_diff(&ideal).unwrap() < 1e-15);
        let white = noisy_source_state(&NoiseParams {
            v: 0.0,
            lambda: 0.0,
            pc_phase_offset: 0.0,
        })
        .unwrap();
        assert!(white.max_abs_diff(&DensityMatrix::maximally_mixed(2)).unwrap() < 1e-15);
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = source_basis();
        for i in 0..4 {
            for j in 0..4 {
                let ip = b[i].inner(&b[j]).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip.re - want).abs() < 1e-15 && ip.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        for (v, l) in [(-0.1, 0.5), (1.1, 0.5), (0.5, -0.01), (0.5, 1.5)] {
            assert!(noisy_source_state(&NoiseParams {
                v,
                lambda: l,
                pc_phase_offset: 0.0
            })
            .is_err());
        }
    }
}
