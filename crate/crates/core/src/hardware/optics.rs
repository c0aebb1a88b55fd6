//! Jones-matrix models of the two measurement stations.
//!
//! Convention: horizontal polarization is `|0⟩`, vertical is `|1⟩`, and the
//! PBS transmitted (horizontal) port reports outcome 0. A station is the
//! unitary the photon undergoes before the PBS; its measurement basis is
//! `U†|0⟩, U†|1⟩`.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use super::delta2_table;
use crate::mbqc::Station;
use crate::quantum::{c, rz_gate, Basis2, Octant, Unitary2};

/// Half-wave plate with fast axis at `alpha` radians.
pub fn hwp(alpha: f64) -> Unitary2 {
    let (s, co) = (2.0 * alpha).sin_cos();
    Unitary2::from_matrix_unchecked(Matrix2::new(c(co, 0.0), c(s, 0.0), c(s, 0.0), c(-co, 0.0)))
}

/// Quarter-wave plate with fast axis at `alpha` radians.
pub fn qwp(alpha: f64) -> Unitary2 {
    let (s, co) = alpha.sin_cos();
    let off = c(1.0, -1.0) * (s * co);
    Unitary2::from_matrix_unchecked(Matrix2::new(c(co * co, s * s), off, off, c(s * s, co * co)))
}

/// Pockels cell imprinting relative phase `phi` on vertical polarization;
/// the identity when no voltage is applied.
pub fn pockels(phi: f64) -> Unitary2 {
    rz_gate(phi)
}

/// One optical element in traversal order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Qwp(f64),
    Hwp(f64),
    /// Pockels cell driven to `nominal` with an additive `offset` error.
    Pockels {
        nominal: Octant,
        offset: f64,
    },
}

impl Element {
    fn unitary(&self) -> Unitary2 {
        match *self {
            Element::Qwp(a) => qwp(a),
            Element::Hwp(a) => hwp(a),
            Element::Pockels { nominal, offset } => pockels(nominal.radians() + offset),
        }
    }
}

/// Optics in front of the PBS plus the classical outcome flip applied by
/// the server afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct OpticalChain {
    pub elements: Vec<Element>,
    pub flip: bool,
}

impl OpticalChain {
    /// Total unitary before the PBS (first element acts first).
    pub fn unitary(&self) -> Unitary2 {
        self.elements
            .iter()
            .fold(Unitary2::identity(), |acc, e| e.unitary() * acc)
    }

    /// Basis of the raw detector reading: vector `k` clicks port `k`.
    pub fn raw_basis(&self) -> Basis2 {
        Basis2::from_rotation(&self.unitary())
    }

    /// Basis of the reported outcome, flip included.
    pub fn basis(&self) -> Basis2 {
        let b = self.raw_basis();
        if self.flip {
            b.swapped()
        } else {
            b
        }
    }

    /// Reported-outcome POVM elements `(E₀, E₁)`.
    pub fn povm(&self) -> [Matrix2<nalgebra::Complex<f64>>; 2] {
        let b = self.basis();
        [b.projector(0), b.projector(1)]
    }
}

/// First station: `QWP(−π/4)` then `HWP(π/8 + δ₁/4)`.
pub fn build_o_delta1(delta1: Octant) -> OpticalChain {
    OpticalChain {
        elements: vec![Element::Qwp(-PI / 4.0), Element::Hwp(PI / 8.0 + delta1.radians() / 4.0)],
        flip: false,
    }
}

/// Second station: Pockels cell then `HWP(π/8)`, with the phase and flip
/// taken from the phase-shift table.
pub fn build_o_delta2(delta2: Octant) -> OpticalChain {
    let row = delta2_table(delta2);
    OpticalChain {
        elements: vec![
            Element::Pockels {
                nominal: row.pc_shift,
                offset: 0.0,
            },
            Element::Hwp(PI / 8.0),
        ],
        flip: row.flip,
    }
}

/// Adds `offset` radians to every energised Pockels cell in the chain. An
/// undriven cell (nominal shift 0) is left alone.
pub fn apply_pc_imperfection(chain: &OpticalChain, offset: f64) -> OpticalChain {
    let elements = chain
        .elements
        .iter()
        .map(|&e| match e {
            Element::Pockels { nominal, offset: o } if nominal != Octant::ZERO => Element::Pockels {
                nominal,
                offset: o + offset,
            },
            other => other,
        })
        .collect();
    OpticalChain {
        elements,
        flip: chain.flip,
    }
}

/// The experiment's measurement hardware as a [`Station`]: the first
/// measurement uses the waveplate station, every later one the Pockels-cell
/// station (with its optional phase error). Bases are precomputed.
#[derive(Debug, Clone)]
pub struct HardwareStation {
    first: Vec<(Basis2, bool)>,
    second: Vec<(Basis2, bool)>,
}

impl HardwareStation {
    pub fn new(pc_offset: f64) -> Self {
        let setting = |chain: OpticalChain| (chain.raw_basis(), chain.flip);
        HardwareStation {
            first: Octant::ALL.iter().map(|&d| setting(build_o_delta1(d))).collect(),
            second: Octant::ALL
                .iter()
                .map(|&d| setting(apply_pc_imperfection(&build_o_delta2(d), pc_offset)))
                .collect(),
        }
    }

    pub fn ideal() -> Self {
        HardwareStation::new(0.0)
    }
}

impl Station for HardwareStation {
    fn setting(&self, round: usize, delta: Octant) -> (Basis2, bool) {
        let table = if round == 0 { &self.first } else { &self.second };
        table[delta.k() as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{StateVector, COMPOSED_TOL};

    #[test]
    fn plates_are_unitary() {
        for a in [-0.7, 0.0, 0.3, PI / 8.0, 2.0] {
            assert!(Unitary2::new(*hwp(a).matrix()).is_ok());
            assert!(Unitary2::new(*qwp(a).matrix()).is_ok());
        }
    }

    #[test]
    fn first_station_small_cases() {
        assert!(
            build_o_delta1(Octant::ZERO)
                .basis()
                .projector_distance(&Basis2::delta(Octant::ZERO))
                < COMPOSED_TOL
        );
        assert!(
            build_o_delta1(Octant::PI_2)
                .basis()
                .projector_distance(&Basis2::delta(Octant::PI_2))
                < COMPOSED_TOL
        );
        let [e0, e1] = build_o_delta1(Octant::new(3)).povm();
        assert!((e0 + e1 - Matrix2::identity()).norm() < 1e-12);
    }

    #[test]
    fn second_station_rows() {
        let zero = build_o_delta2(Octant::ZERO);
        assert!(!zero.flip);
        assert!(zero.basis().projector_distance(&Basis2::delta(Octant::ZERO)) < COMPOSED_TOL);
        let pi = build_o_delta2(Octant::PI);
        assert!(pi.flip);
        assert!(pi.basis().projector_distance(&Basis2::delta(Octant::PI)) < COMPOSED_TOL);
        // Raw reading at δ = π is the plain X basis.
        assert!(pi.raw_basis().projector_distance(&Basis2::delta(Octant::ZERO)) < COMPOSED_TOL);
    }

    #[test]
    fn pc_offset_behaviour() {
        let chain = build_o_delta2(Octant::PI_2);
        assert_eq!(apply_pc_imperfection(&chain, 0.0), chain);
        let back = apply_pc_imperfection(&apply_pc_imperfection(&chain, -PI / 20.0), PI / 20.0);
        assert!(back.basis().projector_distance(&chain.basis()) < 1e-15);
        // Undriven cell is untouched.
        let idle = build_o_delta2(Octant::ZERO);
        assert_eq!(apply_pc_imperfection(&idle, -PI / 20.0), idle);

        // |+⟩ at δ₂ = π/2: ideal P(0) = ½; with ε the station measures at
        // δ₂ − ε, so P(0) = cos²((π/2 − ε)/2).
        let eps = -PI / 20.0;
        let shifted = apply_pc_imperfection(&chain, eps);
        let (p0, _) = StateVector::plus()
            .outcome_distribution_in(0, &shifted.basis())
            .unwrap();
        let want = ((PI / 2.0 - eps) / 2.0).cos().powi(2);
        assert!((p0 - want).abs() < 1e-12);
        assert!((p0 - 0.5).abs() > 0.05);
    }
}
