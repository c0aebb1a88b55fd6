use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Mul;

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{c, Octant, EXACT_TOL};
use crate::{Error, Result};

/// A 2×2 unitary acting on one qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(Matrix2<Complex64>);

impl Unitary2 {
    /// Checks `U†U = I` within [`EXACT_TOL`].
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let u = Unitary2(m);
        let dev = (m.adjoint() * m - Matrix2::identity()).norm();
        if dev > EXACT_TOL {
            return Err(Error::ParameterOutOfRange(format!(
                "matrix is not unitary (‖U†U−I‖ = {dev:e})"
            )));
        }
        Ok(u)
    }

    /// Skips the unitarity check; for matrices unitary by construction.
    pub(crate) fn from_matrix_unchecked(m: Matrix2<Complex64>) -> Self {
        Unitary2(m)
    }

    pub fn identity() -> Self {
        Unitary2(Matrix2::identity())
    }

    pub fn hadamard() -> Self {
        let s = c(FRAC_1_SQRT_2, 0.0);
        Unitary2(Matrix2::new(s, s, s, -s))
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
        Unitary2(Matrix2::new(o, l, l, o))
    }

    pub fn pauli_z() -> Self {
        rz_gate(Octant::PI)
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Unitary2(self.0.adjoint())
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    /// `‖U − V‖_F`, sensitive to global phase.
    pub fn distance(&self, other: &Unitary2) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;
    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2(self.0 * rhs.0)
    }
}

/// Anything that can parametrise a `z` rotation.
pub trait RotationAngle {
    fn phase(&self) -> Complex64;
}

impl RotationAngle for Octant {
    fn phase(&self) -> Complex64 {
        Octant::phase(*self)
    }
}

impl RotationAngle for f64 {
    fn phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, *self)
    }
}

/// `Rz(θ) = diag(1, e^{iθ})`.
pub fn rz_gate<A: RotationAngle>(theta: A) -> Unitary2 {
    let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
    Unitary2(Matrix2::new(l, o, o, theta.phase()))
}
