use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use super::{c, Octant, Unitary2};

/// An orthonormal single-qubit measurement basis; outcome `k` projects onto
/// `vectors[k]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Basis2 {
    vectors: [Vector2<Complex64>; 2],
}

impl Basis2 {
    /// `{|+_δ⟩, |−_δ⟩}` with `|±_δ⟩ = (|0⟩ ± e^{iδ}|1⟩)/√2`. Outcome 0 is
    /// `|+_δ⟩`. Built from the exact phase table so that `δ+π` yields the
    /// same vectors in swapped order, bit for bit.
    pub fn delta(delta: Octant) -> Self {
        let s = FRAC_1_SQRT_2;
        let e = delta.phase() * s;
        let one = c(s, 0.0);
        Basis2 {
            vectors: [Vector2::new(one, e), Vector2::new(one, -e)],
        }
    }

    /// Same basis for an arbitrary real angle.
    pub fn delta_radians(delta: f64) -> Self {
        let s = FRAC_1_SQRT_2;
        let e = Complex64::from_polar(s, delta);
        let one = c(s, 0.0);
        Basis2 {
            vectors: [Vector2::new(one, e), Vector2::new(one, -e)],
        }
    }

    pub fn computational() -> Self {
        let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
        Basis2 {
            vectors: [Vector2::new(l, o), Vector2::new(o, l)],
        }
    }

    /// Basis measured by applying `u` and then reading the computational
    /// basis: outcome `k` projects onto `u†|k⟩`.
    pub fn from_rotation(u: &Unitary2) -> Self {
        let adj = u.matrix().adjoint();
        Basis2 {
            vectors: [adj.column(0).into_owned(), adj.column(1).into_owned()],
        }
    }

    /// Exchanges outcome labels.
    pub fn swapped(self) -> Self {
        Basis2 {
            vectors: [self.vectors[1], self.vectors[0]],
        }
    }

    pub fn vector(&self, k: usize) -> &Vector2<Complex64> {
        &self.vectors[k]
    }

    pub fn projector(&self, k: usize) -> Matrix2<Complex64> {
        let v = &self.vectors[k];
        v * v.adjoint()
    }

    /// Largest trace distance between corresponding projectors. Insensitive to
    /// the global phase of each basis vector.
    pub fn projector_distance(&self, other: &Basis2) -> f64 {
        (0..2)
            .map(|k| trace_norm_2x2_hermitian(&(self.projector(k) - other.projector(k))) / 2.0)
            .fold(0.0, f64::max)
    }
}

// Eigenvalues of a 2×2 Hermitian matrix in closed form.
fn trace_norm_2x2_hermitian(m: &Matrix2<Complex64>) -> f64 {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = (a + d) / 2.0;
    let rad = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    (mean + rad).abs() + (mean - rad).abs()
}
