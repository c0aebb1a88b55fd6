//! Brute-force reference for the two-qubit computation, written directly in
//! amplitudes with no use of the simulator's state types.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

/// `½ Σ_ab (−1)^{x₁a + x₂b + ab} |ab⟩`: inputs encoded by `Z^x` on `|+⟩`,
/// then one controlled-Z.
fn input_state(x: [bool; 2]) -> [Complex64; 4] {
    let mut psi = [Complex64::new(0.0, 0.0); 4];
    for a in 0..2usize {
        for b in 0..2usize {
            let parity = (usize::from(x[0]) * a + usize::from(x[1]) * b + a * b) % 2;
            psi[2 * a + b] = Complex64::new(if parity == 0 { 0.5 } else { -0.5 }, 0.0);
        }
    }
    psi
}

/// `⟨m_φ|` coefficient on `|bit⟩`, with `|0_φ⟩ = (|0⟩ + e^{iφ}|1⟩)/√2`.
fn bra(m: usize, phi: f64, bit: usize) -> Complex64 {
    if bit == 0 {
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)
    } else {
        let sign = if m == 0 { 1.0 } else { -1.0 };
        Complex64::from_polar(sign * std::f64::consts::FRAC_1_SQRT_2, -phi)
    }
}

/// `P(m₁, m₂)` for angles `φ = k·π/4`; the second angle is `(−1)^{m₁} φ₂`.
/// Index is `2m₁ + m₂`.
pub fn two_qubit_distribution(phi_k: [i64; 2], x: [bool; 2]) -> [f64; 4] {
    let psi = input_state(x);
    let phi1 = phi_k[0] as f64 * FRAC_PI_4;
    let mut p = [0.0; 4];
    for m1 in 0..2usize {
        let phi2 = if m1 == 0 { 1.0 } else { -1.0 } * phi_k[1] as f64 * FRAC_PI_4;
        for m2 in 0..2usize {
            let mut amp = Complex64::new(0.0, 0.0);
            for a in 0..2usize {
                for b in 0..2usize {
                    amp += bra(m1, phi1, a) * bra(m2, phi2, b) * psi[2 * a + b];
                }
            }
            p[2 * m1 + m2] = amp.norm_sqr();
        }
    }
    p
}

/// Eigenvalues of the noisy source state from its closed form: weight
/// `v + (1−v)(λ/2 + (1−λ)/4)` on the ideal state, `(1−v)(λ/2 + (1−λ)/4)` on
/// its coloured-noise partner and `(1−v)(1−λ)/4` twice. Sorted descending.
pub fn noisy_spectrum(v: f64, lambda: f64) -> [f64; 4] {
    let white = (1.0 - v) * (1.0 - lambda) / 4.0;
    let coloured = (1.0 - v) * lambda / 2.0;
    [v + coloured + white, coloured + white, white, white]
}

/// Binomial standard deviation of a frequency estimated from `n` shots.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Ten-plus tuples spread over angles and inputs, including `φ₂` beyond
/// `π`.
pub fn sample_tuples() -> Vec<([i64; 2], [bool; 2])> {
    vec![
        ([0, 0], [false, false]),
        ([1, 0], [false, false]),
        ([0, 1], [false, true]),
        ([2, 2], [false, false]),
        ([2, 2], [true, false]),
        ([3, 1], [true, true]),
        ([1, 3], [false, true]),
        ([4, 2], [true, false]),
        ([5, 7], [false, false]),
        ([6, 3], [true, true]),
        ([7, 5], [false, true]),
        ([2, 6], [true, true]),
    ]
}
