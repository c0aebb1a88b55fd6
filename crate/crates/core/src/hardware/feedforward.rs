//! Phase-shift table, Pockels-cell voltages and the feed-forward logic that
//! picks the second measurement basis from the first detector click.

use serde::{Deserialize, Serialize};

use crate::quantum::Octant;
use crate::{Error, Result};

/// How a second-station angle is realised: the Pockels cell only covers
/// `[0, π)`, anything larger is reached by a half-turn plus an outcome flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseShiftEntry {
    pub delta2: Octant,
    pub ideal_shift: Octant,
    pub pc_shift: Octant,
    pub flip: bool,
}

pub fn delta2_table(delta2: Octant) -> PhaseShiftEntry {
    let ideal_shift = -delta2;
    PhaseShiftEntry {
        delta2,
        ideal_shift,
        pc_shift: Octant::new(i64::from(ideal_shift.k() % 4)),
        flip: ideal_shift.k() >= 4,
    }
}

/// Pockels-cell drive voltage for each of the four shifts `0, π/4, π/2, 3π/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoltageMap {
    pub volts: [f64; 4],
}

impl Default for VoltageMap {
    fn default() -> Self {
        VoltageMap {
            volts: [0.0, 650.0, 850.0, 1100.0],
        }
    }
}

impl VoltageMap {
    pub fn new(volts: [f64; 4]) -> Result<Self> {
        if volts.windows(2).any(|w| w[1] <= w[0]) || volts.iter().any(|v| !v.is_finite()) {
            return Err(Error::ParameterOutOfRange(format!(
                "voltages must be finite and strictly increasing, got {volts:?}"
            )));
        }
        Ok(VoltageMap { volts })
    }

    pub fn volts(&self, pc_shift: Octant) -> Result<f64> {
        self.volts
            .get(pc_shift.k() as usize)
            .copied()
            .ok_or_else(|| Error::ParameterOutOfRange(format!("Pockels shift {pc_shift} is not below π")))
    }

    /// Voltage selected by the one-hot line triple `v₂v₁v₀`
    /// (`v₂ ↔ 3π/4`, `v₁ ↔ π/2`, `v₀ ↔ π/4`, none ↔ 0).
    pub fn volts_for_lines(&self, v: [bool; 3]) -> Result<f64> {
        self.volts(lines_to_pc_shift(v)?)
    }
}

/// Decodes the voltage lines into the Pockels shift they select.
pub fn lines_to_pc_shift(v: [bool; 3]) -> Result<Octant> {
    match v {
        [false, false, false] => Ok(Octant::ZERO),
        [false, false, true] => Ok(Octant::new(1)),
        [false, true, false] => Ok(Octant::new(2)),
        [true, false, false] => Ok(Octant::new(3)),
        _ => Err(Error::ParameterOutOfRange(format!(
            "voltage lines {v:?} are not one-hot"
        ))),
    }
}

/// The five output bits of the feed-forward circuit plus its flip output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FfOutput {
    /// One-hot voltage lines `v₂v₁v₀`.
    pub v: [bool; 3],
    pub f: bool,
    /// Corrected detector lines `(m₁^{+true}, m₁^{−true})`.
    pub m1_true_lines: (bool, bool),
}

impl FfOutput {
    pub fn m1_true(&self) -> bool {
        self.m1_true_lines.1
    }

    /// `fV` as the four-bit string printed in the encoding table.
    pub fn fv_string(&self) -> String {
        [self.f, self.v[0], self.v[1], self.v[2]]
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Recovers `δ₂` from `(f, V)`; the pair is a bijection on angles.
    pub fn delta2(&self) -> Result<Octant> {
        let pc = lines_to_pc_shift(self.v)?;
        let ideal = if self.f { pc + Octant::PI } else { pc };
        Ok(-ideal)
    }
}

// Three-bit ripple-carry adder, carry out discarded (mod 8). Bits are
// [b2, b1, b0].
fn add3(a: [bool; 3], b: [bool; 3], carry_in: bool) -> [bool; 3] {
    let mut out = [false; 3];
    let mut carry = carry_in;
    for i in (0..3).rev() {
        out[i] = a[i] ^ b[i] ^ carry;
        carry = (a[i] & b[i]) | (carry & (a[i] ^ b[i]));
    }
    out
}

/// Gate-level model of the feed-forward circuit.
///
/// Inputs are `A = θ₂ + x₂π + r₂π`, `B = φ₂`, the one-time-pad bit `r₁` and
/// the two detector lines of the first station (`m₁⁺` fires on outcome 0).
/// The lines are corrected by `r₁`; the circuit then forms `A + B` when the
/// corrected outcome is 0 and `A − B` otherwise (two's complement on three
/// bits) and drives the voltage and flip lines. A pattern with both or
/// neither detector firing is rejected.
pub fn ff_circuit(a: Octant, b: Octant, r1: bool, m1_plus: bool, m1_minus: bool) -> Result<FfOutput> {
    if m1_plus == m1_minus {
        return Err(Error::InvalidDetectorPattern {
            plus: m1_plus,
            minus: m1_minus,
        });
    }
    let plus_t = m1_plus ^ r1;
    let minus_t = m1_minus ^ r1;
    let sub = minus_t;
    let bb = b.bits().map(|x| x ^ sub);
    let [d2, d1, d0] = add3(a.bits(), bb, sub);
    Ok(FfOutput {
        v: [!d1 & d0, d1 & !d0, d1 & d0],
        f: (!d2 & (d1 | d0)) | (d2 & !d1 & !d0),
        m1_true_lines: (plus_t, minus_t),
    })
}
