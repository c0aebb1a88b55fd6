//! Consistency checks of the hardware model: the feed-forward logic against
//! its arithmetic specification and the reference encoding tables, the
//! optical chains against the ideal measurement bases, and the timing
//! budget.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hardware::{
    apply_pc_imperfection, build_o_delta1, build_o_delta2, delta2_table, ff_circuit, lines_to_pc_shift, timing_check,
    OpticalChain, TimingBudget, TimingReport, VoltageMap,
};
use crate::quantum::{Basis2, DensityMatrix, Octant, COMPOSED_TOL};
use crate::{Error, Result};

const FF_ENCODING: &str = include_str!("../../fixtures/ff_encoding.csv");
const PHASE_SHIFT_TABLE: &str = include_str!("../../fixtures/phase_shift_table.csv");

/// Random probe states per (angle, station) pair in the chain check.
pub const CHAIN_PROBES: usize = 20;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FfEncodingRow {
    pub delta2_k: u8,
    pub fv: String,
    pub pc_voltage_label: String,
    pub pc_volts: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct PhaseShiftRow {
    pub delta2_k: u8,
    pub ideal_shift_k: u8,
    pub pc_shift_k: u8,
    pub f: u8,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Config(format!("fixture: {e}")))
}

pub fn ff_encoding_fixture() -> Result<Vec<FfEncodingRow>> {
    parse(FF_ENCODING)
}

pub fn phase_shift_fixture() -> Result<Vec<PhaseShiftRow>> {
    parse(PHASE_SHIFT_TABLE)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HwCheckReport {
    /// `(A, B, r₁, m₁)` combinations run through the circuit.
    pub ff_cases: usize,
    pub ff_mismatches: Vec<String>,
    pub fixture_rows: usize,
    pub fixture_mismatches: Vec<String>,
    pub invalid_patterns_rejected: usize,
    pub invalid_patterns_total: usize,
    pub chain_probes: usize,
    pub chain_max_deviation: f64,
    pub timing: TimingReport,
    pub voltages: VoltageMap,
    pub pass: bool,
}

fn random_probe(rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let az: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let radius: f64 = rng.random::<f64>().cbrt();
    let s = (1.0 - z * z).sqrt();
    DensityMatrix::from_bloch([radius * s * az.cos(), radius * s * az.sin(), radius * z])
}

fn chain_deviation(chain: &OpticalChain, delta: Octant, probes: &[DensityMatrix]) -> Result<f64> {
    let basis = chain.basis();
    let ideal = Basis2::delta(delta);
    let mut worst = 0.0f64;
    for p in probes {
        let (a, _) = p.outcome_distribution_in(0, &basis)?;
        let (b, _) = p.outcome_distribution_in(0, &ideal)?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

pub fn run_hw_check(timing: &TimingBudget, voltages: &VoltageMap, seed: u64) -> Result<HwCheckReport> {
    let encoding = ff_encoding_fixture()?;
    let phase = phase_shift_fixture()?;

    let mut fixture_mismatches = Vec::new();
    for row in &phase {
        let got = delta2_table(Octant::new(i64::from(row.delta2_k)));
        let want = (row.ideal_shift_k, row.pc_shift_k, row.f == 1);
        if (got.ideal_shift.k(), got.pc_shift.k(), got.flip) != want {
            fixture_mismatches.push(format!("phase-shift row δ2={}: got {got:?}", row.delta2_k));
        }
    }
    let encoding_for = |delta2: Octant| encoding.iter().find(|r| r.delta2_k == delta2.k());
    if (0..8).any(|k| encoding_for(Octant::new(k)).is_none()) {
        fixture_mismatches.push("encoding table does not cover every angle".into());
    }

    // Every input of the circuit against δ₂ = A ± B and the reference rows.
    let mut ff_mismatches = Vec::new();
    let mut ff_cases = 0;
    for a in Octant::ALL {
        for b in Octant::ALL {
            for r1 in [false, true] {
                for m1 in [false, true] {
                    ff_cases += 1;
                    let out = ff_circuit(a, b, r1, !m1, m1)?;
                    let m1_true = m1 ^ r1;
                    let want = if m1_true { a - b } else { a + b };
                    let case = format!("A={a} B={b} r1={} m1={}", u8::from(r1), u8::from(m1));
                    if out.m1_true() != m1_true || out.delta2()? != want {
                        ff_mismatches.push(format!("{case}: δ2 {} (want {want})", out.delta2()?));
                    }
                    if let Some(row) = encoding_for(want) {
                        let volts = voltages.volts_for_lines(out.v)?;
                        if out.fv_string() != row.fv || (volts - row.pc_volts).abs() > 1e-9 {
                            ff_mismatches.push(format!("{case}: fV {} at {volts} V", out.fv_string()));
                        }
                        if lines_to_pc_shift(out.v)? != delta2_table(want).pc_shift {
                            ff_mismatches.push(format!("{case}: voltage lines disagree with the phase table"));
                        }
                    }
                }
            }
        }
    }

    let mut invalid_patterns_total = 0;
    let mut invalid_patterns_rejected = 0;
    for a in Octant::ALL {
        for b in Octant::ALL {
            for r1 in [false, true] {
                for m in [false, true] {
                    invalid_patterns_total += 1;
                    if matches!(ff_circuit(a, b, r1, m, m), Err(Error::InvalidDetectorPattern { .. })) {
                        invalid_patterns_rejected += 1;
                    }
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probes = (0..CHAIN_PROBES)
        .map(|_| random_probe(&mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut chain_max_deviation = 0.0f64;
    for d in Octant::ALL {
        let second = apply_pc_imperfection(&build_o_delta2(d), 0.0);
        chain_max_deviation = chain_max_deviation
            .max(chain_deviation(&build_o_delta1(d), d, &probes)?)
            .max(chain_deviation(&second, d, &probes)?);
    }

    let timing = timing_check(timing);
    let pass = ff_mismatches.is_empty()
        && fixture_mismatches.is_empty()
        && invalid_patterns_rejected == invalid_patterns_total
        && chain_max_deviation < COMPOSED_TOL
        && timing.pass;
    Ok(HwCheckReport {
        ff_cases,
        ff_mismatches,
        fixture_rows: encoding.len() + phase.len(),
        fixture_mismatches,
        invalid_patterns_rejected,
        invalid_patterns_total,
        chain_probes: CHAIN_PROBES,
        chain_max_deviation,
        timing,
        voltages: *voltages,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass() {
        let r = run_hw_check(&TimingBudget::default(), &VoltageMap::default(), 0).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.ff_cases, 256);
        assert_eq!(r.invalid_patterns_total, 256);
        assert_eq!(r.fixture_rows, 16);
    }

    #[test]
    fn recalibrated_voltages_are_flagged() {
        let v = VoltageMap::new([0.0, 600.0, 850.0, 1100.0]).unwrap();
        let r = run_hw_check(&TimingBudget::default(), &v, 0).unwrap();
        assert!(!r.pass);
        assert!(!r.ff_mismatches.is_empty());
    }

    #[test]
    fn fixtures_parse() {
        let enc = ff_encoding_fixture().unwrap();
        assert_eq!(enc.len(), 8);
        assert_eq!(enc[1].pc_voltage_label, "V3pi/4");
        assert_eq!(phase_shift_fixture().unwrap()[3].pc_shift_k, 1);
    }
}
