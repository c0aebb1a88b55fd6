use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hardware::{NoiseParams, TimingBudget, VoltageMap};
use crate::quantum::Octant;
use crate::security::BlindnessGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exact, noiseless.
    #[default]
    Ideal,
    /// Exact, with the noise model.
    Noisy,
    /// Seeded shots of the full protocol under the noise model.
    Sampled,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Mode::Ideal),
            "noisy" => Ok(Mode::Noisy),
            "sampled" => Ok(Mode::Sampled),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Ideal => "ideal",
            Mode::Noisy => "noisy",
            Mode::Sampled => "sampled",
        })
    }
}

/// A two-qubit classical computation: angles `φ₁, φ₂` and input bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Algorithm {
    pub phi: [Octant; 2],
    pub x: [bool; 2],
}

impl Algorithm {
    pub fn new(phi1: i64, phi2: i64, x1: bool, x2: bool) -> Self {
        Algorithm {
            phi: [Octant::new(phi1), Octant::new(phi2)],
            x: [x1, x2],
        }
    }

    /// `"φ=(k1,k2) x=(x1,x2)"` with angles in units of π/4.
    pub fn label(&self) -> String {
        format!(
            "phi=({},{}) x=({},{})",
            self.phi[0].k(),
            self.phi[1].k(),
            u8::from(self.x[0]),
            u8::from(self.x[1])
        )
    }
}

/// Every `(φ₁, φ₂) ∈ {0, π/4, π/2, 3π/4}²` with all four input pairs, input
/// bits varying fastest.
pub fn default_grid() -> Vec<Algorithm> {
    let mut out = Vec::with_capacity(64);
    for p1 in 0..4 {
        for p2 in 0..4 {
            for x in 0..4u8 {
                out.push(Algorithm::new(p1, p2, x & 2 != 0, x & 1 != 0));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlindnessConfig {
    pub grids: Vec<BlindnessGrid>,
    /// Outcome the post-measurement states are conditioned on.
    pub outcome: bool,
    /// Shots per Pauli setting in sampled tomography.
    pub tomography_shots: u64,
}

impl Default for BlindnessConfig {
    fn default() -> Self {
        BlindnessConfig {
            grids: BlindnessGrid::ALL.to_vec(),
            outcome: false,
            tomography_shots: 10_000,
        }
    }
}

/// Everything a CLI run reads from its config file. Missing fields take
/// their defaults; unknown fields are an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// Empty means [`default_grid`].
    pub algorithms: Vec<Algorithm>,
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseParams,
    pub blindness: BlindnessConfig,
    pub timing: TimingBudget,
    pub voltages: VoltageMap,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Ideal,
            algorithms: Vec::new(),
            shots: 100_000,
            seed: 0,
            noise: NoiseParams::EXPERIMENTAL,
            blindness: BlindnessConfig::default(),
            timing: TimingBudget::default(),
            voltages: VoltageMap::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode == Mode::Sampled && self.shots == 0 {
            return Err(Error::Config("sampled mode needs shots > 0".into()));
        }
        if self.mode == Mode::Sampled && self.blindness.tomography_shots == 0 {
            return Err(Error::Config("sampled tomography needs tomography_shots > 0".into()));
        }
        self.noise.validate().map_err(|e| Error::Config(e.to_string()))?;
        VoltageMap::new(self.voltages.volts).map_err(|e| Error::Config(e.to_string()))?;
        let t = &self.timing;
        let times = [
            t.fiber_length_m,
            t.refractive_index,
            t.detector_response_ns,
            t.logic_ns,
            t.pc_rise_ns,
        ];
        if times.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Config("timing values must be finite and nonnegative".into()));
        }
        Ok(())
    }

    pub fn algorithms(&self) -> Vec<Algorithm> {
        if self.algorithms.is_empty() {
            default_grid()
        } else {
            self.algorithms.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 64);
        assert_eq!(g[0], Algorithm::new(0, 0, false, false));
        assert_eq!(g[5], Algorithm::new(0, 1, false, true));
        assert_eq!(g[5].label(), "phi=(0,1) x=(0,1)");
    }

    #[test]
    fn parses_and_round_trips() {
        let text = r#"
            mode = "sampled"
            seed = 7
            shots = 1000

            [noise]
            v = 0.8
            lambda = 0.5

            [[algorithms]]
            phi = [1, 2]
            x = [false, true]
        "#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.mode, Mode::Sampled);
        assert_eq!(cfg.noise.pc_phase_offset, 0.0);
        assert_eq!(cfg.algorithms(), vec![Algorithm::new(1, 2, false, true)]);
        assert_eq!(cfg.blindness.grids.len(), 3);
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(ExperimentConfig::from_toml("").unwrap().algorithms().len(), 64);
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            "mode = \"fast\"",
            "shots = 0\nmode = \"sampled\"",
            "colour = 3",
            "[noise]\nv = 1.5\nlambda = 0.1",
            "[[algorithms]]\nphi = [9, 0]\nx = [false, false]",
            "[voltages]\nvolts = [0.0, 900.0, 850.0, 1100.0]",
            "[timing]\nfiber_length_m = -1.0\nrefractive_index = 1.4\ndetector_response_ns = 1.0\nlogic_ns = 1.0\npc_rise_ns = 1.0",
        ] {
            assert!(matches!(ExperimentConfig::from_toml(bad), Err(Error::Config(_))), "{bad}");
        }
        assert_eq!("noisy".parse::<Mode>().unwrap(), Mode::Noisy);
        assert!("x".parse::<Mode>().is_err());
    }
}
