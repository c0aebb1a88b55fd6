//! Static latency budget for the feed-forward delay line.

use serde::{Deserialize, Serialize};

/// Speed of light in vacuum, metres per nanosecond.
const C_M_PER_NS: f64 = 0.299_792_458;

/// Delay-line geometry and the latencies it has to hide. The detector and
/// logic latencies are representative figures; the experiment only reports
/// the Pockels-cell rise time and the fibre length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingBudget {
    pub fiber_length_m: f64,
    pub refractive_index: f64,
    pub detector_response_ns: f64,
    pub logic_ns: f64,
    pub pc_rise_ns: f64,
}

impl Default for TimingBudget {
    fn default() -> Self {
        TimingBudget {
            fiber_length_m: 65.0,
            refractive_index: 1.45,
            detector_response_ns: 50.0,
            logic_ns: 60.0,
            pc_rise_ns: 90.0,
        }
    }
}

/// Outcome of [`timing_check`]. Times are relative to the first photon's
/// detection (`t₁ = 0`); `t2_ns` is when the Pockels cell is fully switched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub photon_delay_ns: f64,
    pub required_ns: f64,
    pub slack_ns: f64,
    pub t2_ns: f64,
    pub pass: bool,
}

impl TimingBudget {
    /// Extra flight time of the delayed photon, `L·n/c`.
    pub fn photon_delay_ns(&self) -> f64 {
        self.fiber_length_m * self.refractive_index / C_M_PER_NS
    }

    pub fn required_ns(&self) -> f64 {
        self.detector_response_ns + self.logic_ns + self.pc_rise_ns
    }
}

/// The delayed photon must arrive after the Pockels cell has settled.
pub fn timing_check(budget: &TimingBudget) -> TimingReport {
    let delay = budget.photon_delay_ns();
    let required = budget.required_ns();
    TimingReport {
        photon_delay_ns: delay,
        required_ns: required,
        slack_ns: delay - required,
        t2_ns: required,
        pass: delay >= required,
    }
}
