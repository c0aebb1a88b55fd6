//! Machine-readable summary of the exhaustive security checks.

use serde::{Deserialize, Serialize};

use super::{all_assignments, delta_uniformity, enumerate_views, DeltaUniformity, HonestAngle, Probe, World};
use crate::exec::Execution;
use crate::mbqc::MeasurementGraph;
use crate::quantum::Octant;
use crate::Result;

/// Real/ideal comparison for one `(n, θ, ρ)`, over every malicious
/// assignment of the other `n − 1` angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrsrVerdict {
    pub n_clients: usize,
    pub theta: Octant,
    pub probe: Probe,
    pub assignments: usize,
    pub equal: bool,
    pub max_distance: f64,
}

/// The same comparison with the honest angle pinned to 0; the worlds must
/// separate whenever `θ ≠ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeControl {
    pub theta: Octant,
    pub probe: Probe,
    pub distance: f64,
    pub distinguishable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecurityReport {
    pub crsr: Vec<CrsrVerdict>,
    pub crsr_max_distance: f64,
    pub negative_control: Vec<NegativeControl>,
    pub delta_uniformity: Vec<DeltaUniformity>,
    pub pass: bool,
}

/// Exhaustive real-vs-ideal comparison for each client count.
pub fn crsr_security_sweep(client_counts: &[usize], exec: Execution) -> Result<Vec<CrsrVerdict>> {
    let mut cells = Vec::new();
    for &n in client_counts {
        for theta in Octant::ALL {
            for probe in Probe::ALL {
                cells.push((n, theta, probe));
            }
        }
    }
    exec.map(cells, |(n, theta, probe)| {
        let assignments = all_assignments(n.saturating_sub(1));
        let mut equal = true;
        let mut max_distance: f64 = 0.0;
        for m in &assignments {
            let real = enumerate_views(World::Real, theta, probe, m, HonestAngle::Uniform)?;
            let ideal = enumerate_views(World::Ideal, theta, probe, m, HonestAngle::Uniform)?;
            equal &= real.equals(&ideal, 0.0);
            max_distance = max_distance.max(real.statistical_distance(&ideal));
        }
        Ok(CrsrVerdict {
            n_clients: n,
            theta,
            probe,
            assignments: assignments.len(),
            equal,
            max_distance,
        })
    })
    .into_iter()
    .collect()
}

fn negative_controls() -> Result<Vec<NegativeControl>> {
    let mut out = Vec::new();
    let m = [Octant::new(3)];
    for theta in Octant::ALL {
        for probe in Probe::ALL {
            let fixed = HonestAngle::Fixed(Octant::ZERO);
            let real = enumerate_views(World::Real, theta, probe, &m, fixed)?;
            let ideal = enumerate_views(World::Ideal, theta, probe, &m, fixed)?;
            let distance = real.statistical_distance(&ideal);
            out.push(NegativeControl {
                theta,
                probe,
                distance,
                distinguishable: distance > 0.5,
            });
        }
    }
    Ok(out)
}

/// Runs every check. `algorithms` are the `(φ, x)` settings of the
/// two-qubit chain whose angle laws are checked.
pub fn security_report(algorithms: &[([Octant; 2], [bool; 2])], exec: Execution) -> Result<SecurityReport> {
    let crsr = crsr_security_sweep(&[2, 3], exec)?;
    let crsr_max_distance = crsr.iter().map(|v| v.max_distance).fold(0.0, f64::max);
    let negative_control = negative_controls()?;
    let graph = MeasurementGraph::two_chain(false);
    let delta = algorithms
        .iter()
        .map(|(phi, x)| delta_uniformity(&graph, phi, x, exec))
        .collect::<Result<Vec<_>>>()?;
    // θ = 0 cannot be told apart even with a fixed honest angle.
    let controls_ok = negative_control
        .iter()
        .all(|c| c.distinguishable == (c.theta != Octant::ZERO));
    let pass = crsr.iter().all(|v| v.equal) && controls_ok && delta.iter().all(|d| d.uniform);
    Ok(SecurityReport {
        crsr,
        crsr_max_distance,
        negative_control,
        delta_uniformity: delta,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_report_passes() {
        let r = security_report(&[([Octant::PI_2, Octant::ZERO], [false, true])], Execution::Parallel).unwrap();
        assert!(r.pass);
        assert_eq!(r.crsr.len(), 2 * 8 * 6);
        assert_eq!(r.crsr_max_distance, 0.0);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"probe\":\"|+i>\""));
    }
}
