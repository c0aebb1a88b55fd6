mod oracle;

use qline_bqc::hardware::NoiseParams;
use qline_bqc::mbqc::MeasurementGraph;
use qline_bqc::qline::{run_crsr, SessionRng};
use qline_bqc::quantum::rz_gate;
use qline_bqc::security::{
    all_assignments, ideal_mcbqc, ideal_rsr, server_view_blindness, server_view_joint, simulator_crsr,
    simulator_crsr_with, substituted_real_view, BlindnessGrid, CanonicalState, CorruptionFlags, CorruptionMap,
    CorruptionPayload, Filter, Probe, TargetComputation,
};
use qline_bqc::transcript::Transcript;
use qline_bqc::{DensityMatrix, Error, Octant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn substituted_real_view_matches_simulator_pointwise() {
    for theta in Octant::ALL {
        for probe in Probe::ALL {
            for m in all_assignments(2) {
                for theta1 in Octant::ALL {
                    let real = substituted_real_view(theta, theta1, &m, probe).unwrap();
                    let sim = simulator_crsr_with(theta1, &m, &probe.state(), |r| ideal_rsr(theta, r)).unwrap();
                    assert_eq!(real.correction, sim.correction);
                    assert_eq!(
                        CanonicalState::new(&real.client0_output),
                        CanonicalState::new(&sim.client0_output)
                    );
                }
            }
        }
    }
}

#[test]
fn honest_remote_rotation_realises_the_ideal_resource() {
    let mut rng = SessionRng::new(17);
    for n in 1..=4 {
        for theta in Octant::ALL {
            for probe in Probe::ALL {
                let rho = probe.state();
                let run = run_crsr(n, theta, &rho, &mut rng, &mut Transcript::disabled()).unwrap();
                let want = ideal_rsr(theta, &rho).unwrap();
                assert!(run.final_state.max_abs_diff(&want).unwrap() < 1e-12);
                // The first client's output is its own rotation of the probe.
                let mut first = rho.clone();
                first.apply_single(0, &rz_gate(run.client_thetas[0])).unwrap();
                assert!(run.client0_output.max_abs_diff(&first).unwrap() < 1e-12);
            }
        }
    }
}

#[test]
fn sampled_simulator_uses_only_the_ideal_output() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rho = Probe::PlusI.state();
    let mut calls = 0;
    let v = simulator_crsr(
        &[Octant::new(2)],
        &rho,
        |r| {
            calls += 1;
            ideal_rsr(Octant::new(5), r)
        },
        &mut rng,
    )
    .unwrap();
    assert_eq!(calls, 1);
    assert!(v.client0_output.validate().is_ok());
}

#[test]
fn honest_ideal_resource_returns_the_computation() {
    for (phi, x) in oracle::sample_tuples() {
        let target = TargetComputation::new(
            MeasurementGraph::two_chain(false),
            vec![Octant::new(phi[0]), Octant::new(phi[1])],
        )
        .unwrap();
        let want = oracle::two_qubit_distribution(phi, x);
        // One client holding both inputs, and the same inputs split in two.
        for inputs in [vec![vec![x[0], x[1]]], vec![vec![x[0]], vec![x[1]]]] {
            let flags = CorruptionFlags::honest(inputs.len());
            let out = ideal_mcbqc(&target, &inputs, &flags, None).unwrap();
            for (i, w) in want.iter().enumerate() {
                assert!((out.entry(i, i).re - w).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn corruption_only_counts_behind_an_open_filter() {
    let target =
        TargetComputation::new(MeasurementGraph::two_chain(false), vec![Octant::new(1), Octant::ZERO]).unwrap();
    let inputs = vec![vec![false, true]];
    let honest = ideal_mcbqc(&target, &inputs, &CorruptionFlags::honest(1), None).unwrap();

    let mut flags = CorruptionFlags::honest(1);
    flags.server = (Filter::Honest, true);
    assert_eq!(ideal_mcbqc(&target, &inputs, &flags, None).unwrap(), honest);

    flags.server = (Filter::Open, true);
    assert_eq!(
        ideal_mcbqc(&target, &inputs, &flags, None),
        Err(Error::MissingCorruption)
    );

    let map: Box<CorruptionMap> = Box::new(|x: &[bool], psi: &DensityMatrix| {
        assert_eq!(x, [false, true]);
        Ok(psi.clone())
    });
    let payload = CorruptionPayload {
        psi: DensityMatrix::maximally_mixed(2),
        map: map.as_ref(),
    };
    let out = ideal_mcbqc(&target, &inputs, &flags, Some(&payload)).unwrap();
    assert_eq!(out, DensityMatrix::maximally_mixed(2));
}

#[test]
fn server_pre_measurement_view_is_maximally_mixed() {
    let mixed = DensityMatrix::maximally_mixed(5);
    for noise in [None, Some(NoiseParams::EXPERIMENTAL)] {
        for (phi, x) in [
            ([0, 0], [false, false]),
            ([3, 6], [true, false]),
            ([7, 1], [true, true]),
        ] {
            let view = server_view_joint([Octant::new(phi[0]), Octant::new(phi[1])], x, noise.as_ref()).unwrap();
            assert!(view.max_abs_diff(&mixed).unwrap() < 1e-12);
        }
    }
}

// Rotating by a uniform angle twirls away every coherence, so source noise
// alone leaves the averaged states maximally mixed.
#[test]
fn noisy_grid_averages_stay_maximally_mixed() {
    for grid in BlindnessGrid::ALL {
        for outcome in [false, true] {
            let r = server_view_blindness(grid, Some(&NoiseParams::EXPERIMENTAL), outcome).unwrap();
            assert!(r.trace_distance_to_mixed < 1e-10, "{grid:?}");
        }
    }
}
