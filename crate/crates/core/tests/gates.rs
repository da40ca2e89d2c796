//! Compiled gates checked against their targets through the public API.

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use pulseq::analysis::{sweep_rise_time, SweepOptions};
use pulseq::gatecomp::{
    charge_cnot_program, cnot_matrix, cpf_program, hadamard_program, ideal_cnot_program,
    rotation_program, solve_coupling, u2b_program, Amplitudes, GateProgram, ModelKind,
    PulseOptions,
};
use pulseq::integrator::{propagator, IntegratorConfig};
use pulseq::par::Parallelism;
use pulseq::qcore::{Axis, StateVector};

fn options(kind: ModelKind, eps_over_tau: f64) -> PulseOptions {
    let amps = Amplitudes::default();
    PulseOptions {
        epsilon: eps_over_tau * amps.tau_op(kind),
        ..PulseOptions::default_for(kind, &amps)
    }
}

/// Propagator of the ε → 0 schedule, by RK4.
fn sharp_propagator(program: &GateProgram, dt: f64) -> pulseq::qcore::Operator {
    let h = program.ideal_hamiltonian().unwrap();
    propagator(
        &h,
        0.0,
        program.duration(),
        &IntegratorConfig::with_dt(dt),
        Parallelism::Parallel,
    )
    .unwrap()
}

#[test]
fn cnot_in_both_models_matches_target_in_sharp_limit() {
    let amps = Amplitudes::default();
    let params = solve_coupling(1, 3).unwrap();
    let programs = [
        ideal_cnot_program(0, 1, 2, amps, options(ModelKind::Ideal, 0.01)).unwrap(),
        charge_cnot_program(0, 1, 2, params, amps, options(ModelKind::Charge, 0.01)).unwrap(),
    ];
    for p in &programs {
        assert!(p.reference_unitary.distance_up_to_phase(&p.spec.target) < 1e-9);
        let u = sharp_propagator(p, 2e-3);
        assert!(
            u.distance_up_to_phase(&p.spec.target) < 1e-6,
            "{}",
            p.kind()
        );
        assert!(u.unitarity_error() < 1e-9);
    }
}

#[test]
fn reversed_cnot_on_three_qubits() {
    let amps = Amplitudes::default();
    let params = solve_coupling(1, 3).unwrap();
    let p = charge_cnot_program(2, 0, 3, params, amps, options(ModelKind::Charge, 0.01)).unwrap();
    assert!(p.spec.target.distance(&cnot_matrix(2, 0, 3).unwrap()) < 1e-15);
    let u = sharp_propagator(&p, 2e-3);
    assert!(u.distance_up_to_phase(&p.spec.target) < 1e-6);
}

#[test]
fn cpf_with_other_couplings() {
    let amps = Amplitudes::default();
    for (m, n) in [(1, 2), (2, 3), (1, 5)] {
        let params = solve_coupling(m, n).unwrap();
        let p = cpf_program(0, 1, 2, params, amps, options(ModelKind::Charge, 0.01)).unwrap();
        assert!(
            p.reference_unitary.distance_up_to_phase(&p.spec.target) < 1e-9,
            "({m}, {n})"
        );
    }
}

#[test]
fn hadamard_in_both_models() {
    for kind in [ModelKind::Ideal, ModelKind::Charge] {
        let p = hadamard_program(1, 2, kind, Amplitudes::default(), options(kind, 0.01)).unwrap();
        let u = sharp_propagator(&p, 1e-3);
        assert!(u.distance_up_to_phase(&p.spec.target) < 1e-7, "{kind}");
    }
}

#[test]
fn sweep_is_identical_sequential_and_parallel() {
    let amps = Amplitudes::default();
    let p = charge_cnot_program(
        0,
        1,
        2,
        solve_coupling(1, 3).unwrap(),
        amps,
        options(ModelKind::Charge, 0.5),
    )
    .unwrap();
    let psi = StateVector::from_bits("11").unwrap();
    let grid = [0.5, 0.7, 1.0, 1.5, 2.0, 3.0];
    let opts = SweepOptions {
        perturbative: false,
        ..SweepOptions::default()
    };
    let a = sweep_rise_time(&p, &psi, &grid, &opts, Parallelism::Sequential).unwrap();
    let b = sweep_rise_time(&p, &psi, &grid, &opts, Parallelism::Parallel).unwrap();
    assert_eq!(a, b);
    assert!(a.monotone);
    assert!(a
        .points
        .windows(2)
        .all(|w| w[1].success <= w[0].success + 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exchange_rotations_compile(gamma in 0.05f64..PI) {
        let p = u2b_program(0, 1, 2, gamma, Amplitudes::default(), options(ModelKind::Ideal, 0.01)).unwrap();
        let u = sharp_propagator(&p, 1e-3);
        prop_assert!(u.distance_up_to_phase(&p.spec.target) < 1e-7);
    }

    #[test]
    fn single_qubit_rotations_compile(alpha in -FRAC_PI_2..FRAC_PI_2, z in any::<bool>(), charge in any::<bool>()) {
        prop_assume!(alpha.abs() > 1e-3);
        let kind = if charge { ModelKind::Charge } else { ModelKind::Ideal };
        let axis = if z { Axis::Z } else { Axis::X };
        let p = rotation_program(axis, 0, alpha, 1, kind, Amplitudes::default(), options(kind, 0.01)).unwrap();
        prop_assert!(p.reference_unitary.distance_up_to_phase(&p.spec.target) < 1e-9);
        let u = sharp_propagator(&p, 1e-3);
        prop_assert!(u.distance_up_to_phase(&p.spec.target) < 1e-7);
    }

    #[test]
    fn smooth_cnot_stays_unitary(x in 0.05f64..1.0) {
        let p = ideal_cnot_program(0, 1, 2, Amplitudes::default(), options(ModelKind::Ideal, x)).unwrap();
        let h = p.hamiltonian().unwrap();
        let cfg = IntegratorConfig::for_schedule(&p.schedule);
        let u = propagator(&h, 0.0, p.duration(), &cfg, Parallelism::Parallel).unwrap();
        prop_assert!(u.unitarity_error() < 1e-9);
    }
}
