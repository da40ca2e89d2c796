//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::FRAC_PI_4;
use std::process::ExitCode;

use pulseq::analysis::{
    linear_ramp_h1_closed_form, linear_ramp_h1_single_count, linear_ramp_hamiltonian, loglog_slope,
    magnus_terms, relative_deviation, simulate_point, sweep_rise_time, QuadratureConfig,
    SweepOptions,
};
use pulseq::gatecomp::{
    charge_cnot_program, ideal_cnot_program, solve_coupling, u_ph_analytic, u_ph_program,
    Amplitudes, CouplingParams, GateProgram, ModelKind, PulseOptions,
};
use pulseq::hamiltonian::{ry_frame, transformed_hph, ConstantHamiltonian};
use pulseq::integrator::{evolve, evolve_final, propagator, reference_expm, IntegratorConfig};
use pulseq::par::Parallelism;
use pulseq::qcore::{embed_pauli, Axis, StateVector};

const SWEEP_GRID: [f64; 8] = [0.25, 0.35, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0];
const LADDER: [f64; 4] = [0.05, 0.1, 0.2, 0.4];

struct Report {
    failures: usize,
}

impl Report {
    fn check(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!(
            "{} criterion {id}: {name} ({detail})",
            if ok { "PASS" } else { "FAIL" }
        );
    }
}

fn note(text: String) {
    println!("     {text}");
}

fn params() -> CouplingParams {
    solve_coupling(1, 3).expect("(1,3) is solvable")
}

fn charge_cnot() -> GateProgram {
    let amps = Amplitudes::default();
    let opts = PulseOptions::default_for(ModelKind::Charge, &amps);
    charge_cnot_program(0, 1, 2, params(), amps, opts).expect("charge CNOT compiles")
}

fn ideal_cnot() -> GateProgram {
    let amps = Amplitudes::default();
    let opts = PulseOptions {
        idle_margin: 10.0,
        ..PulseOptions::default_for(ModelKind::Ideal, &amps)
    };
    ideal_cnot_program(0, 1, 2, amps, opts).expect("ideal CNOT compiles")
}

/// Final populations from a basis input.
fn final_populations(program: &GateProgram, bits: &str) -> Vec<f64> {
    let psi = StateVector::from_bits(bits).unwrap();
    let h = program.hamiltonian().unwrap();
    let cfg = IntegratorConfig::for_schedule(&program.schedule);
    evolve_final(&psi, &h, 0.0, program.duration(), &cfg)
        .unwrap()
        .0
        .probabilities()
}

fn cnot_image(bits: &str) -> String {
    let b: Vec<char> = bits.chars().collect();
    let t = if b[0] == '1' {
        if b[1] == '0' {
            '1'
        } else {
            '0'
        }
    } else {
        b[1]
    };
    format!("{}{}", b[0], t)
}

fn index_of(bits: &str) -> usize {
    usize::from_str_radix(bits, 2).unwrap()
}

fn criterion_1(r: &mut Report) {
    let program = charge_cnot();
    let mut worst = f64::INFINITY;
    let mut parts = Vec::new();
    for bits in ["00", "01", "10", "11"] {
        let out = cnot_image(bits);
        let p = final_populations(&program, bits)[index_of(&out)];
        worst = worst.min(p);
        parts.push(format!("|{bits}⟩→|{out}⟩ {p:.9}"));
    }
    r.check(
        1,
        "charge CNOT maps basis states",
        worst >= 0.999,
        parts.join(", "),
    );
}

fn criterion_2(r: &mut Report) {
    let program = ideal_cnot();
    let probs = final_populations(&program, "11");
    let p10 = probs[index_of("10")];
    r.check(
        2,
        "ideal CNOT on |11⟩",
        p10 >= 0.999,
        format!("p_10 = {p10:.9}"),
    );
}

fn criterion_3(r: &mut Report) {
    let p = params();
    let ratio_err = (p.ratio - 143f64.sqrt()).abs();
    let tau_err = (p.tau - FRAC_PI_4 * 143f64.sqrt()).abs();
    r.check(
        3,
        "coupling solver at (1,3)",
        ratio_err <= 1e-12 && tau_err <= 1e-12,
        format!("ratio = {:.12}, τ = {:.12}", p.ratio, p.tau),
    );
}

fn criterion_4(r: &mut Report) {
    let opts = SweepOptions {
        perturbative: false,
        ..SweepOptions::default()
    };
    let psi = StateVector::from_bits("11").unwrap();
    let charge = sweep_rise_time(
        &charge_cnot(),
        &psi,
        &SWEEP_GRID,
        &opts,
        Parallelism::Parallel,
    )
    .unwrap();
    let ideal = sweep_rise_time(
        &ideal_cnot(),
        &psi,
        &SWEEP_GRID,
        &opts,
        Parallelism::Parallel,
    )
    .unwrap();
    for p in &charge.points {
        note(format!(
            "charge ε/τ_op = {:<5} 1 − success = {:.3e}",
            p.epsilon_over_tau_op,
            1.0 - p.success
        ));
    }
    let fit = charge.fit;
    let worst_ideal = ideal
        .points
        .iter()
        .map(|p| p.success)
        .fold(f64::INFINITY, f64::min);
    note(format!(
        "ideal min success = {worst_ideal:.9}, charge monotone = {}",
        charge.monotone
    ));
    let ok =
        (fit.p - 2.0).abs() <= 0.2 && (0.005..=0.15).contains(&fit.c) && worst_ideal >= 1.0 - 1e-4;
    r.check(
        4,
        "quadratic error law",
        ok,
        format!("p = {:.3}, c = {:.3e}", fit.p, fit.c),
    );
}

fn criterion_5(r: &mut Report) {
    let (e_j, e_l, eps) = (1.0, 143f64.sqrt(), 0.05);
    let h = linear_ramp_hamiltonian(e_j, e_l, eps).unwrap();
    let terms = magnus_terms(&h, 0.0, 2.0 * eps, &QuadratureConfig::default()).unwrap();
    let quoted = relative_deviation(&terms.h1_bar, &linear_ramp_h1_closed_form(e_j, e_l, eps));
    let single = relative_deviation(&terms.h1_bar, &linear_ramp_h1_single_count(e_j, e_l, eps));
    note(format!(
        "quadrature vs −E_J³ε/30E_L form: {single:.2e} relative"
    ));

    let h0 =
        &embed_pauli(Axis::X, 0, 2).unwrap() + &embed_pauli(Axis::Z, 1, 2).unwrap().scale_real(0.3);
    let constant = magnus_terms(
        &ConstantHamiltonian(h0),
        0.0,
        2.5,
        &QuadratureConfig::default(),
    )
    .unwrap();
    let c_max = constant.h1_bar.max_abs();
    r.check(
        5,
        "Magnus closed form on the linear ramp",
        quoted <= 1e-4 && c_max <= 1e-12,
        format!("deviation from −E_J³ε/15E_L = {quoted:.3e}, constant-H H̄⁽¹⁾ = {c_max:.1e}"),
    );
}

/// `(|F_sim − F_pert|, 1 − F_sim)` along the ladder.
fn ladder(program: &GateProgram) -> Vec<(f64, f64)> {
    let psi = StateVector::from_bits("11").unwrap();
    LADDER
        .iter()
        .map(|x| {
            let p = program.with_epsilon(x * program.tau_op()).unwrap();
            let pt = simulate_point(&p, &psi, &SweepOptions::default()).unwrap();
            (
                (pt.fidelity - pt.fidelity_perturbative.unwrap()).abs(),
                1.0 - pt.fidelity,
            )
        })
        .collect()
}

fn criterion_6(r: &mut Report) {
    let amps = Amplitudes::default();
    let opts = PulseOptions::default_for(ModelKind::Charge, &amps);
    let uph = u_ph_program(0, 1, 2, params(), amps, opts).unwrap();
    let rows = ladder(&uph);
    let (gap, inf): (Vec<f64>, Vec<f64>) = rows.iter().copied().unzip();
    let first = gap[0] / inf[0];
    let last = gap[3] / inf[3];
    let gain = last / first;
    let slopes = (
        loglog_slope(&LADDER, &gap).unwrap_or(f64::NAN),
        loglog_slope(&LADDER, &inf).unwrap_or(f64::NAN),
    );
    for (x, (g, i)) in LADDER.iter().zip(&rows) {
        note(format!(
            "U_ph ε/τ_op = {x:<5} 1 − F = {i:.3e}  |F − F_pert| = {g:.3e}"
        ));
    }
    for (x, (g, i)) in LADDER.iter().zip(ladder(&charge_cnot())) {
        note(format!(
            "CNOT ε/τ_op = {x:<5} 1 − F = {i:.3e}  |F − F_pert| = {g:.3e}"
        ));
    }
    r.check(
        6,
        "perturbative fidelity ladder",
        gain >= 10.0,
        format!(
            "ratio gain = {gain:.1}, slopes {:.2} vs {:.2}",
            slopes.0, slopes.1
        ),
    );
}

fn criterion_7(r: &mut Report) {
    let h = &embed_pauli(Axis::X, 0, 2).unwrap().scale_real(0.9)
        + &(&embed_pauli(Axis::Z, 0, 2).unwrap() * &embed_pauli(Axis::Y, 1, 2).unwrap())
            .scale_real(0.4);
    let t = 3.0;
    let psi = StateVector::from_bits("01").unwrap();
    let exact = reference_expm(&h, t).unwrap().apply(&psi).unwrap();
    let dts = [0.2, 0.1, 0.05, 0.025];
    let errs: Vec<f64> = dts
        .iter()
        .map(|&dt| {
            let (out, _) = evolve_final(
                &psi,
                &ConstantHamiltonian(h.clone()),
                0.0,
                t,
                &IntegratorConfig::with_dt(dt),
            )
            .unwrap();
            out.amplitudes()
                .iter()
                .zip(&exact)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let order = loglog_slope(&dts, &errs).unwrap();

    let program = charge_cnot();
    let hc = program.hamiltonian().unwrap();
    let cfg = IntegratorConfig::for_schedule(&program.schedule);
    let traj = evolve(
        &StateVector::from_bits("11").unwrap(),
        &hc,
        0.0,
        program.duration(),
        &cfg,
    )
    .unwrap();
    let u = propagator(&hc, 0.0, program.duration(), &cfg, Parallelism::Parallel).unwrap();
    let unitarity = u.unitarity_error();
    let drift = traj.max_norm_drift;
    r.check(
        7,
        "integrator order and unitarity",
        (order - 4.0).abs() <= 0.3 && drift <= 1e-9 && unitarity <= 1e-8,
        format!("order = {order:.3}, norm drift = {drift:.1e}, unitarity = {unitarity:.1e}"),
    );
}

fn chain_distance(p: &CouplingParams) -> f64 {
    let h = transformed_hph(1.0, p.ratio).unwrap();
    let r = ry_frame();
    let u = &(&r * &reference_expm(&h, p.tau).unwrap()) * &r.adjoint();
    u.distance_up_to_phase(&u_ph_analytic(p.phi))
}

fn criterion_8(r: &mut Report) {
    let d = chain_distance(&params());
    let even = chain_distance(&solve_coupling(1, 2).unwrap());
    note(format!("same identity at (m,n) = (1,2): {even:.1e}"));
    r.check(
        8,
        "analytic chain at (1,3)",
        d <= 1e-9,
        format!("max-norm distance = {d:.3e}"),
    );
}

fn main() -> ExitCode {
    let mut r = Report { failures: 0 };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    println!("{} of 8 criteria failed", r.failures);
    if r.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
