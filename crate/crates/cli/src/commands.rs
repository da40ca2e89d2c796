//! The five subcommands. Each writes its files plus `manifest.json` into the
//! output directory.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use pulseq::analysis::{
    linear_ramp_h1_closed_form, linear_ramp_h1_single_count, linear_ramp_hamiltonian, magnus_terms,
    relative_deviation, sweep_rise_time, timescale_report, MagnusTerms, QuadratureConfig,
    SweepOptions,
};
use pulseq::gatecomp::{
    charge_cnot_program, cpf_program, hadamard_program, ideal_cnot_program, u2b_program,
    u_ph_program, GateProgram, ModelKind,
};
use pulseq::hamiltonian::{ControlledHamiltonian, Model};
use pulseq::integrator::{evolve, fmt_sci, IntegratorConfig};
use pulseq::par::Parallelism;
use pulseq::pulse::Schedule;
use pulseq::qcore::{basis_label, Operator};

use crate::config::{ExperimentConfig, GateName, MagnusSource, MagnusWindow};
use crate::error::CliError;

const MANIFEST_FORMAT: &str = "pulseq-manifest/1";
/// Trajectory rows aimed for when no record stride is configured.
const TARGET_ROWS: usize = 2000;

pub struct Run {
    pub cfg: ExperimentConfig,
    pub out: PathBuf,
    pub dt: Option<f64>,
    pub mode: Parallelism,
}

impl Run {
    fn file(&self, name: &str) -> Result<BufWriter<File>, CliError> {
        fs::create_dir_all(&self.out)?;
        Ok(BufWriter::new(File::create(self.out.join(name))?))
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let mut w = self.file(name)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn manifest(
        &self,
        command: &str,
        derived: Value,
        mut outputs: Vec<&str>,
    ) -> Result<(), CliError> {
        outputs.push("manifest.json");
        let manifest = json!({
            "format": MANIFEST_FORMAT,
            "command": command,
            "config": self.cfg,
            "derived": derived,
            "outputs": outputs,
        });
        self.write_json("manifest.json", &manifest)
    }

    fn dt_override(&self) -> Option<f64> {
        self.dt.or(self.cfg.integrator.dt)
    }

    fn integrator(&self, schedule: &Schedule) -> Result<IntegratorConfig, CliError> {
        let mut ic = self.dt_override().map_or_else(
            || IntegratorConfig::for_schedule(schedule),
            IntegratorConfig::with_dt,
        );
        ic.renormalize_every = self.cfg.integrator.renormalize_every;
        let steps = (schedule.total_duration / ic.dt).ceil() as usize;
        ic.record_stride = self
            .cfg
            .integrator
            .record_stride
            .unwrap_or_else(|| (steps / TARGET_ROWS).max(1));
        ic.validate()?;
        for w in ic.resolution_warnings(schedule) {
            log::warn!("{w}");
        }
        Ok(ic)
    }
}

pub fn build_program(cfg: &ExperimentConfig, kind: ModelKind) -> Result<GateProgram, CliError> {
    let gate = cfg
        .experiment
        .gate
        .ok_or_else(|| CliError::Config("experiment.gate: required".into()))?;
    let (amps, n) = (cfg.amplitudes, cfg.qubits);
    let opts = cfg.pulse_options(kind)?;
    let ops = &cfg.experiment.operands;
    let pair = || match ops.as_slice() {
        [i, j] if i != j => Ok((*i, *j)),
        _ => Err(CliError::Config(
            "experiment.operands: need two distinct qubits".into(),
        )),
    };
    let only = |want: ModelKind| {
        if kind == want {
            Ok(())
        } else {
            Err(CliError::Config(format!(
                "experiment.gate: {gate:?} is only compiled for the {want} model"
            )))
        }
    };
    let program = match gate {
        GateName::Cnot => {
            let (i, j) = pair()?;
            match kind {
                ModelKind::Ideal => ideal_cnot_program(i, j, n, amps, opts)?,
                ModelKind::Charge => {
                    charge_cnot_program(i, j, n, cfg.coupling_params()?, amps, opts)?
                }
            }
        }
        GateName::Cpf => {
            only(ModelKind::Charge)?;
            let (i, j) = pair()?;
            cpf_program(i, j, n, cfg.coupling_params()?, amps, opts)?
        }
        GateName::UPh => {
            only(ModelKind::Charge)?;
            let (i, j) = pair()?;
            u_ph_program(i, j, n, cfg.coupling_params()?, amps, opts)?
        }
        GateName::U2b => {
            only(ModelKind::Ideal)?;
            let (i, j) = pair()?;
            let gamma = cfg
                .experiment
                .angle
                .ok_or_else(|| CliError::Config("experiment.angle: required for u_2b".into()))?;
            u2b_program(i, j, n, gamma, amps, opts)?
        }
        GateName::Hadamard => {
            let q = ops.first().copied().unwrap_or(0);
            hadamard_program(q, n, kind, amps, opts)?
        }
    };
    Ok(program)
}

/// Hamiltonian and schedule for `simulate`: either the compiled gate or the
/// explicit schedule.
fn simulation_target(
    cfg: &ExperimentConfig,
) -> Result<(ControlledHamiltonian, Option<GateProgram>), CliError> {
    if let Some(schedule) = &cfg.schedule {
        let mut schedule = schedule.clone();
        schedule.validate()?;
        let model = match cfg.model {
            ModelKind::Ideal => Model::ideal(cfg.qubits),
            ModelKind::Charge => {
                Model::charge(cfg.qubits, cfg.coupling_params()?.e_l(cfg.amplitudes.e_j))
            }
        };
        return Ok((model.hamiltonian(&schedule)?, None));
    }
    let program = build_program(cfg, cfg.model)?;
    Ok((program.hamiltonian()?, Some(program)))
}

fn coupling_json(cfg: &ExperimentConfig, kind: ModelKind) -> Result<Value, CliError> {
    if kind != ModelKind::Charge {
        return Ok(Value::Null);
    }
    let p = cfg.coupling_params()?;
    Ok(json!({
        "m": p.m,
        "n": p.n,
        "ratio": p.ratio,
        "tau": p.tau,
        "e_l": p.e_l(cfg.amplitudes.e_j),
        "duration": p.duration(cfg.amplitudes.e_j),
    }))
}

pub fn simulate(run: &Run) -> Result<(), CliError> {
    let cfg = &run.cfg;
    let (h, program) = simulation_target(cfg)?;
    let schedule = h.schedule().clone();
    let ic = run.integrator(&schedule)?;
    let psi = cfg.input_state()?;
    let traj = evolve(&psi, &h, 0.0, schedule.total_duration, &ic)?;

    let mut w = run.file("trajectory.csv")?;
    traj.write_csv(&mut w)?;
    w.flush()?;
    write_pulse_table(&mut run.file("pulses.csv")?, &schedule, &traj.times)?;

    let probs = traj.final_state.probabilities();
    let fidelity = match &program {
        Some(p) => {
            Some(pulseq::analysis::gate_fidelity(&psi, &p.spec.target, &traj.final_state)?.fidelity)
        }
        None => None,
    };
    let labels: Vec<String> = (0..probs.len())
        .map(|m| format!("p_{}", basis_label(m, cfg.qubits)))
        .collect();
    let line: Vec<String> = labels
        .iter()
        .zip(&probs)
        .map(|(l, p)| format!("{l} = {p:.9}"))
        .collect();
    println!("final {}", line.join(", "));
    if let Some(f) = fidelity {
        println!("fidelity {f:.12}");
    }
    let derived = json!({
        "tau_op": cfg.amplitudes.tau_op(cfg.model),
        "epsilon": program.as_ref().map(|p| p.epsilon()),
        "duration": schedule.total_duration,
        "coupling": coupling_json(cfg, cfg.model)?,
        "dt": ic.dt,
        "record_stride": ic.record_stride,
        "steps": traj.steps,
        "max_norm_drift": traj.max_norm_drift,
        "final_probabilities": labels.iter().zip(&probs).map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "fidelity": fidelity,
    });
    run.manifest("simulate", derived, vec!["trajectory.csv", "pulses.csv"])
}

/// Control values on the trajectory's time grid.
fn write_pulse_table<W: Write>(
    w: &mut W,
    schedule: &Schedule,
    times: &[f64],
) -> Result<(), CliError> {
    let header: Vec<String> = schedule.controls().map(|c| c.to_string()).collect();
    if header.is_empty() {
        writeln!(w, "t")?;
    } else {
        writeln!(w, "t,{}", header.join(","))?;
    }
    let mut values = vec![0.0; header.len()];
    for &t in times {
        schedule.values_into(t, &mut values);
        let mut row = fmt_sci(t);
        for v in &values {
            row.push(',');
            row.push_str(&fmt_sci(*v));
        }
        writeln!(w, "{row}")?;
    }
    w.flush()?;
    Ok(())
}

fn segments_json(program: &GateProgram) -> Value {
    let segments: Vec<Value> = program
        .segments
        .iter()
        .zip(program.segment_windows())
        .map(|(s, (t_a, t_b))| {
            let drives: Vec<Value> =
                s.drives.iter().map(|d| json!({"control": d.control, "height": d.height})).collect();
            json!({"label": s.label, "width": s.width, "angle": s.angle, "t_a": t_a, "t_b": t_b, "drives": drives})
        })
        .collect();
    Value::Array(segments)
}

pub fn compile(run: &Run) -> Result<(), CliError> {
    let cfg = &run.cfg;
    let program = build_program(cfg, cfg.model)?;
    run.write_json("schedule.json", &program.schedule)?;

    let mut w = run.file("timing.csv")?;
    writeln!(w, "segment,parameter,t_a,t_b,angle")?;
    for row in program.timing_table() {
        writeln!(
            w,
            "{},{},{},{},{}",
            row.segment,
            row.parameter,
            fmt_sci(row.t_a),
            fmt_sci(row.t_b),
            fmt_sci(row.angle)
        )?;
        println!(
            "{:<8} {:<6} {:>14.6} {:>14.6}  angle {:.6}",
            row.segment, row.parameter, row.t_a, row.t_b, row.angle
        );
    }
    w.flush()?;
    println!(
        "{} segments, duration {:.6}",
        program.segments.len(),
        program.duration()
    );

    let derived = json!({
        "gate": program.spec.name,
        "tau_op": program.tau_op(),
        "epsilon": program.epsilon(),
        "duration": program.duration(),
        "coupling": coupling_json(cfg, cfg.model)?,
        "segments": segments_json(&program),
        "reference_error": program.reference_unitary.distance_up_to_phase(&program.spec.target),
    });
    run.manifest("compile", derived, vec!["schedule.json", "timing.csv"])
}

pub fn sweep(run: &Run) -> Result<(), CliError> {
    let cfg = &run.cfg;
    let psi = cfg.input_state()?;
    let opts = SweepOptions {
        dt: run.dt_override(),
        perturbative: cfg.experiment.perturbative,
        ..SweepOptions::default()
    };
    let mut fits = serde_json::Map::new();
    let mut outputs = Vec::new();
    for kind in cfg.sweep_models() {
        let program = build_program(cfg, kind)?;
        let record = sweep_rise_time(
            &program,
            &psi,
            &cfg.experiment.epsilon_grid,
            &opts,
            run.mode,
        )?;
        let name = format!("sweep_{kind}.csv");
        let mut w = run.file(&name)?;
        record.write_csv(&mut w)?;
        w.flush()?;
        outputs.push(name);
        println!(
            "{kind}: c = {:.6e}, p = {:.4}, residual = {:.3e}, min success = {:.9}",
            record.fit.c,
            record.fit.p,
            record.fit.residual,
            record
                .points
                .iter()
                .map(|p| p.success)
                .fold(f64::INFINITY, f64::min)
        );
        fits.insert(
            kind.to_string(),
            json!({
                "c": record.fit.c,
                "p": record.fit.p,
                "residual": record.fit.residual,
                "c_points": record.fit.c_points,
                "p_points": record.fit.p_points,
                "tau_op": record.tau_op,
                "max_rise": record.max_rise,
                "monotone": record.monotone,
            }),
        );
    }
    run.write_json("fit.json", &fits)?;
    outputs.push("fit.json".into());
    let derived = json!({ "dt": opts.dt, "points": cfg.experiment.epsilon_grid.len() });
    run.manifest(
        "sweep",
        derived,
        outputs.iter().map(String::as_str).collect(),
    )
}

/// `{"re": [[…]], "im": [[…]]}`.
fn operator_json(op: &Operator) -> Value {
    let d = op.dim();
    let table = |f: fn(pulseq::Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..d)
            .map(|r| (0..d).map(|c| f(op.get(r, c))).collect())
            .collect()
    };
    json!({"re": table(|z| z.re), "im": table(|z| z.im)})
}

fn closed_form_json(terms: &MagnusTerms, e_j: f64, e_l: f64, epsilon: f64) -> Value {
    let quoted = linear_ramp_h1_closed_form(e_j, e_l, epsilon);
    let single = linear_ramp_h1_single_count(e_j, e_l, epsilon);
    json!({
        "epsilon": epsilon,
        "quoted": operator_json(&quoted),
        "deviation_quoted": relative_deviation(&terms.h1_bar, &quoted),
        "single_count": operator_json(&single),
        "deviation_single_count": relative_deviation(&terms.h1_bar, &single),
    })
}

pub fn magnus(run: &Run) -> Result<(), CliError> {
    let cfg = &run.cfg;
    let section = cfg
        .magnus
        .ok_or_else(|| CliError::Config("magnus: section required".into()))?;
    let opts = cfg.pulse_options(ModelKind::Charge)?;
    let eps = opts.epsilon;
    let e_j = cfg.amplitudes.e_j;
    let tol = section
        .rel_tol
        .unwrap_or(QuadratureConfig::default().rel_tol);

    let (terms, label, closed) = match section.source {
        MagnusSource::LinearRamp => {
            let e_l = cfg.coupling_params()?.e_l(e_j);
            let h = linear_ramp_hamiltonian(e_j, e_l, eps)?;
            let q = QuadratureConfig {
                rel_tol: tol,
                ..QuadratureConfig::default()
            };
            let terms = magnus_terms(&h, 0.0, 2.0 * eps, &q)?;
            let closed = closed_form_json(&terms, e_j, e_l, eps);
            (terms, "linear_ramp".to_string(), closed)
        }
        MagnusSource::Segment => {
            let program = build_program(cfg, cfg.model)?;
            let windows = program.segment_windows();
            let k = section.segment;
            let (t_a, t_b) = *windows.get(k).ok_or_else(|| {
                CliError::Config(format!(
                    "magnus.segment: {k} out of range ({} segments)",
                    windows.len()
                ))
            })?;
            let eps = program.epsilon();
            let margin = program.options.idle_margin * eps;
            let (t0, t1) = match section.window {
                MagnusWindow::Ramp => (t_a - eps, t_a + eps),
                MagnusWindow::Plateau => (t_a + margin, t_b - margin),
                MagnusWindow::Full => (t_a - 0.5 * margin, t_b + 0.5 * margin),
            };
            if !(t1 > t0) {
                return Err(CliError::Config(
                    "magnus.window: segment too short for a plateau".into(),
                ));
            }
            let h = program.hamiltonian()?;
            let q = QuadratureConfig {
                rel_tol: tol,
                ..QuadratureConfig::for_epsilon(eps, t1 - t0)
            };
            let terms = magnus_terms(&h, t0, t1, &q)?;
            let seg = &program.segments[k];
            let closed = match (&program.coupling, section.window) {
                (Some(p), MagnusWindow::Ramp)
                    if seg.label.starts_with("Uph") && cfg.qubits == 2 =>
                {
                    closed_form_json(&terms, e_j, p.e_l(e_j), eps)
                }
                _ => Value::Null,
            };
            (terms, seg.label.clone(), closed)
        }
    };
    println!("H̄⁽⁰⁾ max |entry| = {:.6e}", terms.h0_bar.max_abs());
    println!("H̄⁽¹⁾ max |entry| = {:.6e}", terms.h1_bar.max_abs());
    if let Some(d) = closed.get("deviation_quoted").and_then(Value::as_f64) {
        println!("relative deviation from the quoted linear-ramp form = {d:.6e}");
    }
    let report = json!({
        "source": section.source,
        "segment": label,
        "window": [terms.t0, terms.t1],
        "levels": terms.levels,
        "h0_bar": operator_json(&terms.h0_bar),
        "h1_bar": operator_json(&terms.h1_bar),
        "h1_max": terms.h1_bar.max_abs(),
        "closed_form": closed,
    });
    run.write_json("magnus.json", &report)?;
    run.manifest("magnus", json!({ "rel_tol": tol }), vec!["magnus.json"])
}

pub fn report(run: &Run) -> Result<(), CliError> {
    let cfg = &run.cfg;
    let ts = timescale_report(cfg.report.e_j_uev)?;
    let mut text = ts.to_string();
    let coupling = coupling_json(cfg, ModelKind::Charge)?;
    if let Some(p) = coupling.as_object() {
        text += &format!(
            "coupling (m, n) = ({}, {}): E_L/E_J = {:.9}, τ = {:.9} ħ/E_J ({:.4} ps)\n",
            p["m"],
            p["n"],
            p["ratio"].as_f64().unwrap_or(f64::NAN),
            p["tau"].as_f64().unwrap_or(f64::NAN),
            p["tau"].as_f64().unwrap_or(f64::NAN) * ts.hbar_over_e_j_ps,
        );
    }
    let gate = match cfg.experiment.gate {
        Some(_) => {
            let program = build_program(cfg, cfg.model)?;
            let d = program.duration() * cfg.amplitudes.e_j;
            text += &format!(
                "{} ({} model): {} segments, duration {:.6} ħ/E_J ({:.4} ps)\n",
                program.spec.name,
                cfg.model,
                program.segments.len(),
                d,
                d * ts.hbar_over_e_j_ps
            );
            json!({"name": program.spec.name, "segments": segments_json(&program), "duration": program.duration()})
        }
        None => Value::Null,
    };
    print!("{text}");
    let mut w = run.file("report.txt")?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    run.write_json(
        "report.json",
        &json!({"timescale": ts, "coupling": coupling, "gate": gate}),
    )?;
    run.manifest("report", Value::Null, vec!["report.txt", "report.json"])
}

/// Output directory: `--out`, then `output.dir`, then `./out`.
pub fn resolve_out(flag: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}
