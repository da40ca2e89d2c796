//! Compilation of gates into pulse schedules.
//!
//! A program is an ordered list of segments. Each segment switches a fixed
//! set of controls on together for one width; segments never overlap and
//! are separated by `idle_margin · ε`. Because the layout depends on ε, the
//! segment list is kept and the schedule is rebuilt by [`GateProgram::with_epsilon`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::coupling::{solve_coupling, CouplingParams, DEFAULT_M, DEFAULT_N};
use super::matrices::{cnot_matrix, cpf_matrix, embed_pair, hadamard_matrix, u2b};
use crate::hamiltonian::{ControlledHamiltonian, HamiltonianFn, Model};
use crate::integrator::reference_expm;
use crate::pulse::{ControlId, ParamSchedule, RectPulse, Schedule, DEFAULT_IDLE_MARGIN};
use crate::qcore::{check_qubit, check_register, pauli_exp, Axis, Operator};
use crate::{Error, Result};

/// Tolerance for the compile-time check of the segment product against the target.
pub const COMPILE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Ideal,
    Charge,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Ideal => "ideal",
            ModelKind::Charge => "charge",
        })
    }
}

/// Full-on control amplitudes, in units of `E_ref`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Amplitudes {
    /// Single-qubit field `B` (ideal model).
    pub b0: f64,
    /// Exchange `J` (ideal model).
    pub j0: f64,
    /// Charging energy `E_C` (charge model).
    pub e_c: f64,
    /// Josephson energy `E_J` (charge model).
    pub e_j: f64,
}

impl Default for Amplitudes {
    fn default() -> Self {
        Self {
            b0: 1.0,
            j0: 1.0,
            e_c: 2.0,
            e_j: 1.0,
        }
    }
}

impl Amplitudes {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("b0", self.b0),
            ("j0", self.j0),
            ("e_c", self.e_c),
            ("e_j", self.e_j),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "amplitude {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Single-qubit operation timescale: `ħ/B_z` or `ħ/E_C`.
    pub fn tau_op(&self, kind: ModelKind) -> f64 {
        match kind {
            ModelKind::Ideal => 1.0 / self.b0,
            ModelKind::Charge => 1.0 / self.e_c,
        }
    }

    fn base(&self, id: ControlId) -> f64 {
        match id {
            ControlId::Bx(_) | ControlId::By(_) | ControlId::Bz(_) => self.b0,
            ControlId::Exchange(..) => self.j0,
            ControlId::ChargeEnergy(_) => self.e_c,
            ControlId::Josephson(_) => self.e_j,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseOptions {
    /// Ramp width ε.
    pub epsilon: f64,
    pub idle_margin: f64,
    /// Compile negative rotations as `2π` complements instead of negative drives.
    pub nonnegative_controls: bool,
}

impl PulseOptions {
    /// ε = 10⁻³ τ_op, margin 10; non-negative controls on for the ideal model.
    pub fn default_for(kind: ModelKind, amplitudes: &Amplitudes) -> Self {
        Self {
            epsilon: 1e-3 * amplitudes.tau_op(kind),
            idle_margin: DEFAULT_IDLE_MARGIN,
            nonnegative_controls: kind == ModelKind::Ideal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.idle_margin > 0.0 && self.idle_margin.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "idle margin must be positive, got {}",
                self.idle_margin
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    pub control: ControlId,
    /// Multiplies the control's base amplitude.
    pub height: f64,
}

/// Controls held on together for `width`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub label: String,
    pub drives: Vec<Drive>,
    pub width: f64,
    /// Rotation angle realized, in the segment's own convention.
    pub angle: f64,
    /// Exact propagator of the sharp segment on the full register.
    pub unitary: Operator,
}

/// Name, target unitary and operands of a gate.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub name: String,
    pub target: Operator,
    pub operands: Vec<usize>,
}

/// One row of the human-readable timing table.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub segment: String,
    pub parameter: ControlId,
    pub t_a: f64,
    pub t_b: f64,
    pub angle: f64,
}

#[derive(Debug, Clone)]
pub struct GateProgram {
    pub spec: GateSpec,
    pub model: Model,
    pub amplitudes: Amplitudes,
    pub options: PulseOptions,
    pub coupling: Option<CouplingParams>,
    pub segments: Vec<Segment>,
    /// Product of the exact segment propagators, latest segment leftmost.
    pub reference_unitary: Operator,
    pub schedule: Schedule,
}

impl GateProgram {
    pub fn kind(&self) -> ModelKind {
        match self.model {
            Model::Ideal(_) => ModelKind::Ideal,
            Model::Charge(_) => ModelKind::Charge,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.model.n_qubits()
    }

    pub fn duration(&self) -> f64 {
        self.schedule.total_duration
    }

    pub fn tau_op(&self) -> f64 {
        self.amplitudes.tau_op(self.kind())
    }

    pub fn epsilon(&self) -> f64 {
        self.options.epsilon
    }

    /// Same segments laid out for a different ramp width.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        self.with_options(PulseOptions {
            epsilon,
            ..self.options
        })
    }

    pub fn with_options(&self, options: PulseOptions) -> Result<Self> {
        options.validate()?;
        let schedule = layout(&self.segments, &self.amplitudes, &options)?;
        Ok(Self {
            options,
            schedule,
            ..self.clone()
        })
    }

    /// The schedule in the ε → 0 limit.
    pub fn ideal_schedule(&self) -> Schedule {
        self.schedule.ideal_limit()
    }

    pub fn hamiltonian(&self) -> Result<ControlledHamiltonian> {
        self.model.hamiltonian(&self.schedule)
    }

    pub fn ideal_hamiltonian(&self) -> Result<ControlledHamiltonian> {
        self.model.hamiltonian(&self.ideal_schedule())
    }

    /// `(t_a, t_b)` of every segment under the current layout.
    pub fn segment_windows(&self) -> Vec<(f64, f64)> {
        windows(&self.segments, &self.options)
    }

    pub fn timing_table(&self) -> Vec<TimingRow> {
        self.segments
            .iter()
            .zip(self.segment_windows())
            .flat_map(|(s, (t_a, t_b))| {
                s.drives.iter().map(move |d| TimingRow {
                    segment: s.label.clone(),
                    parameter: d.control,
                    t_a,
                    t_b,
                    angle: s.angle,
                })
            })
            .collect()
    }
}

fn windows(segments: &[Segment], options: &PulseOptions) -> Vec<(f64, f64)> {
    let gap = options.idle_margin * options.epsilon;
    let mut cursor = gap;
    segments
        .iter()
        .map(|s| {
            let w = (cursor, cursor + s.width);
            cursor = w.1 + gap;
            w
        })
        .collect()
}

fn layout(
    segments: &[Segment],
    amplitudes: &Amplitudes,
    options: &PulseOptions,
) -> Result<Schedule> {
    let mut params: Vec<ParamSchedule> = Vec::new();
    let wins = windows(segments, options);
    for (s, &(t_a, t_b)) in segments.iter().zip(&wins) {
        for d in &s.drives {
            let idx = match params.iter().position(|p| p.parameter == d.control) {
                Some(i) => i,
                None => {
                    params.push(ParamSchedule::new(d.control, amplitudes.base(d.control)));
                    params.len() - 1
                }
            };
            params[idx]
                .pulses
                .push(RectPulse::new(t_a, t_b, options.epsilon, d.height)?);
        }
    }
    let total = wins
        .last()
        .map_or(2.0 * options.idle_margin * options.epsilon, |w| {
            w.1 + options.idle_margin * options.epsilon
        });
    let mut schedule = Schedule::new(params, total);
    schedule.idle_margin = options.idle_margin;
    schedule.nonnegative_controls = options.nonnegative_controls;
    schedule.validate()?;
    Ok(schedule)
}

/// Builds segment lists for one model and register.
#[derive(Debug, Clone)]
pub struct Compiler {
    model: Model,
    amplitudes: Amplitudes,
    options: PulseOptions,
    coupling: Option<CouplingParams>,
    segments: Vec<Segment>,
}

impl Compiler {
    pub fn new(
        kind: ModelKind,
        n_qubits: usize,
        amplitudes: Amplitudes,
        options: PulseOptions,
    ) -> Result<Self> {
        check_register(n_qubits)?;
        amplitudes.validate()?;
        options.validate()?;
        let model = match kind {
            ModelKind::Ideal => Model::ideal(n_qubits),
            ModelKind::Charge => {
                let p = solve_coupling(DEFAULT_M, DEFAULT_N)?;
                Model::charge(n_qubits, p.e_l(amplitudes.e_j))
            }
        };
        Ok(Self {
            model,
            amplitudes,
            options,
            coupling: None,
            segments: Vec::new(),
        })
    }

    /// Fixes the coupling used by `u_ph` segments and sets `E_L` accordingly.
    pub fn with_coupling(mut self, params: CouplingParams) -> Result<Self> {
        match self.model {
            Model::Charge(_) => {
                self.model = Model::charge(self.model.n_qubits(), params.e_l(self.amplitudes.e_j));
                self.coupling = Some(params);
                Ok(self)
            }
            Model::Ideal(_) => Err(Error::InvalidParameter(
                "couplings apply to the charge model only".into(),
            )),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self.model {
            Model::Ideal(_) => ModelKind::Ideal,
            Model::Charge(_) => ModelKind::Charge,
        }
    }

    fn n(&self) -> usize {
        self.model.n_qubits()
    }

    fn push(&mut self, label: String, drives: Vec<Drive>, width: f64, angle: f64) -> Result<()> {
        let unitary = segment_unitary(&self.model, &self.amplitudes, &drives, width)?;
        self.segments.push(Segment {
            label,
            drives,
            width,
            angle,
            unitary,
        });
        Ok(())
    }

    /// Angle actually compiled and the drive sign, honoring the
    /// non-negative-controls flag. `None` for a trivial rotation.
    fn realize(&self, alpha: f64) -> Option<(f64, f64)> {
        let a = if self.options.nonnegative_controls {
            alpha.rem_euclid(TAU)
        } else {
            alpha
        };
        if a.abs() < 1e-15 || (TAU - a).abs() < 1e-15 {
            None
        } else {
            Some((a, a.signum()))
        }
    }

    /// `exp(iα σ_x)` on qubit `q`.
    pub fn rot_x(&mut self, q: usize, alpha: f64) -> Result<&mut Self> {
        check_qubit(q, self.n())?;
        if let Some((a, sign)) = self.realize(alpha) {
            let (control, rate) = match self.kind() {
                ModelKind::Ideal => (ControlId::Bx(q), self.amplitudes.b0),
                ModelKind::Charge => (ControlId::Josephson(q), 0.5 * self.amplitudes.e_j),
            };
            self.push(
                format!("x{}", q + 1),
                vec![Drive {
                    control,
                    height: sign,
                }],
                a.abs() / rate,
                a,
            )?;
        }
        Ok(self)
    }

    /// `exp(iα σ_z)` on qubit `q`.
    pub fn rot_z(&mut self, q: usize, alpha: f64) -> Result<&mut Self> {
        check_qubit(q, self.n())?;
        if let Some((a, sign)) = self.realize(alpha) {
            let (control, rate) = match self.kind() {
                ModelKind::Ideal => (ControlId::Bz(q), self.amplitudes.b0),
                ModelKind::Charge => (ControlId::ChargeEnergy(q), 0.5 * self.amplitudes.e_c),
            };
            self.push(
                format!("z{}", q + 1),
                vec![Drive {
                    control,
                    height: sign,
                }],
                a.abs() / rate,
                a,
            )?;
        }
        Ok(self)
    }

    /// Hadamard on `q`, up to a global phase.
    ///
    /// Ideal model: one pulse along `(1, 0, 1)/√2` of angle `π/2`, giving `i·H`.
    /// Charge model: `exp(iπσ_z/4) exp(iπσ_x/4) exp(iπσ_z/4)`.
    pub fn hadamard(&mut self, q: usize) -> Result<&mut Self> {
        check_qubit(q, self.n())?;
        match self.kind() {
            ModelKind::Ideal => {
                let drives = vec![
                    Drive {
                        control: ControlId::Bx(q),
                        height: FRAC_1_SQRT_2,
                    },
                    Drive {
                        control: ControlId::Bz(q),
                        height: FRAC_1_SQRT_2,
                    },
                ];
                self.push(
                    format!("H{}", q + 1),
                    drives,
                    FRAC_PI_2 / self.amplitudes.b0,
                    FRAC_PI_2,
                )?;
            }
            ModelKind::Charge => {
                self.rot_z(q, FRAC_PI_4)?;
                self.rot_x(q, FRAC_PI_4)?;
                self.rot_z(q, FRAC_PI_4)?;
            }
        }
        Ok(self)
    }

    /// Exchange rotation `U_2b(γ)` on `(i, j)` (ideal model).
    pub fn u2b(&mut self, i: usize, j: usize, gamma: f64) -> Result<&mut Self> {
        if self.kind() != ModelKind::Ideal {
            return Err(Error::UnsupportedControl {
                control: "J".into(),
                model: self.model.name(),
            });
        }
        check_qubit(i, self.n())?;
        check_qubit(j, self.n())?;
        if let Some((g, sign)) = self.realize(gamma) {
            let drives = vec![Drive {
                control: ControlId::exchange(i, j),
                height: sign,
            }];
            let label = format!("U2b{}{}", i + 1, j + 1);
            self.push(label, drives, g.abs() / self.amplitudes.j0, g)?;
        }
        Ok(self)
    }

    /// Joint Josephson pulse on `(i, j)` for the solved coupling time (charge model).
    pub fn u_ph(&mut self, i: usize, j: usize) -> Result<&mut Self> {
        let params = self
            .coupling
            .ok_or_else(|| Error::Compilation("u_ph needs coupling parameters".into()))?;
        if self.kind() != ModelKind::Charge {
            return Err(Error::UnsupportedControl {
                control: "E_J".into(),
                model: self.model.name(),
            });
        }
        check_qubit(i, self.n())?;
        check_qubit(j, self.n())?;
        let drives = vec![
            Drive {
                control: ControlId::Josephson(i),
                height: 1.0,
            },
            Drive {
                control: ControlId::Josephson(j),
                height: 1.0,
            },
        ];
        let label = format!("Uph{}{}", i + 1, j + 1);
        self.push(
            label,
            drives,
            params.duration(self.amplitudes.e_j),
            params.phi,
        )?;
        Ok(self)
    }

    /// Finishes the program and checks the segment product against `spec.target`.
    pub fn finish(self, spec: GateSpec) -> Result<GateProgram> {
        let mut reference = Operator::identity(self.n())?;
        for s in &self.segments {
            reference = &s.unitary * &reference;
        }
        let err = reference.distance_up_to_phase(&spec.target);
        if err > COMPILE_TOLERANCE {
            return Err(Error::Compilation(format!(
                "{} sequence misses its target by {err:e}",
                spec.name
            )));
        }
        let schedule = layout(&self.segments, &self.amplitudes, &self.options)?;
        Ok(GateProgram {
            spec,
            model: self.model,
            amplitudes: self.amplitudes,
            options: self.options,
            coupling: self.coupling,
            segments: self.segments,
            reference_unitary: reference,
            schedule,
        })
    }

    /// Product of the segment propagators so far.
    fn product(&self, from: usize) -> Result<Operator> {
        let mut u = Operator::identity(self.n())?;
        for s in &self.segments[from..] {
            u = &s.unitary * &u;
        }
        Ok(u)
    }
}

/// Exact propagator of one sharp segment.
fn segment_unitary(
    model: &Model,
    amplitudes: &Amplitudes,
    drives: &[Drive],
    width: f64,
) -> Result<Operator> {
    let params = drives
        .iter()
        .map(|d| {
            let mut p = ParamSchedule::new(d.control, amplitudes.base(d.control));
            p.pulses.push(RectPulse::new(0.0, width, 1.0, d.height)?);
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sched = Schedule::new(params, width);
    sched.sharp = true;
    let h = model.hamiltonian(&sched)?.eval(0.5 * width);
    reference_expm(&h, width)
}

/// Ideal-model CNOT with control `i` and target `j`:
/// `H_i e^{iπ/4} e^{−iπσ_x^j/4} e^{iπσ_x^i/4} U_2b(π/4) e^{iπσ_x^i/2} U_2b(π/4) H_i`.
pub fn ideal_cnot_program(
    i: usize,
    j: usize,
    n_qubits: usize,
    amplitudes: Amplitudes,
    options: PulseOptions,
) -> Result<GateProgram> {
    let target = cnot_matrix(i, j, n_qubits)?;
    let mut c = Compiler::new(ModelKind::Ideal, n_qubits, amplitudes, options)?;
    c.hadamard(i)?
        .u2b(i, j, FRAC_PI_4)?
        .rot_x(i, FRAC_PI_2)?
        .u2b(i, j, FRAC_PI_4)?
        .rot_x(i, FRAC_PI_4)?
        .rot_x(j, -FRAC_PI_4)?
        .hadamard(i)?;
    c.finish(GateSpec {
        name: "cnot".into(),
        target,
        operands: vec![i, j],
    })
}

/// Appends the controlled phase flip on `(i, j)`:
/// `U_ph`, `exp(−iπσ_z^i/2)`, `U_ph`, then single-qubit z corrections.
///
/// The corrections are solved from the propagator of the compiled
/// segments: with `g_ab` the phase of `|ab⟩` after `U_ph Z U_ph`, they are
/// `exp(iα_i σ_z^i) exp(iα_j σ_z^j)` with `α_i = (g_10 − g_00)/2` and
/// `α_j = (g_01 − g_00)/2`. Compilation fails if the middle product is not
/// diagonal or its `|11⟩` phase is not `π`.
fn push_cpf(c: &mut Compiler, i: usize, j: usize) -> Result<()> {
    let start = c.segments.len();
    c.u_ph(i, j)?.rot_z(i, -FRAC_PI_2)?.u_ph(i, j)?;
    let m = c.product(start)?;
    let n = c.n();
    if !m.is_diagonal(COMPILE_TOLERANCE) {
        return Err(Error::Compilation(
            "U_ph·Z·U_ph is not diagonal for this coupling".into(),
        ));
    }
    let idx = |a: usize, b: usize| (a << (n - 1 - i)) | (b << (n - 1 - j));
    let g = |a, b| m.get(idx(a, b), idx(a, b)).arg();
    let (g00, g01, g10, g11) = (g(0, 0), g(0, 1), g(1, 0), g(1, 1));
    let flip = (g11 - g10 - g01 + g00).rem_euclid(TAU);
    if (flip - PI).abs() > 1e-9 {
        return Err(Error::Compilation(format!(
            "U_ph·Z·U_ph has conditional phase {flip}, expected π"
        )));
    }
    c.rot_z(i, 0.5 * (g10 - g00))?.rot_z(j, 0.5 * (g01 - g00))?;
    Ok(())
}

/// Controlled phase flip on charge qubits `(i, j)`.
pub fn cpf_program(
    i: usize,
    j: usize,
    n_qubits: usize,
    params: CouplingParams,
    amplitudes: Amplitudes,
    options: PulseOptions,
) -> Result<GateProgram> {
    let target = cpf_matrix(i, j, n_qubits)?;
    let mut c =
        Compiler::new(ModelKind::Charge, n_qubits, amplitudes, options)?.with_coupling(params)?;
    push_cpf(&mut c, i, j)?;
    c.finish(GateSpec {
        name: "cpf".into(),
        target,
        operands: vec![i, j],
    })
}

/// CNOT on charge qubits as `H_j U_CPF H_j`.
pub fn charge_cnot_program(
    i: usize,
    j: usize,
    n_qubits: usize,
    params: CouplingParams,
    amplitudes: Amplitudes,
    options: PulseOptions,
) -> Result<GateProgram> {
    let target = cnot_matrix(i, j, n_qubits)?;
    let mut c =
        Compiler::new(ModelKind::Charge, n_qubits, amplitudes, options)?.with_coupling(params)?;
    c.hadamard(j)?;
    push_cpf(&mut c, i, j)?;
    c.hadamard(j)?;
    c.finish(GateSpec {
        name: "cnot".into(),
        target,
        operands: vec![i, j],
    })
}

/// CNOT for either model.
pub fn cnot_program(
    kind: ModelKind,
    i: usize,
    j: usize,
    n_qubits: usize,
    params: CouplingParams,
    amplitudes: Amplitudes,
    options: PulseOptions,
) -> Result<GateProgram> {
    match kind {
        ModelKind::Ideal => ideal_cnot_program(i, j, n_qubits, amplitudes, options),
        ModelKind::Charge => charge_cnot_program(i, j, n_qubits, params, amplitudes, options),
    }
}

pub fn hadamard_program(
    q: usize,
    n_qubits: usize,
    kind: ModelKind,
    amplitudes: Amplitudes,
    options: PulseOptions,
) -> Result<GateProgram> {
    let target = hadamard_matrix(q, n_qubits)?;
    let mut c = Compiler::new(kind, n_qubits, amplitudes, options)?;
    c.hadamard(q)?;
    c.finish(GateSpec {
        name: "hadamard".into(),
        target,
        operands: vec![q],
    })
}

/// A single coupling pulse on charge qubits `(i, j)`; the target is the
/// propagator of the coupled Hamiltonian for the solved time.
pub fn u_ph_program(
    i: usize,
    j: usize,
    n_qubits: usize,
    params: CouplingParams,
    amplitudes: Amplitudes,
    options: PulseOptions,
) -> Result<GateProgram> {
    let local = super::matrices::u_ph_closed_form(&params);
    let target = embed_pair(&local, i, j, n_qubits)?;
    let mut c =
        Compiler::new(ModelKind::Charge, n_qubits, amplitudes, options)?.with_coupling(params)?;
    c.u_ph(i, j)?;
    c.finish(GateSpec {
        name: "u_ph".into(),
        target,
        operands: vec![i, j],
    })
}

/// Exchange rotation `U_2b(γ)` on ideal qubits `(i, j)`.
pub fn u2b_program(
    i: usize,
    j: usize,
    n_qubits: usize,
    gamma: f64,
    amplitudes: Amplitudes,
    options: PulseOptions,
) -> Result<GateProgram> {
    let target = embed_pair(&u2b(gamma), i, j, n_qubits)?;
    let mut c = Compiler::new(ModelKind::Ideal, n_qubits, amplitudes, options)?;
    c.u2b(i, j, gamma)?;
    c.finish(GateSpec {
        name: "u_2b".into(),
        target,
        operands: vec![i, j],
    })
}

/// `exp(iα σ_axis)` on one qubit, compiled for `kind`.
pub fn rotation_program(
    axis: Axis,
    q: usize,
    alpha: f64,
    n_qubits: usize,
    kind: ModelKind,
    amplitudes: Amplitudes,
    options: PulseOptions,
) -> Result<GateProgram> {
    let target = pauli_exp(axis, q, n_qubits, alpha)?;
    let mut c = Compiler::new(kind, n_qubits, amplitudes, options)?;
    match axis {
        Axis::X => c.rot_x(q, alpha)?,
        Axis::Z => c.rot_z(q, alpha)?,
        Axis::Y => return Err(Error::Compilation("y rotations are not compiled".into())),
    };
    c.finish(GateSpec {
        name: format!("r{axis}"),
        target,
        operands: vec![q],
    })
}
