//! Time-dependent Hamiltonians of the two register models.
//!
//! Ideal qubits:
//! `H = −Σ_i B_i·σ^(i) − ½ Σ_{i<j} J_ij (σ_x^(i)σ_x^(j) + σ_y^(i)σ_y^(j))`.
//!
//! Charge qubits coupled through a common inductor:
//! `H = −½ Σ_i (E_Ci σ_z^(i) + E_Ji σ_x^(i)) − Σ_{i<j} (E_Ji E_Jj / E_L) σ_y^(i)σ_y^(j)`.
//!
//! The coupling is counted once per unordered pair, which is the
//! normalization under which `H_ph = −(E_J/2)(σ_x^(1) + σ_x^(2)) − (E_J²/E_L) σ_y^(1)σ_y^(2)`
//! for two qubits and from which the `(m, n)` coupling relations follow.
//! There is no separate coupling switch: the term is the product of the two
//! Josephson envelopes and vanishes whenever either is off.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pulse::{ControlId, Schedule};
use crate::qcore::{check_register, embed_pauli, pauli_exp, Axis, Operator};
use crate::{Error, Result};

/// Schedules with more controls than this are rejected.
pub const MAX_CONTROLS: usize = 32;

/// A Hermitian operator-valued function of time.
pub trait HamiltonianFn: Sync {
    fn n_qubits(&self) -> usize;

    fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    /// Writes `H(t)` (row-major) into `out`, which has `dim²` entries.
    fn eval_into(&self, t: f64, out: &mut [Complex64]);

    fn eval(&self, t: f64) -> Operator {
        let mut op = Operator::zeros(self.n_qubits()).expect("valid register");
        self.eval_into(t, op.as_mut_slice());
        op
    }

    /// Times at which `H` may jump. Integrators and quadratures split there.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Time-independent Hamiltonian.
#[derive(Debug, Clone)]
pub struct ConstantHamiltonian(pub Operator);

impl HamiltonianFn for ConstantHamiltonian {
    fn n_qubits(&self) -> usize {
        self.0.n_qubits()
    }

    fn eval_into(&self, _t: f64, out: &mut [Complex64]) {
        out.copy_from_slice(self.0.as_slice());
    }
}

/// Hamiltonian given by a closure.
pub struct FnHamiltonian<F> {
    n_qubits: usize,
    f: F,
}

impl<F: Fn(f64) -> Operator + Sync> FnHamiltonian<F> {
    pub fn new(n_qubits: usize, f: F) -> Self {
        Self { n_qubits, f }
    }
}

impl<F: Fn(f64) -> Operator + Sync> HamiltonianFn for FnHamiltonian<F> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn eval_into(&self, t: f64, out: &mut [Complex64]) {
        out.copy_from_slice((self.f)(t).as_slice());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealModel {
    pub n_qubits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargeModel {
    pub n_qubits: usize,
    /// Inductive coupling scale `E_L`.
    pub e_l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Model {
    Ideal(IdealModel),
    Charge(ChargeModel),
}

impl Model {
    pub fn ideal(n_qubits: usize) -> Self {
        Model::Ideal(IdealModel { n_qubits })
    }

    pub fn charge(n_qubits: usize, e_l: f64) -> Self {
        Model::Charge(ChargeModel { n_qubits, e_l })
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Model::Ideal(m) => m.n_qubits,
            Model::Charge(m) => m.n_qubits,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Ideal(_) => "ideal",
            Model::Charge(_) => "charge",
        }
    }

    /// Binds a schedule, checking that every control exists on this model.
    pub fn hamiltonian(&self, schedule: &Schedule) -> Result<ControlledHamiltonian> {
        ControlledHamiltonian::new(*self, schedule.clone())
    }
}

/// `H(t) = Σ_k c_k(t) M_k + Σ_(a,b) c_a(t) c_b(t) M_ab` for schedule controls `c`.
#[derive(Debug, Clone)]
pub struct ControlledHamiltonian {
    model: Model,
    schedule: Schedule,
    linear: Vec<(usize, Operator)>,
    bilinear: Vec<(usize, usize, Operator)>,
}

impl ControlledHamiltonian {
    pub fn new(model: Model, schedule: Schedule) -> Result<Self> {
        let n = model.n_qubits();
        check_register(n)?;
        if schedule.parameters.len() > MAX_CONTROLS {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_CONTROLS} controls supported, got {}",
                schedule.parameters.len()
            )));
        }
        let mut linear = Vec::new();
        let mut bilinear = Vec::new();
        let unsupported = |id: ControlId| Error::UnsupportedControl {
            control: id.to_string(),
            model: model.name(),
        };
        for (k, ps) in schedule.parameters.iter().enumerate() {
            let id = ps.parameter;
            if id.max_qubit() >= n {
                return Err(Error::QubitIndex {
                    index: id.max_qubit(),
                    n_qubits: n,
                });
            }
            let op = match (model, id) {
                (Model::Ideal(_), ControlId::Bx(q)) => embed_pauli(Axis::X, q, n)?.scale_real(-1.0),
                (Model::Ideal(_), ControlId::By(q)) => embed_pauli(Axis::Y, q, n)?.scale_real(-1.0),
                (Model::Ideal(_), ControlId::Bz(q)) => embed_pauli(Axis::Z, q, n)?.scale_real(-1.0),
                (Model::Ideal(_), ControlId::Exchange(i, j)) => {
                    let xx = &embed_pauli(Axis::X, i, n)? * &embed_pauli(Axis::X, j, n)?;
                    let yy = &embed_pauli(Axis::Y, i, n)? * &embed_pauli(Axis::Y, j, n)?;
                    (&xx + &yy).scale_real(-0.5)
                }
                (Model::Charge(_), ControlId::ChargeEnergy(q)) => {
                    embed_pauli(Axis::Z, q, n)?.scale_real(-0.5)
                }
                (Model::Charge(_), ControlId::Josephson(q)) => {
                    embed_pauli(Axis::X, q, n)?.scale_real(-0.5)
                }
                _ => return Err(unsupported(id)),
            };
            linear.push((k, op));
        }
        if let Model::Charge(cm) = model {
            let josephson: Vec<(usize, usize)> = schedule
                .parameters
                .iter()
                .enumerate()
                .filter_map(|(k, ps)| match ps.parameter {
                    ControlId::Josephson(q) => Some((k, q)),
                    _ => None,
                })
                .collect();
            if josephson.len() >= 2 && !(cm.e_l > 0.0 && cm.e_l.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "E_L must be positive when couplings can be active, got {}",
                    cm.e_l
                )));
            }
            for (a, &(ka, qa)) in josephson.iter().enumerate() {
                for &(kb, qb) in &josephson[a + 1..] {
                    let yy = &embed_pauli(Axis::Y, qa, n)? * &embed_pauli(Axis::Y, qb, n)?;
                    bilinear.push((ka, kb, yy.scale_real(-1.0 / cm.e_l)));
                }
            }
        }
        Ok(Self {
            model,
            schedule,
            linear,
            bilinear,
        })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }
}

impl HamiltonianFn for ControlledHamiltonian {
    fn n_qubits(&self) -> usize {
        self.model.n_qubits()
    }

    #[inline]
    fn eval_into(&self, t: f64, out: &mut [Complex64]) {
        let mut values = [0.0; MAX_CONTROLS];
        let values = &mut values[..self.schedule.parameters.len()];
        self.schedule.values_into(t, values);
        out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (k, op) in &self.linear {
            let c = values[*k];
            if c != 0.0 {
                out.iter_mut()
                    .zip(op.as_slice())
                    .for_each(|(o, m)| *o += m * c);
            }
        }
        for (a, b, op) in &self.bilinear {
            let c = values[*a] * values[*b];
            if c != 0.0 {
                out.iter_mut()
                    .zip(op.as_slice())
                    .for_each(|(o, m)| *o += m * c);
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        if self.schedule.sharp {
            self.schedule.breakpoints()
        } else {
            Vec::new()
        }
    }
}

/// Ideal-model `H(t)`.
pub fn ideal_hamiltonian(model: &IdealModel, schedule: &Schedule, t: f64) -> Result<Operator> {
    Ok(Model::Ideal(*model).hamiltonian(schedule)?.eval(t))
}

/// Charge-model `H(t)`.
pub fn charge_hamiltonian(model: &ChargeModel, schedule: &Schedule, t: f64) -> Result<Operator> {
    Ok(Model::Charge(*model).hamiltonian(schedule)?.eval(t))
}

/// Two-qubit coupled Hamiltonian with both Josephson energies on and the
/// charging terms off: `−(E_J/2)(σ_x^(1) + σ_x^(2)) − (E_J²/E_L) σ_y^(1)σ_y^(2)`.
pub fn coupled_hamiltonian(e_j: f64, e_l: f64) -> Result<Operator> {
    positive("E_J", e_j)?;
    positive("E_L", e_l)?;
    let x = &embed_pauli(Axis::X, 0, 2)? + &embed_pauli(Axis::X, 1, 2)?;
    let yy = &embed_pauli(Axis::Y, 0, 2)? * &embed_pauli(Axis::Y, 1, 2)?;
    Ok(&x.scale_real(-0.5 * e_j) + &yy.scale_real(-e_j * e_j / e_l))
}

/// `R_y = exp[−i(π/4)(σ_y^(1) + σ_y^(2))]`.
pub fn ry_frame() -> Operator {
    let q = -std::f64::consts::FRAC_PI_4;
    let a = pauli_exp(Axis::Y, 0, 2, q).expect("two-qubit register");
    let b = pauli_exp(Axis::Y, 1, 2, q).expect("two-qubit register");
    &a * &b
}

/// `H′_ph = R_y† H_ph R_y` in closed form:
/// `−E_int [[a,0,0,−1],[0,0,1,0],[0,1,0,0],[−1,0,0,−a]]`, `a = E_L/E_J`,
/// `E_int = E_J²/E_L`. Block diagonal over `{|00⟩,|11⟩}` and `{|01⟩,|10⟩}`.
pub fn transformed_hph(e_j: f64, e_l: f64) -> Result<Operator> {
    positive("E_J", e_j)?;
    positive("E_L", e_l)?;
    let e_int = e_j * e_j / e_l;
    let a = e_l / e_j;
    let r = |x: f64| Complex64::new(-e_int * x, 0.0);
    Operator::from_rows(
        2,
        &[
            vec![r(a), r(0.0), r(0.0), r(-1.0)],
            vec![r(0.0), r(0.0), r(1.0), r(0.0)],
            vec![r(0.0), r(1.0), r(0.0), r(0.0)],
            vec![r(-1.0), r(0.0), r(0.0), r(-a)],
        ],
    )
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::{ParamSchedule, RectPulse};

    fn always_on(id: ControlId, amp: f64) -> ParamSchedule {
        let mut ps = ParamSchedule::new(id, amp);
        ps.pulses
            .push(RectPulse::new(-1e6, 1e6, 1e-3, 1.0).unwrap());
        ps
    }

    fn sched(params: Vec<ParamSchedule>) -> Schedule {
        Schedule::new(params, 1.0)
    }

    #[test]
    fn ideal_examples() {
        let model = IdealModel { n_qubits: 2 };
        let off = sched(vec![ParamSchedule::new(ControlId::Bx(0), 1.0)]);
        assert_eq!(ideal_hamiltonian(&model, &off, 0.3).unwrap().max_abs(), 0.0);

        let b = 0.8;
        let h = ideal_hamiltonian(
            &IdealModel { n_qubits: 1 },
            &sched(vec![always_on(ControlId::Bx(0), b)]),
            0.0,
        )
        .unwrap();
        let want = embed_pauli(Axis::X, 0, 1).unwrap().scale_real(-b);
        assert!(h.distance(&want) < 1e-14);

        let j = 1.3;
        let h = ideal_hamiltonian(
            &model,
            &sched(vec![always_on(ControlId::exchange(0, 1), j)]),
            0.0,
        )
        .unwrap();
        // −J (|01⟩⟨10| + |10⟩⟨01|)
        let mut want = Operator::zeros(2).unwrap();
        want.set(1, 2, Complex64::new(-j, 0.0));
        want.set(2, 1, Complex64::new(-j, 0.0));
        assert!(h.distance(&want) < 1e-14);
    }

    #[test]
    fn charge_examples() {
        let e_l = 143f64.sqrt();
        let model = ChargeModel { n_qubits: 2, e_l };
        let ej = 1.0;
        let s = sched(vec![
            always_on(ControlId::Josephson(0), ej),
            always_on(ControlId::Josephson(1), ej),
            ParamSchedule::new(ControlId::ChargeEnergy(0), 2.0),
            ParamSchedule::new(ControlId::ChargeEnergy(1), 2.0),
        ]);
        let h = charge_hamiltonian(&model, &s, 0.0).unwrap();
        assert!(h.distance(&coupled_hamiltonian(ej, e_l).unwrap()) < 1e-14);

        let e = 2.0;
        let s = sched(vec![always_on(ControlId::ChargeEnergy(0), e)]);
        let h = charge_hamiltonian(&model, &s, 0.0).unwrap();
        let want = embed_pauli(Axis::Z, 0, 2).unwrap().scale_real(-e / 2.0);
        assert!(h.distance(&want) < 1e-14);

        // only one Josephson envelope on: no coupling term
        let s = sched(vec![
            always_on(ControlId::Josephson(0), ej),
            ParamSchedule::new(ControlId::Josephson(1), ej),
        ]);
        let h = charge_hamiltonian(&model, &s, 0.0).unwrap();
        let want = embed_pauli(Axis::X, 0, 2).unwrap().scale_real(-ej / 2.0);
        assert_eq!(h.distance(&want), 0.0);
    }

    #[test]
    fn control_sets_are_model_specific() {
        let s = sched(vec![ParamSchedule::new(ControlId::By(0), 1.0)]);
        assert!(matches!(
            Model::charge(2, 10.0).hamiltonian(&s),
            Err(Error::UnsupportedControl { .. })
        ));
        let s = sched(vec![ParamSchedule::new(ControlId::Josephson(0), 1.0)]);
        assert!(Model::ideal(2).hamiltonian(&s).is_err());
        let s = sched(vec![ParamSchedule::new(ControlId::Bx(2), 1.0)]);
        assert!(matches!(
            Model::ideal(2).hamiltonian(&s),
            Err(Error::QubitIndex { .. })
        ));
        let s = sched(vec![
            ParamSchedule::new(ControlId::Josephson(0), 1.0),
            ParamSchedule::new(ControlId::Josephson(1), 1.0),
        ]);
        assert!(Model::charge(2, 0.0).hamiltonian(&s).is_err());
    }

    #[test]
    fn hermitian_at_many_times() {
        let mut params = Vec::new();
        for q in 0..3 {
            let mut a = ParamSchedule::new(ControlId::Josephson(q), 1.0 + q as f64 * 0.1);
            a.pulses
                .push(RectPulse::new(0.5 + q as f64, 4.0, 0.3, 1.0).unwrap());
            let mut b = ParamSchedule::new(ControlId::ChargeEnergy(q), 2.0);
            b.pulses
                .push(RectPulse::new(1.0, 2.0 + q as f64, 0.2, -0.5).unwrap());
            params.push(a);
            params.push(b);
        }
        let h = Model::charge(3, 7.0).hamiltonian(&sched(params)).unwrap();
        for k in 0..1000 {
            let t = -1.0 + 7.0 * k as f64 / 999.0;
            assert!(h.eval(t).hermiticity_error() <= 1e-12);
        }
    }

    #[test]
    fn coupling_scales_quadratically_and_no_josephson_is_diagonal() {
        let model = Model::charge(2, 5.0);
        let build = |s: f64| {
            sched(vec![
                always_on(ControlId::Josephson(0), s),
                always_on(ControlId::Josephson(1), s),
                always_on(ControlId::ChargeEnergy(0), 0.7),
            ])
        };
        let yy_coeff = |s: f64| model.hamiltonian(&build(s)).unwrap().eval(0.0).get(0, 3).re;
        assert!((yy_coeff(2.0) / yy_coeff(1.0) - 4.0).abs() < 1e-12);

        let s = sched(vec![
            ParamSchedule::new(ControlId::Josephson(0), 1.0),
            ParamSchedule::new(ControlId::Josephson(1), 1.0),
            always_on(ControlId::ChargeEnergy(0), 0.7),
            always_on(ControlId::ChargeEnergy(1), -0.2),
        ]);
        assert!(model.hamiltonian(&s).unwrap().eval(0.0).is_diagonal(0.0));
    }

    #[test]
    fn transformed_hph_matches_conjugation() {
        let (ej, el) = (1.0, 143f64.sqrt());
        let ry = ry_frame();
        let conj = &(&ry.adjoint() * &coupled_hamiltonian(ej, el).unwrap()) * &ry;
        let closed = transformed_hph(ej, el).unwrap();
        assert!(conj.distance(&closed) <= 1e-12);
        assert!((closed.get(0, 0).re + ej).abs() < 1e-15);
        for (r, c) in [
            (0, 1),
            (0, 2),
            (1, 0),
            (1, 3),
            (2, 0),
            (2, 3),
            (3, 1),
            (3, 2),
        ] {
            assert_eq!(closed.get(r, c), Complex64::new(0.0, 0.0));
        }
    }
}
