//! Fixed-step RK4 integration of `i ȧ = H(t) a` (ħ = 1).
//!
//! The step is fixed within each smooth stretch of `H`. When the Hamiltonian
//! reports breakpoints (sharp, ε → 0 schedules) the interval is split there
//! and each piece gets `ceil(len/dt)` equal steps, so no step straddles a
//! jump. There is no step-size adaptivity and, unless asked for, no
//! renormalization: norm drift is reported, not hidden.

use std::io::{self, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::hamiltonian::HamiltonianFn;
use crate::par::{map_ordered, Parallelism};
use crate::pulse::Schedule;
use crate::qcore::{basis_label, operator_matvec, Operator, StateVector};
use crate::{Error, Result};

/// Upper bound on the default step, in units of ħ/E_ref.
pub const MAX_DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    /// Renormalize the state every this many steps.
    pub renormalize_every: Option<usize>,
    /// Steps between recorded samples; 0 records only the end points.
    pub record_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: MAX_DEFAULT_DT,
            renormalize_every: None,
            record_stride: 0,
        }
    }
}

impl IntegratorConfig {
    pub fn with_dt(dt: f64) -> Self {
        Self {
            dt,
            ..Self::default()
        }
    }

    /// `dt = min(ε/10, τ_min/100, 10⁻³)` over the schedule's pulses.
    /// Ramp widths are ignored for sharp schedules.
    pub fn for_schedule(schedule: &Schedule) -> Self {
        let mut dt = MAX_DEFAULT_DT;
        if !schedule.sharp {
            if let Some(eps) = schedule.min_epsilon() {
                dt = dt.min(eps / 10.0);
            }
        }
        if let Some(w) = schedule.min_width() {
            dt = dt.min(w / 100.0);
        }
        Self::with_dt(dt)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.renormalize_every == Some(0) {
            return Err(Error::InvalidParameter(
                "renormalize_every must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Human-readable notes where `dt` under-resolves the schedule.
    pub fn resolution_warnings(&self, schedule: &Schedule) -> Vec<String> {
        let mut out = Vec::new();
        if let (false, Some(eps)) = (schedule.sharp, schedule.min_epsilon()) {
            if self.dt > eps / 10.0 * (1.0 + 1e-12) {
                out.push(format!(
                    "dt = {:e} does not resolve the ramp (ε/10 = {:e})",
                    self.dt,
                    eps / 10.0
                ));
            }
        }
        if let Some(w) = schedule.min_width() {
            if self.dt > w / 100.0 * (1.0 + 1e-12) {
                out.push(format!(
                    "dt = {:e} exceeds 1/100 of the shortest pulse ({:e})",
                    self.dt,
                    w / 100.0
                ));
            }
        }
        out
    }
}

/// Recorded evolution.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `|a_m(t)|²` for every recorded time.
    pub probabilities: Vec<Vec<f64>>,
    pub final_state: StateVector,
    /// `max |‖ψ‖ − 1|` over all steps.
    pub max_norm_drift: f64,
    pub steps: usize,
}

impl Trajectory {
    /// CSV with header `t,p_00,p_01,…` and 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let n = self.final_state.n_qubits();
        let mut header = vec!["t".to_string()];
        header.extend((0..self.final_state.dim()).map(|m| format!("p_{}", basis_label(m, n))));
        writeln!(w, "{}", header.join(","))?;
        for (t, p) in self.times.iter().zip(&self.probabilities) {
            let mut row = vec![fmt_sci(*t)];
            row.extend(p.iter().map(|&x| fmt_sci(x)));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Scientific notation with 12 significant digits. Negative zero prints as zero.
pub fn fmt_sci(x: f64) -> String {
    format!("{:.11e}", x + 0.0)
}

#[derive(Debug, Clone, Copy)]
struct Stats {
    steps: usize,
    max_norm_drift: f64,
}

/// Clamps `t` strictly inside `[lo, hi]`, so that a sharp envelope is never
/// sampled exactly on one of its edges. The guard exceeds the float spacing at `t`.
pub(crate) fn interior(t: f64, lo: f64, hi: f64) -> f64 {
    let guard = (1e-9 * (hi - lo)).max(16.0 * f64::EPSILON * lo.abs().max(hi.abs()));
    t.clamp(lo + guard, hi - guard)
}

/// Integrates `psi` in place from `t0` to `t1`, calling `observe(step, t, psi)`
/// at the start, every `record_stride` steps, and at the end.
fn integrate<H, O>(
    psi: &mut [Complex64],
    h: &H,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
    mut observe: O,
) -> Result<Stats>
where
    H: HamiltonianFn + ?Sized,
    O: FnMut(usize, f64, &[Complex64]),
{
    cfg.validate()?;
    if !(t1 > t0) {
        return Err(Error::InvalidParameter(format!(
            "t1 ({t1}) must exceed t0 ({t0})"
        )));
    }
    let dim = h.dim();
    if psi.len() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: psi.len(),
        });
    }

    let mut edges = vec![t0];
    edges.extend(h.breakpoints().into_iter().filter(|&b| b > t0 && b < t1));
    edges.push(t1);

    let zero = Complex64::new(0.0, 0.0);
    let mut hm = vec![zero; dim * dim];
    let mut k1 = vec![zero; dim];
    let mut k2 = vec![zero; dim];
    let mut k3 = vec![zero; dim];
    let mut k4 = vec![zero; dim];
    let mut tmp = vec![zero; dim];
    let minus_i = Complex64::new(0.0, -1.0);

    let mut stats = Stats {
        steps: 0,
        max_norm_drift: 0.0,
    };
    let mut last_recorded = 0;
    observe(0, t0, psi);

    for piece in edges.windows(2) {
        let (lo, hi) = (piece[0], piece[1]);
        let len = hi - lo;
        let n = ((len / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
        let step = len / n as f64;
        let at = |t: f64| interior(t, lo, hi);

        for i in 0..n {
            let t = lo + i as f64 * step;

            h.eval_into(at(t), &mut hm);
            operator_matvec(&hm, psi, &mut k1);
            k1.iter_mut().for_each(|z| *z *= minus_i);

            h.eval_into(at(t + 0.5 * step), &mut hm);
            for ((o, a), k) in tmp.iter_mut().zip(psi.iter()).zip(&k1) {
                *o = a + k * (0.5 * step);
            }
            operator_matvec(&hm, &tmp, &mut k2);
            k2.iter_mut().for_each(|z| *z *= minus_i);
            for ((o, a), k) in tmp.iter_mut().zip(psi.iter()).zip(&k2) {
                *o = a + k * (0.5 * step);
            }
            operator_matvec(&hm, &tmp, &mut k3);
            k3.iter_mut().for_each(|z| *z *= minus_i);

            h.eval_into(at(t + step), &mut hm);
            for ((o, a), k) in tmp.iter_mut().zip(psi.iter()).zip(&k3) {
                *o = a + k * step;
            }
            operator_matvec(&hm, &tmp, &mut k4);
            k4.iter_mut().for_each(|z| *z *= minus_i);

            let w = step / 6.0;
            for (j, a) in psi.iter_mut().enumerate() {
                *a += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * w;
            }
            stats.steps += 1;

            let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !norm.is_finite() {
                return Err(Error::NonFinite {
                    step: stats.steps,
                    t: t + step,
                });
            }
            stats.max_norm_drift = stats.max_norm_drift.max((norm - 1.0).abs());
            if let Some(every) = cfg.renormalize_every {
                if stats.steps.is_multiple_of(every) {
                    psi.iter_mut().for_each(|z| *z /= norm);
                }
            }
            if cfg.record_stride > 0 && stats.steps.is_multiple_of(cfg.record_stride) {
                observe(stats.steps, t + step, psi);
                last_recorded = stats.steps;
            }
        }
    }
    if last_recorded != stats.steps {
        observe(stats.steps, t1, psi);
    }
    Ok(stats)
}

/// Evolves `psi0` under `h` from `t0` to `t1`.
pub fn evolve<H: HamiltonianFn + ?Sized>(
    psi0: &StateVector,
    h: &H,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    if psi0.n_qubits() != h.n_qubits() {
        return Err(Error::Dimension {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    let mut psi = psi0.amplitudes().to_vec();
    let mut times = Vec::new();
    let mut probabilities = Vec::new();
    let stats = integrate(&mut psi, h, t0, t1, cfg, |_, t, a| {
        times.push(t);
        probabilities.push(a.iter().map(|z| z.norm_sqr()).collect());
    })?;
    Ok(Trajectory {
        times,
        probabilities,
        final_state: StateVector::from_amplitudes(psi0.n_qubits(), psi)?,
        max_norm_drift: stats.max_norm_drift,
        steps: stats.steps,
    })
}

/// Final state only; skips trajectory bookkeeping.
pub fn evolve_final<H: HamiltonianFn + ?Sized>(
    psi0: &StateVector,
    h: &H,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<(StateVector, f64)> {
    if psi0.n_qubits() != h.n_qubits() {
        return Err(Error::Dimension {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    let mut psi = psi0.amplitudes().to_vec();
    let cfg = IntegratorConfig {
        record_stride: 0,
        ..*cfg
    };
    let stats = integrate(&mut psi, h, t0, t1, &cfg, |_, _, _| {})?;
    Ok((
        StateVector::from_amplitudes(psi0.n_qubits(), psi)?,
        stats.max_norm_drift,
    ))
}

/// Full propagator `U(t1, t0)`; column `m` is the evolved basis state `|m⟩`.
pub fn propagator<H: HamiltonianFn + ?Sized>(
    h: &H,
    t0: f64,
    t1: f64,
    cfg: &IntegratorConfig,
    mode: Parallelism,
) -> Result<Operator> {
    let n = h.n_qubits();
    let dim = h.dim();
    let columns: Vec<usize> = (0..dim).collect();
    let evolved = map_ordered(&columns, mode, |&m| -> Result<Vec<Complex64>> {
        let basis = StateVector::basis(n, m)?;
        Ok(evolve_final(&basis, h, t0, t1, cfg)?.0.into_amplitudes())
    });
    let mut u = Operator::zeros(n)?;
    for (c, col) in evolved.into_iter().enumerate() {
        for (r, z) in col?.into_iter().enumerate() {
            u.set(r, c, z);
        }
    }
    Ok(u)
}

/// Eigenvalues and unitary eigenvector matrix (columns) of a Hermitian operator.
pub fn hermitian_eigen(h: &Operator) -> Result<(Vec<f64>, Operator)> {
    let scale = h.max_abs().max(1.0);
    let herm = h.hermiticity_error();
    if herm > 1e-12 * scale {
        return Err(Error::NotHermitian(herm));
    }
    let d = h.dim();
    let m = DMatrix::<Complex64>::from_fn(d, d, |r, c| h.get(r, c));
    let eig = m.symmetric_eigen();
    let mut v = Operator::zeros(h.n_qubits())?;
    for r in 0..d {
        for c in 0..d {
            v.set(r, c, eig.eigenvectors[(r, c)]);
        }
    }
    Ok((eig.eigenvalues.iter().copied().collect(), v))
}

/// `V · diag(e^{−iλ_k t}) · V†`.
pub fn expm_from_eigen(values: &[f64], vectors: &Operator, t: f64) -> Operator {
    let d = vectors.dim();
    let mut u = Operator::zeros(vectors.n_qubits()).expect("valid register");
    let phases: Vec<Complex64> = values
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -l * t))
        .collect();
    for r in 0..d {
        for c in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, p) in phases.iter().enumerate() {
                acc += vectors.get(r, k) * p * vectors.get(c, k).conj();
            }
            u.set(r, c, acc);
        }
    }
    u
}

/// `exp(−i·H·t)` for constant Hermitian `H` via a dense Hermitian
/// eigendecomposition. Independent of the RK4 path; used as ground truth.
pub fn reference_expm(h: &Operator, t: f64) -> Result<Operator> {
    let (values, vectors) = hermitian_eigen(h)?;
    Ok(expm_from_eigen(&values, &vectors, t))
}
