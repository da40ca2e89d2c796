//! Rise-time sweeps and the power-law fit of gate error versus ε.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::fidelity::{error_generator, fidelity_perturbative, gate_fidelity};
use super::magnus::QuadratureConfig;
use crate::gatecomp::GateProgram;
use crate::integrator::{evolve_final, fmt_sci, IntegratorConfig};
use crate::par::{map_ordered, Parallelism};
use crate::qcore::StateVector;
use crate::{Error, Result};

pub const MIN_SWEEP_POINTS: usize = 6;
/// Points with `1 − success` below this are left out of the exponent fit.
pub const NOISE_FLOOR: f64 = 1e-10;
/// Upward steps in success smaller than this still count as monotone.
pub const RIPPLE_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepOptions {
    /// Fixed step; `None` picks the default rule per point.
    pub dt: Option<f64>,
    /// Also evaluate the perturbative fidelity from the error generator.
    pub perturbative: bool,
    pub quadrature_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            dt: None,
            perturbative: true,
            quadrature_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub epsilon_over_tau_op: f64,
    pub epsilon: f64,
    /// Population of the ideal output basis state.
    pub success: f64,
    pub fidelity: f64,
    pub fidelity_perturbative: Option<f64>,
    pub max_norm_drift: f64,
    pub dt: f64,
}

/// `1 − success ≈ c·x^2` on `x ≤ 1`, and a free exponent `p` from a
/// log-log least-squares line on the same points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFit {
    pub c: f64,
    pub p: f64,
    /// RMS of `(1 − success) − c·x²` on the fit points.
    pub residual: f64,
    pub c_points: usize,
    pub p_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub gate: String,
    pub model: String,
    pub tau_op: f64,
    pub points: Vec<SweepPoint>,
    pub fit: PowerFit,
    /// Largest increase of success between neighbouring ε.
    pub max_rise: f64,
    pub monotone: bool,
}

impl SweepRecord {
    /// CSV `epsilon_over_tau_op,success_prob,fidelity,fidelity_perturbative`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "epsilon_over_tau_op,success_prob,fidelity,fidelity_perturbative"
        )?;
        for p in &self.points {
            let pert = p
                .fidelity_perturbative
                .map_or_else(|| "nan".to_string(), fmt_sci);
            writeln!(
                w,
                "{},{},{},{}",
                fmt_sci(p.epsilon_over_tau_op),
                fmt_sci(p.success),
                fmt_sci(p.fidelity),
                pert
            )?;
        }
        Ok(())
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Exponent of `err ∝ x^p` from a log-log fit, skipping values below the noise floor.
pub fn loglog_slope(x: &[f64], err: &[f64]) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(err)
        .filter(|(a, e)| **a > 0.0 && **e >= NOISE_FLOOR)
        .map(|(a, e)| (a.ln(), e.ln()))
        .unzip();
    linear_fit(&lx, &ly).map(|(s, _)| s)
}

/// Fit of `1 − success` against `x = ε/τ_op` on the points with `x ≤ 1`.
pub fn fit_quadratic(x: &[f64], err: &[f64]) -> PowerFit {
    let sel: Vec<(f64, f64)> = x
        .iter()
        .zip(err)
        .filter(|(a, _)| **a <= 1.0 + 1e-12)
        .map(|(a, e)| (*a, *e))
        .collect();
    let s4: f64 = sel.iter().map(|(a, _)| a.powi(4)).sum();
    let s2e: f64 = sel.iter().map(|(a, e)| a * a * e).sum();
    let c = if s4 > 0.0 { s2e / s4 } else { f64::NAN };
    let residual = if sel.is_empty() {
        f64::NAN
    } else {
        (sel.iter()
            .map(|(a, e)| (e - c * a * a).powi(2))
            .sum::<f64>()
            / sel.len() as f64)
            .sqrt()
    };
    let (xs, es): (Vec<f64>, Vec<f64>) = sel.iter().copied().unzip();
    let p_points = es.iter().filter(|e| **e >= NOISE_FLOOR).count();
    PowerFit {
        c,
        p: loglog_slope(&xs, &es).unwrap_or(f64::NAN),
        residual,
        c_points: sel.len(),
        p_points,
    }
}

fn check_grid(ratios: &[f64]) -> Result<Vec<f64>> {
    if ratios.len() < MIN_SWEEP_POINTS {
        return Err(Error::InvalidParameter(format!(
            "ε grid needs at least {MIN_SWEEP_POINTS} points, got {}",
            ratios.len()
        )));
    }
    if let Some(bad) = ratios.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "ε grid values must be positive, got {bad}"
        )));
    }
    let mut sorted = ratios.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(
            "ε grid values must be distinct".into(),
        ));
    }
    Ok(sorted)
}

/// Index of the ideal output if it is a basis state.
fn ideal_basis_output(program: &GateProgram, psi_in: &StateVector) -> Result<Option<usize>> {
    let out = program.spec.target.apply(psi_in)?;
    Ok(out.iter().position(|z| (z.norm_sqr() - 1.0).abs() < 1e-9))
}

/// Simulates one program at its current ε.
pub fn simulate_point(
    program: &GateProgram,
    psi_in: &StateVector,
    opts: &SweepOptions,
) -> Result<SweepPoint> {
    let h = program.hamiltonian()?;
    let cfg = opts.dt.map_or_else(
        || IntegratorConfig::for_schedule(&program.schedule),
        IntegratorConfig::with_dt,
    );
    let t1 = program.duration();
    let (out, drift) = evolve_final(psi_in, &h, 0.0, t1, &cfg)?;
    let fidelity = gate_fidelity(psi_in, &program.spec.target, &out)?.fidelity;
    let success = match ideal_basis_output(program, psi_in)? {
        Some(m) => out.amplitudes()[m].norm_sqr(),
        None => fidelity,
    };
    let eps = program.epsilon();
    let fidelity_perturbative = if opts.perturbative {
        let sharp = program.ideal_hamiltonian()?;
        let longest = longest_piece(program);
        let q = QuadratureConfig {
            rel_tol: opts.quadrature_tol,
            ..QuadratureConfig::for_epsilon(eps, longest)
        };
        let omega = error_generator(&h, &sharp, 0.0, t1, &q)?;
        Some(fidelity_perturbative(psi_in, &omega.scale_real(1.0 / t1), t1, eps)?.fidelity)
    } else {
        None
    };
    Ok(SweepPoint {
        epsilon_over_tau_op: eps / program.tau_op(),
        epsilon: eps,
        success,
        fidelity,
        fidelity_perturbative,
        max_norm_drift: drift,
        dt: cfg.dt,
    })
}

fn longest_piece(program: &GateProgram) -> f64 {
    let mut edges = vec![0.0];
    edges.extend(program.schedule.breakpoints());
    edges.push(program.duration());
    edges.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

/// Recompiles `program` at each `ε = x·τ_op`, simulates from `psi_in` and fits.
pub fn sweep_rise_time(
    program: &GateProgram,
    psi_in: &StateVector,
    ratios: &[f64],
    opts: &SweepOptions,
    mode: Parallelism,
) -> Result<SweepRecord> {
    let grid = check_grid(ratios)?;
    let tau_op = program.tau_op();
    let results = map_ordered(&grid, mode, |&x| {
        let eps = x * tau_op;
        program
            .with_epsilon(eps)
            .and_then(|p| simulate_point(&p, psi_in, opts))
            .map_err(|e| Error::SweepPoint {
                epsilon: eps,
                source: Box::new(e),
            })
    });
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = points.iter().map(|p| p.epsilon_over_tau_op).collect();
    let err: Vec<f64> = points.iter().map(|p| 1.0 - p.success).collect();
    let max_rise = points
        .windows(2)
        .map(|w| w[1].success - w[0].success)
        .fold(0.0, f64::max);
    Ok(SweepRecord {
        gate: program.spec.name.clone(),
        model: program.kind().to_string(),
        tau_op,
        fit: fit_quadratic(&x, &err),
        max_rise,
        monotone: max_rise <= RIPPLE_TOLERANCE,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_validation() {
        assert!(check_grid(&[0.1]).is_err());
        assert!(check_grid(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.5]).is_err());
        assert!(check_grid(&[0.1, 0.2, 0.3, 0.4, 0.5, -1.0]).is_err());
        assert_eq!(check_grid(&[0.6, 0.2, 0.3, 0.4, 0.5, 0.1]).unwrap()[0], 0.1);
    }

    #[test]
    fn exact_quadratic_is_recovered() {
        let x = [0.25, 0.35, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0];
        let e: Vec<f64> = x.iter().map(|a| 0.027 * a * a).collect();
        let fit = fit_quadratic(&x, &e);
        assert!((fit.c - 0.027).abs() < 1e-15);
        assert!((fit.p - 2.0).abs() < 1e-12);
        assert_eq!(fit.c_points, 5);
        assert!(fit.residual < 1e-15);
    }

    #[test]
    fn noise_floor_points_are_dropped() {
        let x = [0.1, 0.2, 0.4, 0.8];
        let e = [0.0, 1e-12, 1.6e-3, 6.4e-3];
        assert!((loglog_slope(&x, &e).unwrap() - 2.0).abs() < 1e-12);
        assert!(loglog_slope(&[0.1], &[1.0]).is_none());
    }

    proptest! {
        #[test]
        fn power_law_exponent(p in 0.5f64..4.0, c in 1e-4f64..1.0) {
            let x = [0.2f64, 0.3, 0.45, 0.6, 0.8, 1.0];
            let e: Vec<f64> = x.iter().map(|a| c * a.powf(p)).collect();
            prop_assert!((loglog_slope(&x, &e).unwrap() - p).abs() < 1e-9);
        }
    }
}
