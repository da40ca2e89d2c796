//! Gate fidelity from simulation and from the perturbative error generator.

use num_complex::Complex64;
use serde::Serialize;

use super::magnus::{inside, piece_edges, QuadratureConfig};
use crate::hamiltonian::HamiltonianFn;
use crate::integrator::{expm_from_eigen, hermitian_eigen};
use crate::qcore::{fidelity_overlap, Operator, StateVector};
use crate::{Error, Result};

/// Above this `‖H̄⁽¹⁾τ‖` the second-order estimate is not trusted.
pub const PERTURBATIVE_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityEstimate {
    pub fidelity: f64,
    /// `⟨Δη²⟩` for perturbative estimates.
    pub eta_dispersion: Option<f64>,
    pub epsilon: Option<f64>,
}

/// `|⟨U ψ_in | ψ_out⟩|²`.
pub fn gate_fidelity(
    psi_in: &StateVector,
    u_ideal: &Operator,
    psi_out: &StateVector,
) -> Result<FidelityEstimate> {
    let ideal = StateVector::from_amplitudes(psi_in.n_qubits(), u_ideal.apply(psi_in)?)?;
    Ok(FidelityEstimate {
        fidelity: fidelity_overlap(&ideal, psi_out)?,
        eta_dispersion: None,
        epsilon: None,
    })
}

/// `⟨A²⟩ − ⟨A⟩²` for Hermitian `A`.
pub fn dispersion(psi: &StateVector, a: &Operator) -> Result<f64> {
    let mean = psi.expectation(a)?;
    let sq = psi.expectation(&(a * a))?;
    Ok((sq - mean * mean).max(0.0))
}

/// `F ≈ 1 − ε²⟨Δη²⟩` with `η = H̄⁽¹⁾τ/ε`.
pub fn fidelity_perturbative(
    psi_in: &StateVector,
    h1_bar: &Operator,
    tau: f64,
    epsilon: f64,
) -> Result<FidelityEstimate> {
    if !(epsilon >= 0.0) || !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need ε ≥ 0 and τ > 0, got ε = {epsilon}, τ = {tau}"
        )));
    }
    if h1_bar.dim() != psi_in.dim() {
        return Err(Error::Dimension {
            expected: psi_in.dim(),
            found: h1_bar.dim(),
        });
    }
    let strength = h1_bar.max_abs() * tau;
    if strength > PERTURBATIVE_LIMIT {
        log::warn!("‖H̄⁽¹⁾τ‖ = {strength:.3} is not small; the quadratic estimate may be poor");
    }
    if epsilon == 0.0 {
        return Ok(FidelityEstimate {
            fidelity: 1.0,
            eta_dispersion: None,
            epsilon: Some(0.0),
        });
    }
    let eta = h1_bar.scale_real(tau / epsilon);
    let d = dispersion(psi_in, &eta)?;
    Ok(FidelityEstimate {
        fidelity: 1.0 - epsilon * epsilon * d,
        eta_dispersion: Some(d),
        epsilon: Some(epsilon),
    })
}

/// First-order error generator of a finite-ramp evolution relative to its
/// sharp limit, in the frame of the sharp evolution:
/// `Ω = ∫ U₀(t)† [H_ε(t) − H₀(t)] U₀(t) dt`, so that `U_ε ≈ U₀(T) e^{−iΩ}`.
///
/// `sharp` must be piecewise constant between its breakpoints.
/// `Ω/T` plays the role of `H̄⁽¹⁾` in [`fidelity_perturbative`] with `τ = T`,
/// giving `1 − F ≈ ⟨ΔΩ²⟩`.
pub fn error_generator<H, S>(
    smooth: &H,
    sharp: &S,
    t0: f64,
    t1: f64,
    cfg: &QuadratureConfig,
) -> Result<Operator>
where
    H: HamiltonianFn + ?Sized,
    S: HamiltonianFn + ?Sized,
{
    if smooth.n_qubits() != sharp.n_qubits() {
        return Err(Error::Dimension {
            expected: sharp.dim(),
            found: smooth.dim(),
        });
    }
    if !(t1 > t0) {
        return Err(Error::InvalidParameter("empty interval".into()));
    }
    let nq = sharp.n_qubits();
    let edges = piece_edges(sharp, t0, t1);

    struct Piece {
        lo: f64,
        hi: f64,
        h: Operator,
        values: Vec<f64>,
        vectors: Operator,
        start: Operator,
    }
    let mut pieces = Vec::with_capacity(edges.len() - 1);
    let mut u = Operator::identity(nq)?;
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let h = sharp.eval(0.5 * (lo + hi));
        let (values, vectors) = hermitian_eigen(&h)?;
        let next = &expm_from_eigen(&values, &vectors, hi - lo) * &u;
        pieces.push(Piece {
            lo,
            hi,
            h,
            values,
            vectors,
            start: u,
        });
        u = next;
    }

    let sample = |p: &Piece, t: f64| -> Operator {
        let t = inside(t, p.lo, p.hi);
        let delta = &smooth.eval(t) - &p.h;
        let u0 = &expm_from_eigen(&p.values, &p.vectors, t - p.lo) * &p.start;
        &(&u0.adjoint() * &delta) * &u0
    };
    // Also accumulates ∫‖integrand‖, the scale for the convergence test: Ω
    // itself can be far smaller than its contributions when they cancel.
    let add = |acc: &mut Operator, mass: &mut f64, term: &Operator, w: f64| {
        acc.as_mut_slice()
            .iter_mut()
            .zip(term.as_slice())
            .for_each(|(o, v)| *o += v * w);
        *mass += term.max_abs() * w;
    };

    // Trapezoid sums refined by halving; Simpson follows by Richardson
    // extrapolation, so each level only evaluates the new midpoints.
    let mut n = cfg.intervals.max(2);
    n += n % 2;
    let mut trap = Operator::zeros(nq)?;
    let mut mass = 0.0;
    for p in &pieces {
        let step = (p.hi - p.lo) / n as f64;
        for k in 0..=n {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            add(
                &mut trap,
                &mut mass,
                &sample(p, p.lo + k as f64 * step),
                w * step,
            );
        }
    }
    let mut prev: Option<Operator> = None;
    let mut change = f64::INFINITY;
    for _ in 0..=cfg.max_levels {
        let mut mid = Operator::zeros(nq)?;
        let mut mid_mass = 0.0;
        for p in &pieces {
            let step = (p.hi - p.lo) / n as f64;
            for k in 0..n {
                add(
                    &mut mid,
                    &mut mid_mass,
                    &sample(p, p.lo + (k as f64 + 0.5) * step),
                    0.5 * step,
                );
            }
        }
        let refined = &trap.scale_real(0.5) + &mid;
        let simpson = (&refined.scale_real(4.0) - &trap).scale_real(1.0 / 3.0);
        trap = refined;
        mass = 0.5 * mass + mid_mass;
        n *= 2;
        if let Some(prev) = &prev {
            let scale = simpson.max_abs().max(mass).max(1e-300);
            change = simpson.distance(prev) / scale;
            if change < cfg.rel_tol {
                // Symmetrize away quadrature round-off.
                return Ok((&simpson + &simpson.adjoint()).scale_real(0.5));
            }
        }
        prev = Some(simpson);
    }
    Err(Error::QuadratureNotConverged {
        levels: cfg.max_levels,
        change,
    })
}

/// `|⟨e^{−iΩ}⟩_ψ|²`, the fidelity implied by an error generator without
/// expanding the exponential.
pub fn generator_fidelity(psi_in: &StateVector, omega: &Operator) -> Result<f64> {
    let (values, vectors) = hermitian_eigen(omega)?;
    let u = expm_from_eigen(&values, &vectors, 1.0);
    let out = u.apply(psi_in)?;
    let overlap: Complex64 = psi_in
        .amplitudes()
        .iter()
        .zip(&out)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(overlap.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Model;
    use crate::integrator::{evolve_final, reference_expm, IntegratorConfig};
    use crate::pulse::{ControlId, ParamSchedule, RectPulse, Schedule};
    use crate::qcore::{embed_pauli, Axis};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gate_fidelity_extremes() {
        let x = embed_pauli(Axis::X, 0, 1).unwrap();
        let psi = StateVector::basis(1, 0).unwrap();
        let out = StateVector::basis(1, 1).unwrap();
        assert!((gate_fidelity(&psi, &x, &out).unwrap().fidelity - 1.0).abs() < 1e-15);
        assert!(gate_fidelity(&psi, &x, &psi).unwrap().fidelity < 1e-15);
        let three = StateVector::basis(2, 0).unwrap();
        assert!(gate_fidelity(&psi, &x, &three).is_err());
    }

    #[test]
    fn perturbative_special_cases() {
        let z = embed_pauli(Axis::Z, 0, 1).unwrap().scale_real(0.01);
        let psi = StateVector::basis(1, 0).unwrap();
        let est = fidelity_perturbative(&psi, &z, 2.0, 0.1).unwrap();
        assert!((est.fidelity - 1.0).abs() < 1e-15);
        let plus = StateVector::new(1, vec![c(0.5f64.sqrt(), 0.0), c(0.5f64.sqrt(), 0.0)]).unwrap();
        let est = fidelity_perturbative(&plus, &z, 2.0, 0.1).unwrap();
        // η = 0.2 Z, ⟨Δη²⟩ = 0.04, ε² = 0.01.
        assert!((est.eta_dispersion.unwrap() - 0.04).abs() < 1e-15);
        assert!((est.fidelity - (1.0 - 4e-4)).abs() < 1e-15);
        assert_eq!(
            fidelity_perturbative(&plus, &z, 2.0, 0.0).unwrap().fidelity,
            1.0
        );
    }

    #[test]
    fn error_generator_predicts_fidelity() {
        // Two non-commuting pulses touching each other: the ramp overlap is
        // what the generator must capture.
        let mut bx = ParamSchedule::new(ControlId::Bx(0), 1.0);
        bx.pulses.push(RectPulse::new(1.0, 2.0, 0.05, 1.0).unwrap());
        let mut bz = ParamSchedule::new(ControlId::Bz(0), 1.0);
        bz.pulses.push(RectPulse::new(2.0, 3.0, 0.05, 1.0).unwrap());
        let s = Schedule::new(vec![bx, bz], 4.0);
        let model = Model::ideal(1);
        let smooth = model.hamiltonian(&s).unwrap();
        let sharp = model.hamiltonian(&s.ideal_limit()).unwrap();
        let omega = error_generator(
            &smooth,
            &sharp,
            0.0,
            4.0,
            &QuadratureConfig::for_epsilon(0.05, 4.0),
        )
        .unwrap();
        assert!(omega.hermiticity_error() < 1e-14);

        let psi = StateVector::basis(1, 0).unwrap();
        let cfg = IntegratorConfig::with_dt(1e-3);
        let (out, _) = evolve_final(&psi, &smooth, 0.0, 4.0, &cfg).unwrap();
        let u0 = &reference_expm(&sharp.eval(2.5), 1.0).unwrap()
            * &reference_expm(&sharp.eval(1.5), 1.0).unwrap();
        let f_sim = gate_fidelity(&psi, &u0, &out).unwrap().fidelity;
        let f_pert = fidelity_perturbative(&psi, &omega.scale_real(1.0 / 4.0), 4.0, 0.05)
            .unwrap()
            .fidelity;
        assert!(1.0 - f_sim > 1e-8);
        assert!((f_sim - f_pert).abs() < 0.05 * (1.0 - f_sim));
        assert!((generator_fidelity(&psi, &omega).unwrap() - f_sim).abs() < 0.05 * (1.0 - f_sim));
    }

    proptest! {
        #[test]
        fn perturbative_never_exceeds_one(
            a in -0.1f64..0.1, b in -0.1f64..0.1, eps in 0.0f64..0.5, theta in 0.0f64..3.0
        ) {
            let h1 = &embed_pauli(Axis::X, 0, 1).unwrap().scale_real(a) + &embed_pauli(Axis::Z, 0, 1).unwrap().scale_real(b);
            let psi = StateVector::new(1, vec![c(theta.cos(), 0.0), c(0.0, theta.sin())]).unwrap();
            let est = fidelity_perturbative(&psi, &h1, 1.0, eps).unwrap();
            prop_assert!(est.fidelity <= 1.0);
        }
    }
}
