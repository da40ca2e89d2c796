//! Analytic gate matrices.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::coupling::CouplingParams;
use crate::hamiltonian::ry_frame;
use crate::qcore::{check_qubit, check_register, qubit_bit, Operator};
use crate::{Error, Result};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn distinct(i: usize, j: usize, n: usize) -> Result<()> {
    check_qubit(i, n)?;
    check_qubit(j, n)?;
    if i == j {
        return Err(Error::InvalidParameter(format!(
            "operand collision: both qubits are {i}"
        )));
    }
    Ok(())
}

/// Permutation flipping qubit `j` when qubit `i` is 1.
pub fn cnot_matrix(i: usize, j: usize, n_qubits: usize) -> Result<Operator> {
    let dim = check_register(n_qubits)?;
    distinct(i, j, n_qubits)?;
    let mut u = Operator::zeros(n_qubits)?;
    let flip = 1 << (n_qubits - 1 - j);
    for m in 0..dim {
        let out = if qubit_bit(m, i, n_qubits) == 1 {
            m ^ flip
        } else {
            m
        };
        u.set(out, m, c(1.0, 0.0));
    }
    Ok(u)
}

/// Controlled phase flip: `−1` on states with both qubits set.
pub fn cpf_matrix(i: usize, j: usize, n_qubits: usize) -> Result<Operator> {
    let dim = check_register(n_qubits)?;
    distinct(i, j, n_qubits)?;
    let diag: Vec<Complex64> = (0..dim)
        .map(|m| {
            let both = qubit_bit(m, i, n_qubits) & qubit_bit(m, j, n_qubits);
            c(if both == 1 { -1.0 } else { 1.0 }, 0.0)
        })
        .collect();
    Operator::diagonal(n_qubits, &diag)
}

/// Two-qubit exchange rotation: identity on `{|00⟩,|11⟩}`,
/// `[[cos γ, i sin γ],[i sin γ, cos γ]]` on `{|01⟩,|10⟩}`.
pub fn u2b(gamma: f64) -> Operator {
    let (s, co) = gamma.sin_cos();
    let one = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    Operator::from_rows(
        2,
        &[
            vec![one, z, z, z],
            vec![z, c(co, 0.0), c(0.0, s), z],
            vec![z, c(0.0, s), c(co, 0.0), z],
            vec![z, z, z, one],
        ],
    )
    .expect("4×4")
}

/// `(σ_x + σ_z)/√2` on qubit `q`.
pub fn hadamard_matrix(q: usize, n_qubits: usize) -> Result<Operator> {
    let h = Operator::from_rows(
        1,
        &[
            vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
            vec![c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
        ],
    )?;
    embed_single(&h, q, n_qubits)
}

/// Basic two-qubit gate in the form `½[[1+e^{iφ},0,0,1−e^{iφ}], …]`.
///
/// This is the propagator of the coupled Hamiltonian only when `θ = nπ`
/// with `n` even; for odd `n` the `{|00⟩,|11⟩}` block picks up an extra
/// sign, see [`u_ph_closed_form`].
pub fn u_ph_analytic(phi: f64) -> Operator {
    let e = Complex64::from_polar(1.0, phi);
    let em = e.conj();
    let one = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    Operator::from_rows(
        2,
        &[
            vec![(one + e) * 0.5, z, z, (one - e) * 0.5],
            vec![z, (one + em) * 0.5, (one - em) * 0.5, z],
            vec![z, (one - em) * 0.5, (one + em) * 0.5, z],
            vec![(one - e) * 0.5, z, z, (one + e) * 0.5],
        ],
    )
    .expect("4×4")
}

/// `exp(−i H′_ph τ)` in the rotated frame, written in closed form.
pub fn u_ph_prime(params: &CouplingParams) -> Operator {
    let a = params.ratio;
    let norm = (1.0 + a * a).sqrt();
    let (nz, nx) = (a / norm, 1.0 / norm);
    let (st, ct) = params.theta.sin_cos();
    let (sp, cp) = params.phi.sin_cos();
    let z = c(0.0, 0.0);
    Operator::from_rows(
        2,
        &[
            vec![c(ct, nz * st), z, z, c(0.0, -nx * st)],
            vec![z, c(cp, 0.0), c(0.0, sp), z],
            vec![z, c(0.0, sp), c(cp, 0.0), z],
            vec![c(0.0, -nx * st), z, z, c(ct, -nz * st)],
        ],
    )
    .expect("4×4")
}

/// `R_y U′_ph R_y†`, valid for any `(m, n)`.
pub fn u_ph_closed_form(params: &CouplingParams) -> Operator {
    let r = ry_frame();
    &(&r * &u_ph_prime(params)) * &r.adjoint()
}

/// Places a one-qubit operator on qubit `q`.
pub fn embed_single(op: &Operator, q: usize, n_qubits: usize) -> Result<Operator> {
    if op.n_qubits() != 1 {
        return Err(Error::Dimension {
            expected: 2,
            found: op.dim(),
        });
    }
    embed(op, &[q], n_qubits)
}

/// Places a two-qubit operator on qubits `(i, j)`; `i` plays the role of
/// the operator's first (most significant) qubit.
pub fn embed_pair(op: &Operator, i: usize, j: usize, n_qubits: usize) -> Result<Operator> {
    if op.n_qubits() != 2 {
        return Err(Error::Dimension {
            expected: 4,
            found: op.dim(),
        });
    }
    distinct(i, j, n_qubits)?;
    embed(op, &[i, j], n_qubits)
}

fn embed(op: &Operator, qubits: &[usize], n_qubits: usize) -> Result<Operator> {
    let dim = check_register(n_qubits)?;
    for &q in qubits {
        check_qubit(q, n_qubits)?;
    }
    let k = qubits.len();
    let local = |m: usize| {
        qubits
            .iter()
            .fold(0, |acc, &q| (acc << 1) | qubit_bit(m, q, n_qubits))
    };
    let mask: usize = qubits.iter().map(|&q| 1 << (n_qubits - 1 - q)).sum();
    let mut out = Operator::zeros(n_qubits)?;
    for r in 0..dim {
        for col in 0..dim {
            if r & !mask != col & !mask {
                continue;
            }
            let v = op.get(local(r), local(col));
            if v != c(0.0, 0.0) {
                out.set(r, col, v);
            }
        }
    }
    debug_assert_eq!(op.dim(), 1 << k);
    Ok(out)
}
