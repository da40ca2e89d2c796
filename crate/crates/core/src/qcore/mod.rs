//! State vectors, dense operators and Pauli algebra for registers of up to
//! [`MAX_QUBITS`] qubits.
//!
//! Basis index convention: `m = 2^{N-1} q_1 + … + 2^0 q_N`, so qubit index 0
//! is the most significant bit. `σ_z|0⟩ = +|0⟩`.

mod operator;
mod pauli;
mod state;

pub(crate) use operator::matvec as operator_matvec;
pub use operator::Operator;
pub use pauli::{embed_pauli, pauli_exp, pauli_term_matrix, Axis, PauliTerm};
pub use state::{fidelity_overlap, StateVector};

use crate::{Error, Result};

/// Largest register the dense representation supports.
pub const MAX_QUBITS: usize = 4;

pub(crate) fn check_register(n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::RegisterSize(n_qubits));
    }
    Ok(1 << n_qubits)
}

pub(crate) fn check_qubit(index: usize, n_qubits: usize) -> Result<()> {
    if index >= n_qubits {
        return Err(Error::QubitIndex { index, n_qubits });
    }
    Ok(())
}

/// Bit value of `qubit` in basis index `m` of an `n_qubits` register.
#[inline]
pub fn qubit_bit(m: usize, qubit: usize, n_qubits: usize) -> usize {
    (m >> (n_qubits - 1 - qubit)) & 1
}

/// Basis label such as `"10"` for index 2 of a two-qubit register.
pub fn basis_label(m: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| {
            if qubit_bit(m, q, n_qubits) == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}
