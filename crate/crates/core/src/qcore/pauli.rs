use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_qubit, check_register, qubit_bit, Operator};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// `σ_axis` acting on `qubit`, identity elsewhere.
///
/// Entries are written directly from the bit pattern of each basis index, so
/// the result is exact (entries in {0, ±1, ±i}).
pub fn embed_pauli(axis: Axis, qubit: usize, n_qubits: usize) -> Result<Operator> {
    let dim = check_register(n_qubits)?;
    check_qubit(qubit, n_qubits)?;
    let mut op = Operator::zeros(n_qubits)?;
    let flip = 1 << (n_qubits - 1 - qubit);
    for col in 0..dim {
        let bit = qubit_bit(col, qubit, n_qubits);
        let (row, value) = match axis {
            Axis::X => (col ^ flip, Complex64::new(1.0, 0.0)),
            // σ_y|0⟩ = i|1⟩, σ_y|1⟩ = −i|0⟩
            Axis::Y => (
                col ^ flip,
                if bit == 0 {
                    Complex64::new(0.0, 1.0)
                } else {
                    Complex64::new(0.0, -1.0)
                },
            ),
            Axis::Z => (
                col,
                if bit == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                },
            ),
        };
        op.set(row, col, value);
    }
    Ok(op)
}

/// `exp(i·alpha·σ_axis)` on `qubit` = `cos(alpha)·I + i·sin(alpha)·σ_axis`.
pub fn pauli_exp(axis: Axis, qubit: usize, n_qubits: usize, alpha: f64) -> Result<Operator> {
    let sigma = embed_pauli(axis, qubit, n_qubits)?;
    let id = Operator::identity(n_qubits)?;
    Ok(&id.scale_real(alpha.cos()) + &sigma.scale(Complex64::new(0.0, alpha.sin())))
}

/// A real coefficient times a product of single-qubit Pauli factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    factors: BTreeMap<usize, Axis>,
}

impl PauliTerm {
    /// Builds a term; a repeated qubit index keeps the last axis given.
    pub fn new(coefficient: f64, factors: impl IntoIterator<Item = (usize, Axis)>) -> Self {
        Self {
            coefficient,
            factors: factors.into_iter().collect(),
        }
    }

    pub fn factors(&self) -> &BTreeMap<usize, Axis> {
        &self.factors
    }

    /// Coefficient times the product of embedded factors. Hermitian.
    pub fn matrix(&self, n_qubits: usize) -> Result<Operator> {
        let mut acc = Operator::identity(n_qubits)?;
        for (&qubit, &axis) in &self.factors {
            acc = &acc * &embed_pauli(axis, qubit, n_qubits)?;
        }
        Ok(acc.scale_real(self.coefficient))
    }
}

/// Matrix of a [`PauliTerm`] on an `n_qubits` register.
pub fn pauli_term_matrix(term: &PauliTerm, n_qubits: usize) -> Result<Operator> {
    term.matrix(n_qubits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::StateVector;
    use crate::Error;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_z() {
        let z = embed_pauli(Axis::Z, 0, 1).unwrap();
        assert_eq!(z.diag(), vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(z.is_diagonal(0.0));
    }

    #[test]
    fn x_on_first_qubit_swaps_blocks() {
        let x = embed_pauli(Axis::X, 0, 2).unwrap();
        let v = x.apply(&StateVector::from_bits("11").unwrap()).unwrap();
        assert_eq!(v, StateVector::from_bits("01").unwrap().into_amplitudes());
        for (from, to) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
            assert_eq!(x.get(to, from), c(1.0, 0.0));
        }
    }

    #[test]
    fn y_on_second_qubit() {
        // (I ⊗ σ_y)|00⟩ = i|01⟩, by explicit Kronecker product.
        let y1 = Operator::from_rows(
            1,
            &[
                vec![c(0.0, 0.0), c(0.0, -1.0)],
                vec![c(0.0, 1.0), c(0.0, 0.0)],
            ],
        )
        .unwrap();
        let kron = Operator::identity(1).unwrap().kron(&y1).unwrap();
        let embedded = embed_pauli(Axis::Y, 1, 2).unwrap();
        assert_eq!(kron, embedded);
        let out = embedded.apply(&StateVector::basis(2, 0).unwrap()).unwrap();
        assert_eq!(
            out,
            vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            embed_pauli(Axis::X, 2, 2),
            Err(Error::QubitIndex {
                index: 2,
                n_qubits: 2
            })
        ));
    }

    #[test]
    fn yy_term_is_signed_antidiagonal() {
        let term = PauliTerm::new(1.0, [(0, Axis::Y), (1, Axis::Y)]);
        let m = pauli_term_matrix(&term, 2).unwrap();
        let expected = [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)];
        for r in 0..4 {
            for col in 0..4 {
                let want = expected
                    .iter()
                    .find(|&&(a, b, _)| a == r && b == col)
                    .map_or(0.0, |e| e.2);
                assert_eq!(m.get(r, col), c(want, 0.0), "entry ({r},{col})");
            }
        }
    }

    #[test]
    fn empty_and_scaled_terms() {
        let m = PauliTerm::new(2.5, []).matrix(2).unwrap();
        assert_eq!(m, Operator::identity(2).unwrap().scale_real(2.5));
        let ej = 0.8;
        let m = PauliTerm::new(-ej / 2.0, [(0, Axis::X)]).matrix(2).unwrap();
        assert_eq!(m, embed_pauli(Axis::X, 0, 2).unwrap().scale_real(-ej / 2.0));
    }

    #[test]
    fn algebra_relations() {
        let n = 3;
        let id = Operator::identity(n).unwrap();
        let axes = [Axis::X, Axis::Y, Axis::Z];
        for q in 0..n {
            for a in axes {
                let p = embed_pauli(a, q, n).unwrap();
                assert!((&p * &p).distance(&id) <= 1e-14);
                assert!(p.is_hermitian(0.0));
                for q2 in (0..n).filter(|&q2| q2 != q) {
                    for b in axes {
                        let r = embed_pauli(b, q2, n).unwrap();
                        assert!(p.commutator(&r).max_abs() <= 1e-14);
                    }
                }
            }
            let x = embed_pauli(Axis::X, q, n).unwrap();
            let y = embed_pauli(Axis::Y, q, n).unwrap();
            assert_eq!((&(&x * &y) + &(&y * &x)).max_abs(), 0.0);
        }
    }

    #[test]
    fn pauli_exp_matches_series_definition() {
        let alpha = 0.37;
        let u = pauli_exp(Axis::X, 0, 1, alpha).unwrap();
        assert!((u.get(0, 0) - c(alpha.cos(), 0.0)).norm() < 1e-15);
        assert!((u.get(1, 0) - c(0.0, alpha.sin())).norm() < 1e-15);
        assert!(u.unitarity_error() < 1e-15);
    }
}
