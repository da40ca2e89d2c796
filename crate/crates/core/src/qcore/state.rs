use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::check_register;
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-9;

/// Pure state of an `N`-qubit register in the computational basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state, rejecting wrong lengths and norms off by more than 1e-9.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_amplitudes(n_qubits, amplitudes)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Like [`StateVector::new`] but without the norm check. Integrator
    /// output goes through here so that norm drift stays observable.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = check_register(n_qubits)?;
        if amplitudes.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = check_register(n_qubits)?;
        if index >= dim {
            return Err(Error::Dimension {
                expected: dim,
                found: index,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Basis state from a bit string such as `"10"` (first character is qubit 0).
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.chars().count();
        let mut index = 0;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "basis label `{bits}` contains `{other}`"
                    )))
                }
            }
        }
        Self::basis(n, index)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|op|self⟩` for a Hermitian `op` (real part).
    pub fn expectation(&self, op: &super::Operator) -> Result<f64> {
        let v = op.apply(self)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re)
    }
}

/// Squared overlap `|⟨φ|ψ⟩|²`. Insensitive to the global phase of either state.
pub fn fidelity_overlap(phi: &StateVector, psi: &StateVector) -> Result<f64> {
    if phi.dim() != psi.dim() {
        return Err(Error::Dimension {
            expected: phi.dim(),
            found: psi.dim(),
        });
    }
    let inner: Complex64 = phi
        .amplitudes
        .iter()
        .zip(&psi.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(inner.norm_sqr())
}
