//! Pulse-level simulation of small registers of superconducting charge qubits.
//!
//! The crate covers the whole path from control pulses to gate error:
//!
//! * [`qcore`]: state vectors, dense operators and Pauli algebra (N ≤ 4).
//! * [`device`]: physical device parameters mapped to control energies.
//! * [`pulse`]: tanh kink/anti-kink rectangular pulses and schedules.
//! * [`hamiltonian`]: time-dependent Hamiltonians of the ideal and the charge-qubit model.
//! * [`integrator`]: fixed-step RK4 propagation and an eigendecomposition oracle.
//! * [`gatecomp`]: analytic gate matrices and CNOT/CPF pulse compilation.
//! * [`analysis`]: Magnus terms, gate fidelity and rise-time sweeps.
//!
//! Units: ħ = 1 and energies are expressed in a reference energy (by default
//! the Josephson energy E_J), so times are in units of ħ/E_ref.
//!
//! Basis states are labelled `|q_1 q_2 … q_N⟩` with qubit 0 (the first qubit)
//! as the most significant bit of the basis index.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod device;
pub mod error;
pub mod gatecomp;
pub mod hamiltonian;
pub mod integrator;
pub mod par;
pub mod pulse;
pub mod qcore;

pub use error::{Error, Result};
pub use num_complex::Complex64;
