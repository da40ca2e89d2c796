//! Gate matrices, the coupling solver, and compilation of gates into
//! pulse schedules for both register models.

mod coupling;
mod matrices;
mod program;

pub use coupling::{solve_coupling, CouplingParams, DEFAULT_M, DEFAULT_N};
pub use matrices::{
    cnot_matrix, cpf_matrix, embed_pair, embed_single, hadamard_matrix, u2b, u_ph_analytic,
    u_ph_closed_form, u_ph_prime,
};
pub use program::{
    charge_cnot_program, cnot_program, cpf_program, hadamard_program, ideal_cnot_program,
    rotation_program, u2b_program, u_ph_program, Amplitudes, Compiler, Drive, GateProgram,
    GateSpec, ModelKind, PulseOptions, Segment, TimingRow, COMPILE_TOLERANCE,
};
