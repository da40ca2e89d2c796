//! Average-Hamiltonian terms, gate fidelity, rise-time sweeps and the
//! physical timescale report.

mod fidelity;
mod magnus;
mod sweep;
mod timescale;

pub use fidelity::{
    dispersion, error_generator, fidelity_perturbative, gate_fidelity, generator_fidelity,
    FidelityEstimate, PERTURBATIVE_LIMIT,
};
pub use magnus::{
    linear_ramp_h1_closed_form, linear_ramp_h1_single_count, linear_ramp_hamiltonian, magnus_h0,
    magnus_h1, magnus_terms, relative_deviation, MagnusTerms, QuadratureConfig,
};
pub use sweep::{
    fit_quadratic, linear_fit, loglog_slope, simulate_point, sweep_rise_time, PowerFit,
    SweepOptions, SweepPoint, SweepRecord, MIN_SWEEP_POINTS, NOISE_FLOOR, RIPPLE_TOLERANCE,
};
pub use timescale::{timescale_report, TimescaleReport, EXPERIMENTAL_RISE_PS, QUOTED_GATE_TIME_PS};
