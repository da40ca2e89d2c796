//! Conversion of the natural time unit `ħ/E_J` to picoseconds.

use std::fmt;

use serde::Serialize;

use crate::device::HBAR_UEV_PS;
use crate::{Error, Result};

/// Order-of-magnitude single-qubit time quoted for `E_J ≈ 50 μeV`.
pub const QUOTED_GATE_TIME_PS: f64 = 1.0;
/// Typical pulse rise times at the top of a dilution refrigerator.
pub const EXPERIMENTAL_RISE_PS: (f64, f64) = (30.0, 40.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimescaleReport {
    pub e_j_uev: f64,
    /// `ħ/E_J` in ps.
    pub hbar_over_e_j_ps: f64,
    pub quoted_ps: f64,
    /// `quoted / computed`.
    pub quoted_over_computed: f64,
    pub rise_time_ps: (f64, f64),
    /// Shortest experimental rise time over `ħ/E_J`.
    pub rise_over_gate: f64,
}

pub fn timescale_report(e_j_uev: f64) -> Result<TimescaleReport> {
    if !(e_j_uev > 0.0 && e_j_uev.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "E_J must be positive, got {e_j_uev}"
        )));
    }
    let t = HBAR_UEV_PS / e_j_uev;
    Ok(TimescaleReport {
        e_j_uev,
        hbar_over_e_j_ps: t,
        quoted_ps: QUOTED_GATE_TIME_PS,
        quoted_over_computed: QUOTED_GATE_TIME_PS / t,
        rise_time_ps: EXPERIMENTAL_RISE_PS,
        rise_over_gate: EXPERIMENTAL_RISE_PS.0 / t,
    })
}

impl fmt::Display for TimescaleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "E_J                 = {} μeV", self.e_j_uev)?;
        writeln!(f, "ħ/E_J               = {:.4} ps", self.hbar_over_e_j_ps)?;
        writeln!(
            f,
            "quoted gate time    ≈ {} ps ({:.0}× the computed ħ/E_J)",
            self.quoted_ps, self.quoted_over_computed
        )?;
        writeln!(
            f,
            "experimental rise   = {}–{} ps, {:.0}× ħ/E_J or more",
            self.rise_time_ps.0, self.rise_time_ps.1, self.rise_over_gate
        )?;
        if self.rise_over_gate > 10.0 {
            writeln!(f, "rise times are far longer than the gate timescale")?;
        }
        Ok(())
    }
}
