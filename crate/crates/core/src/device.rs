//! Physical device parameters and the control energies they produce.
//!
//! All functions here work in SI units. The simulator itself never needs
//! them: it accepts dimensionless [`ControlEnergies`] directly, and
//! [`UnitSystem`] converts between the two.
//!
//! The flux quantum follows the convention `Φ_0 = ħ/2e`. Only the ratio
//! `Φ_X/Φ_0` enters [`effective_josephson`], so the convention matters only
//! for [`coupling_energy`].

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Elementary charge in coulombs.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Reduced Planck constant in J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Reduced Planck constant in μeV·ps.
pub const HBAR_UEV_PS: f64 = 0.658_211_956_9;
/// Flux quantum `ħ/2e` in webers.
pub const FLUX_QUANTUM: f64 = HBAR / (2.0 * ELEMENTARY_CHARGE);

/// `E_J/E_C` above which the two-charge-state picture is flagged.
const REGIME_RATIO: f64 = 0.1;

/// Gate-voltage controlled charging energy `4·E_C·(C_g·V_g/e − 1)`.
///
/// Zero at the degeneracy point `C_g·V_g = e`; negative below it.
pub fn gate_charge_energy(e_c_single: f64, c_g: f64, v_g: f64) -> f64 {
    4.0 * e_c_single * (c_g * v_g / ELEMENTARY_CHARGE - 1.0)
}

/// Flux-tuned Josephson energy `2·E_J⁰·cos(π·Φ_X/Φ_0)` of a SQUID-split box.
pub fn effective_josephson(e_j0: f64, flux_over_quantum: f64) -> f64 {
    2.0 * e_j0 * (std::f64::consts::PI * flux_over_quantum).cos()
}

/// LC-circuit coupling scale `E_L = Φ_0²/(π²L)·(2C_J⁰/C_qb)²`,
/// with `1/C_qb = 1/(2C_J⁰) + 1/C_g`.
pub fn coupling_energy(inductance: f64, c_j0: f64, c_g: f64) -> Result<f64> {
    for (name, v) in [("inductance", inductance), ("C_J0", c_j0), ("C_g", c_g)] {
        if !(v > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    let c_qb = 1.0 / (1.0 / (2.0 * c_j0) + 1.0 / c_g);
    let ratio = 2.0 * c_j0 / c_qb;
    Ok(FLUX_QUANTUM.powi(2) / (std::f64::consts::PI.powi(2) * inductance) * ratio * ratio)
}

/// Physical parameters of a register of identical Cooper-pair boxes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    /// Single-box charging energy `e²/2(C_g + 2C_J⁰)` in joules.
    pub e_c_single: f64,
    /// Single-junction Josephson energy in joules.
    pub e_j0: f64,
    /// Gate capacitance in farads.
    pub c_g: f64,
    /// Junction capacitance in farads.
    pub c_j0: f64,
    /// Common inductance in henries.
    pub inductance: f64,
    /// Energy unit used for nondimensionalization, in joules.
    pub reference_energy: f64,
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("e_c_single", self.e_c_single),
            ("e_j0", self.e_j0),
            ("c_g", self.c_g),
            ("c_j0", self.c_j0),
            ("inductance", self.inductance),
            ("reference_energy", self.reference_energy),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn coupling_energy(&self) -> Result<f64> {
        coupling_energy(self.inductance, self.c_j0, self.c_g)
    }

    /// Regime notes. The two-state truncation wants `E_J ≪ E_C`; violating
    /// it is reported, never rejected.
    pub fn regime_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let max_ej = 2.0 * self.e_j0;
        if max_ej > REGIME_RATIO * self.e_c_single {
            out.push(format!(
                "E_J/E_C = {:.3} is not small; the two-charge-state model may be inaccurate",
                max_ej / self.e_c_single
            ));
        }
        out
    }
}

/// Control energies in the units the simulator uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlEnergies {
    /// σ_z drive amplitude per qubit.
    pub e_c: Vec<f64>,
    /// σ_x drive amplitude per qubit.
    pub e_j: Vec<f64>,
    /// Coupling scale; required once any two-qubit coupling is scheduled.
    pub e_l: Option<f64>,
}

impl ControlEnergies {
    /// `E_int = E_Ji·E_Jj/E_L` for a pair.
    pub fn interaction_energy(&self, i: usize, j: usize) -> Result<f64> {
        let e_l = self
            .e_l
            .filter(|&v| v > 0.0)
            .ok_or_else(|| Error::InvalidParameter("E_L must be positive for coupling".into()))?;
        let ej = |q: usize| {
            self.e_j.get(q).copied().ok_or(Error::QubitIndex {
                index: q,
                n_qubits: self.e_j.len(),
            })
        };
        Ok(ej(i)? * ej(j)? / e_l)
    }

    pub fn nondimensionalize(&self, units: &UnitSystem) -> Self {
        Self {
            e_c: self.e_c.iter().map(|&e| units.energy(e)).collect(),
            e_j: self.e_j.iter().map(|&e| units.energy(e)).collect(),
            e_l: self.e_l.map(|e| units.energy(e)),
        }
    }

    pub fn redimensionalize(&self, units: &UnitSystem) -> Self {
        Self {
            e_c: self.e_c.iter().map(|&e| units.energy_back(e)).collect(),
            e_j: self.e_j.iter().map(|&e| units.energy_back(e)).collect(),
            e_l: self.e_l.map(|e| units.energy_back(e)),
        }
    }
}

/// `ħ = 1` unit system with energies measured in `reference_energy`.
///
/// The reference energy and `hbar` must share an energy unit (joules with
/// [`HBAR`], μeV with [`HBAR_UEV_PS`] and times in ps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    reference_energy: f64,
    hbar: f64,
}

impl UnitSystem {
    pub fn new(reference_energy: f64) -> Result<Self> {
        Self::with_hbar(reference_energy, HBAR)
    }

    pub fn with_hbar(reference_energy: f64, hbar: f64) -> Result<Self> {
        if !(reference_energy > 0.0) || !reference_energy.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "reference energy must be positive, got {reference_energy}"
            )));
        }
        Ok(Self {
            reference_energy,
            hbar,
        })
    }

    pub fn reference_energy(&self) -> f64 {
        self.reference_energy
    }

    pub fn energy(&self, e: f64) -> f64 {
        e / self.reference_energy
    }

    pub fn energy_back(&self, e: f64) -> f64 {
        e * self.reference_energy
    }

    /// Physical time to units of `ħ/E_ref`.
    pub fn time(&self, t: f64) -> f64 {
        t * self.reference_energy / self.hbar
    }

    pub fn time_back(&self, t: f64) -> f64 {
        t * self.hbar / self.reference_energy
    }
}
