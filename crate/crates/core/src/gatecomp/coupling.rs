//! Coupling-parameter solver for the charge-qubit two-qubit gate.
//!
//! With `φ = E_int τ = (π/4)(2m−1)` and `θ = √(1+a²) E_int τ = nπ`,
//! `a = E_L/E_J = √((4n/(2m−1))² − 1)` and
//! `τ = (π/4)√((4n)² − (2m−1)²)` in units of `ħ/E_J`.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_M: i64 = 1;
pub const DEFAULT_N: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub m: i64,
    pub n: i64,
    /// `E_L / E_J`.
    pub ratio: f64,
    /// Coupling time in units of `ħ/E_J`.
    pub tau: f64,
    pub phi: f64,
    pub theta: f64,
}

impl CouplingParams {
    /// `E_int τ` (with `E_J = 1`), recomputed from ratio and τ.
    pub fn phi_from_ratio(&self) -> f64 {
        self.tau / self.ratio
    }

    /// `√(1+a²) E_int τ`, recomputed from ratio and τ.
    pub fn theta_from_ratio(&self) -> f64 {
        (1.0 + self.ratio * self.ratio).sqrt() * self.tau / self.ratio
    }

    /// `E_L` for a given `E_J`.
    pub fn e_l(&self, e_j: f64) -> f64 {
        self.ratio * e_j
    }

    /// Coupling time for a given `E_J`, in `ħ/E_ref`.
    pub fn duration(&self, e_j: f64) -> f64 {
        self.tau / e_j
    }
}

pub fn solve_coupling(m: i64, n: i64) -> Result<CouplingParams> {
    let unsolvable = |reason: &str| Error::UnsolvableCoupling {
        m,
        n,
        reason: reason.into(),
    };
    if m < 1 {
        return Err(unsolvable("m must be at least 1"));
    }
    if n == 0 {
        return Err(unsolvable("n = 0 gives no coupling"));
    }
    let odd = (2 * m - 1) as f64;
    let four_n = 4.0 * n as f64;
    let q = four_n / odd;
    if q * q <= 1.0 {
        return Err(unsolvable("(4n/(2m−1))² must exceed 1"));
    }
    Ok(CouplingParams {
        m,
        n,
        ratio: (q * q - 1.0).sqrt(),
        tau: FRAC_PI_4 * (four_n * four_n - odd * odd).sqrt(),
        phi: FRAC_PI_4 * odd,
        theta: n as f64 * PI,
    })
}
