//! Rectangular control pulses with finite rise/fall time and the schedules
//! built from them.
//!
//! A pulse is a kink/anti-kink pair
//! `P(t) = ½[tanh((t − t_a)/(ε/2)) + tanh((t_b − t)/(ε/2))]`, so the rise
//! (or fall) takes roughly `2ε`. The integral of `P` over the real line is
//! exactly `t_b − t_a` for every `ε`, which is why single-control rotations
//! are insensitive to the ramp shape.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default idle gap between successive pulses, in units of ε.
pub const DEFAULT_IDLE_MARGIN: f64 = 10.0;

/// A schedulable control. Qubit indices are 0-based; the string form uses
/// 1-based labels (`E_J1` is the Josephson energy of qubit 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ControlId {
    Bx(usize),
    By(usize),
    Bz(usize),
    /// Exchange coupling `J_ij`, stored with `i < j`.
    Exchange(usize, usize),
    /// Gate-charge energy `E_Ci` (σ_z drive of the charge model).
    ChargeEnergy(usize),
    /// Josephson energy `E_Ji` (σ_x drive of the charge model).
    Josephson(usize),
}

impl ControlId {
    pub fn exchange(i: usize, j: usize) -> Self {
        ControlId::Exchange(i.min(j), i.max(j))
    }

    /// Largest qubit index the control touches.
    pub fn max_qubit(&self) -> usize {
        match *self {
            ControlId::Bx(q)
            | ControlId::By(q)
            | ControlId::Bz(q)
            | ControlId::ChargeEnergy(q)
            | ControlId::Josephson(q) => q,
            ControlId::Exchange(i, j) => i.max(j),
        }
    }
}

impl fmt::Display for ControlId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ControlId::Bx(q) => write!(f, "B_x{}", q + 1),
            ControlId::By(q) => write!(f, "B_y{}", q + 1),
            ControlId::Bz(q) => write!(f, "B_z{}", q + 1),
            ControlId::Exchange(i, j) => write!(f, "J_{}{}", i + 1, j + 1),
            ControlId::ChargeEnergy(q) => write!(f, "E_C{}", q + 1),
            ControlId::Josephson(q) => write!(f, "E_J{}", q + 1),
        }
    }
}

impl FromStr for ControlId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownControl(s.to_string());
        let qubit = |digits: &str| -> Result<usize> {
            match digits.parse::<usize>() {
                Ok(q) if q >= 1 => Ok(q - 1),
                _ => Err(unknown()),
            }
        };
        if let Some(rest) = s.strip_prefix("B_x") {
            return Ok(ControlId::Bx(qubit(rest)?));
        }
        if let Some(rest) = s.strip_prefix("B_y") {
            return Ok(ControlId::By(qubit(rest)?));
        }
        if let Some(rest) = s.strip_prefix("B_z") {
            return Ok(ControlId::Bz(qubit(rest)?));
        }
        if let Some(rest) = s.strip_prefix("E_C") {
            return Ok(ControlId::ChargeEnergy(qubit(rest)?));
        }
        if let Some(rest) = s.strip_prefix("E_J") {
            return Ok(ControlId::Josephson(qubit(rest)?));
        }
        if let Some(rest) = s.strip_prefix("J_") {
            // single-digit labels ("J_12") or comma separated ("J_1,2")
            let (a, b) = match rest.split_once(',') {
                Some(pair) => pair,
                None if rest.len() == 2 && rest.is_ascii() => rest.split_at(1),
                None => return Err(unknown()),
            };
            let (i, j) = (qubit(a)?, qubit(b)?);
            if i == j {
                return Err(unknown());
            }
            return Ok(ControlId::exchange(i, j));
        }
        Err(unknown())
    }
}

impl TryFrom<String> for ControlId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ControlId> for String {
    fn from(id: ControlId) -> String {
        id.to_string()
    }
}

/// One rectangular pulse with tanh edges centred on `t_a` and `t_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectPulse {
    pub t_a: f64,
    pub t_b: f64,
    pub epsilon: f64,
    pub height: f64,
}

impl RectPulse {
    pub fn new(t_a: f64, t_b: f64, epsilon: f64, height: f64) -> Result<Self> {
        let p = Self {
            t_a,
            t_b,
            epsilon,
            height,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_b > self.t_a) {
            return Err(Error::InvalidPulse(format!(
                "t_b ({}) must exceed t_a ({})",
                self.t_b, self.t_a
            )));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::InvalidPulse(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !self.height.is_finite() {
            return Err(Error::InvalidPulse("height must be finite".into()));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.t_b - self.t_a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.t_a + self.t_b)
    }

    /// Whether the plateau is reached: width above `2ε`.
    pub fn is_full_on(&self) -> bool {
        self.width() > 2.0 * self.epsilon
    }

    /// Unit-height envelope `P(t)`.
    #[inline]
    pub fn envelope(&self, t: f64) -> f64 {
        let half = 0.5 * self.epsilon;
        0.5 * (((t - self.t_a) / half).tanh() + ((self.t_b - t) / half).tanh())
    }

    /// ε → 0 limit: 1 inside, ½ on the edges, 0 outside.
    #[inline]
    pub fn sharp_envelope(&self, t: f64) -> f64 {
        if t > self.t_a && t < self.t_b {
            1.0
        } else if t == self.t_a || t == self.t_b {
            0.5
        } else {
            0.0
        }
    }

    /// `height · P(t)`.
    pub fn value(&self, t: f64) -> f64 {
        self.height * self.envelope(t)
    }
}

/// `height · P(t)` for a pulse.
pub fn rect_value(p: &RectPulse, t: f64) -> f64 {
    p.value(t)
}

/// Pulse train for one control: `base_amplitude · Σ height·P(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSchedule {
    pub parameter: ControlId,
    pub base_amplitude: f64,
    #[serde(default)]
    pub pulses: Vec<RectPulse>,
}

impl ParamSchedule {
    pub fn new(parameter: ControlId, base_amplitude: f64) -> Self {
        Self {
            parameter,
            base_amplitude,
            pulses: Vec::new(),
        }
    }

    #[inline]
    pub fn value(&self, t: f64, sharp: bool) -> f64 {
        let sum: f64 = if sharp {
            self.pulses
                .iter()
                .map(|p| p.height * p.sharp_envelope(t))
                .sum()
        } else {
            self.pulses.iter().map(|p| p.value(t)).sum()
        };
        self.base_amplitude * sum
    }
}

/// An idle-time violation between two consecutive pulses of one control.
#[derive(Debug, Clone, PartialEq)]
pub struct IdleViolation {
    pub parameter: ControlId,
    /// Indices of the two pulses in the parameter's (time-sorted) pulse list.
    pub first: usize,
    pub second: usize,
    pub gap: f64,
    pub required: f64,
}

impl fmt::Display for IdleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: gap {:.6e} between pulses {} and {} is below {:.6e}",
            self.parameter, self.gap, self.first, self.second, self.required
        )
    }
}

fn default_margin() -> f64 {
    DEFAULT_IDLE_MARGIN
}

/// Control schedules for a whole experiment, simulated over `[0, total_duration]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub total_duration: f64,
    #[serde(default = "default_margin")]
    pub idle_margin: f64,
    #[serde(default)]
    pub nonnegative_controls: bool,
    /// Evaluate envelopes as exact indicators (ε → 0).
    #[serde(default)]
    pub sharp: bool,
    pub parameters: Vec<ParamSchedule>,
}

impl Schedule {
    pub fn new(parameters: Vec<ParamSchedule>, total_duration: f64) -> Self {
        Self {
            total_duration,
            idle_margin: DEFAULT_IDLE_MARGIN,
            nonnegative_controls: false,
            sharp: false,
            parameters,
        }
    }

    /// Checks pulse validity, sorts pulses by `t_a`, and enforces the
    /// non-negative-controls flag and the total-duration bound.
    pub fn validate(&mut self) -> Result<()> {
        if !(self.total_duration > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total_duration must be positive, got {}",
                self.total_duration
            )));
        }
        if !(self.idle_margin > 0.0) {
            return Err(Error::InvalidParameter(
                "idle_margin must be positive".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for ps in &mut self.parameters {
            if !seen.insert(ps.parameter) {
                return Err(Error::InvalidParameter(format!(
                    "control {} scheduled twice",
                    ps.parameter
                )));
            }
            if !ps.base_amplitude.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "base amplitude of {} must be finite",
                    ps.parameter
                )));
            }
            for p in &ps.pulses {
                p.validate()?;
                if self.nonnegative_controls && p.height * ps.base_amplitude < 0.0 {
                    return Err(Error::InvalidPulse(format!(
                        "negative drive on {} with nonnegative_controls set",
                        ps.parameter
                    )));
                }
                let end = p.t_b + self.idle_margin * p.epsilon;
                if end > self.total_duration * (1.0 + 1e-12) {
                    return Err(Error::InvalidPulse(format!(
                        "pulse on {} ending at {} needs total_duration ≥ {end}",
                        ps.parameter, p.t_b
                    )));
                }
            }
            ps.pulses.sort_by(|a, b| a.t_a.total_cmp(&b.t_a));
        }
        Ok(())
    }

    pub fn param(&self, id: ControlId) -> Option<&ParamSchedule> {
        self.parameters.iter().find(|p| p.parameter == id)
    }

    pub fn controls(&self) -> impl Iterator<Item = ControlId> + '_ {
        self.parameters.iter().map(|p| p.parameter)
    }

    /// Value of one control at `t`, in energy units.
    pub fn value(&self, id: ControlId, t: f64) -> Result<f64> {
        self.param(id)
            .map(|p| p.value(t, self.sharp))
            .ok_or_else(|| Error::UnknownControl(id.to_string()))
    }

    /// All control values at `t`, in `parameters` order.
    #[inline]
    pub fn values_into(&self, t: f64, out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(&self.parameters) {
            *o = p.value(t, self.sharp);
        }
    }

    /// Same schedule with every envelope replaced by its indicator.
    pub fn ideal_limit(&self) -> Schedule {
        Schedule {
            sharp: true,
            ..self.clone()
        }
    }

    /// Pulse edges inside the schedule, sorted and de-duplicated. Only
    /// meaningful for sharp schedules, where the Hamiltonian jumps there.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .parameters
            .iter()
            .flat_map(|p| p.pulses.iter().flat_map(|q| [q.t_a, q.t_b]))
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    pub fn min_epsilon(&self) -> Option<f64> {
        self.pulses().map(|p| p.epsilon).min_by(f64::total_cmp)
    }

    pub fn min_width(&self) -> Option<f64> {
        self.pulses().map(|p| p.width()).min_by(f64::total_cmp)
    }

    pub fn pulses(&self) -> impl Iterator<Item = &RectPulse> + '_ {
        self.parameters.iter().flat_map(|p| p.pulses.iter())
    }

    /// Consecutive same-control pulses closer than `margin · ε`.
    ///
    /// The gap is measured edge to edge (`t_a` of the later pulse minus
    /// `t_b` of the earlier one) against the larger of the two ε values.
    pub fn validate_idle(&self, margin: f64) -> Vec<IdleViolation> {
        let mut out = Vec::new();
        for ps in &self.parameters {
            let mut order: Vec<usize> = (0..ps.pulses.len()).collect();
            order.sort_by(|&a, &b| ps.pulses[a].t_a.total_cmp(&ps.pulses[b].t_a));
            for w in order.windows(2) {
                let (a, b) = (&ps.pulses[w[0]], &ps.pulses[w[1]]);
                let gap = b.t_a - a.t_b;
                let required = margin * a.epsilon.max(b.epsilon);
                if gap < required * (1.0 - 1e-12) {
                    out.push(IdleViolation {
                        parameter: ps.parameter,
                        first: w[0],
                        second: w[1],
                        gap,
                        required,
                    });
                }
            }
        }
        out
    }
}

/// Value of `id` in `schedule` at `t`.
pub fn schedule_value(schedule: &Schedule, id: ControlId, t: f64) -> Result<f64> {
    schedule.value(id, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pulse(t_a: f64, t_b: f64, eps: f64) -> RectPulse {
        RectPulse::new(t_a, t_b, eps, 1.0).unwrap()
    }

    #[test]
    fn control_labels_round_trip() {
        for id in [
            ControlId::Bx(0),
            ControlId::By(1),
            ControlId::Bz(3),
            ControlId::exchange(1, 0),
            ControlId::ChargeEnergy(0),
            ControlId::Josephson(1),
        ] {
            assert_eq!(id.to_string().parse::<ControlId>().unwrap(), id);
        }
        assert_eq!(
            "J_21".parse::<ControlId>().unwrap(),
            ControlId::Exchange(0, 1)
        );
        assert_eq!(ControlId::exchange(0, 1).to_string(), "J_12");
        for bad in ["E_J0", "Q_1", "J_11", "B_x", "E_C1x"] {
            assert!(bad.parse::<ControlId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn rect_value_examples() {
        let p = pulse(0.0, 100.0, 0.1);
        assert!((p.value(50.0) - 1.0).abs() < 1e-12);
        let q = pulse(1.0, 3.0, 0.5);
        let expected = 0.5 * ((2.0f64).tanh() + ((3.0 - 1.5) / 0.25f64).tanh());
        assert!((q.value(1.5) - expected).abs() < 1e-15);
        assert!(q.value(1.5) >= 2.0f64.tanh());
        assert!((p.value(0.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn schedule_value_examples() {
        let empty = Schedule::new(vec![ParamSchedule::new(ControlId::Josephson(0), 1.0)], 10.0);
        assert_eq!(empty.value(ControlId::Josephson(0), 3.0).unwrap(), 0.0);
        assert!(matches!(
            empty.value(ControlId::Josephson(1), 3.0),
            Err(Error::UnknownControl(_))
        ));

        let eps = 0.05;
        let mut ps = ParamSchedule::new(ControlId::Bx(0), 2.0);
        ps.pulses.push(pulse(1.0, 2.0, eps));
        ps.pulses.push(pulse(2.0 + 10.0 * eps, 3.0, eps));
        let s = Schedule::new(vec![ps], 4.0);
        assert!((s.value(ControlId::Bx(0), 1.5).unwrap() - 2.0).abs() < 1e-12);
        let gap_mid = 2.0 + 5.0 * eps;
        assert!(s.value(ControlId::Bx(0), gap_mid).unwrap().abs() < 1e-6 * 2.0);
    }

    #[test]
    fn ideal_limit_is_indicator() {
        let mut ps = ParamSchedule::new(ControlId::Josephson(0), 0.7);
        ps.pulses.push(pulse(1.0, 2.0, 0.3));
        let s = Schedule::new(vec![ps], 6.0).ideal_limit();
        assert_eq!(s.value(ControlId::Josephson(0), 1.0001).unwrap(), 0.7);
        assert_eq!(s.value(ControlId::Josephson(0), 1.9999).unwrap(), 0.7);
        assert_eq!(s.value(ControlId::Josephson(0), 0.9999).unwrap(), 0.0);
        assert_eq!(s.value(ControlId::Josephson(0), 2.0001).unwrap(), 0.0);
    }

    #[test]
    fn idle_validation() {
        let eps = 0.01;
        let mut ps = ParamSchedule::new(ControlId::ChargeEnergy(0), 1.0);
        ps.pulses.push(pulse(1.0, 2.0, eps));
        ps.pulses.push(pulse(2.0 + 10.0 * eps, 3.0, eps));
        let mut s = Schedule::new(vec![ps], 4.0);
        assert!(s.validate_idle(10.0).is_empty());
        s.parameters[0].pulses[1] = pulse(2.0 + eps, 3.0, eps);
        let v = s.validate_idle(10.0);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].first, v[0].second), (0, 1));
        assert_eq!(v[0].parameter, ControlId::ChargeEnergy(0));
    }

    #[test]
    fn validate_rejects_bad_schedules() {
        let mut ps = ParamSchedule::new(ControlId::Bx(0), 1.0);
        ps.pulses.push(RectPulse {
            t_a: 1.0,
            t_b: 2.0,
            epsilon: 0.1,
            height: -1.0,
        });
        let mut s = Schedule::new(vec![ps.clone()], 5.0);
        s.nonnegative_controls = true;
        assert!(s.validate().is_err());
        s.nonnegative_controls = false;
        assert!(s.validate().is_ok());
        let mut short = Schedule::new(vec![ps], 2.5);
        assert!(short.validate().is_err());
        assert!(RectPulse::new(2.0, 1.0, 0.1, 1.0).is_err());
        assert!(RectPulse::new(1.0, 2.0, 0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn mirror_symmetry(t_a in -5.0f64..5.0, w in 0.1f64..5.0, eps in 0.01f64..1.0, dt in -3.0f64..3.0) {
            let p = pulse(t_a, t_a + w, eps);
            let m = p.midpoint();
            prop_assert!((p.value(m + dt) - p.value(2.0 * m - (m + dt))).abs() < 1e-12);
        }

        #[test]
        fn monotone_rise(t_a in -5.0f64..5.0, eps in 0.01f64..0.5, k in 4.5f64..20.0, s1 in 0.0f64..1.0, s2 in 0.0f64..1.0) {
            let p = pulse(t_a, t_a + k * eps, eps);
            let m = p.midpoint();
            let lo = t_a - 5.0 * eps;
            let (a, b) = (lo + s1.min(s2) * (m - lo), lo + s1.max(s2) * (m - lo));
            prop_assert!(p.value(a) <= p.value(b) + 1e-15);
        }

        #[test]
        fn converges_to_indicator(t in -2.0f64..4.0) {
            let edge_distance = t.abs().min((t - 2.0).abs());
            prop_assume!(edge_distance > 1e-3);
            let target = if t > 0.0 && t < 2.0 { 1.0 } else { 0.0 };
            let errs: Vec<f64> = [1e-2, 1e-3, 1e-5]
                .iter()
                .map(|&eps| (pulse(0.0, 2.0, eps).value(t) - target).abs())
                .collect();
            prop_assert!(errs[2] <= errs[0] + 1e-15);
            prop_assert!(errs[2] < 1e-12);
        }
    }
}
