//! Experiment configuration: one JSON document per run.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pulseq::gatecomp::{
    solve_coupling, Amplitudes, CouplingParams, ModelKind, PulseOptions, DEFAULT_M, DEFAULT_N,
};
use pulseq::pulse::{Schedule, DEFAULT_IDLE_MARGIN};
use pulseq::qcore::StateVector;

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub format_version: u32,
    pub model: ModelKind,
    #[serde(default = "two")]
    pub qubits: usize,
    #[serde(default)]
    pub amplitudes: Amplitudes,
    #[serde(default)]
    pub coupling: CouplingConfig,
    #[serde(default)]
    pub pulse: PulseConfig,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub experiment: Experiment,
    /// Explicit schedule, used instead of compiling `experiment.gate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magnus: Option<MagnusSection>,
    #[serde(default)]
    pub report: ReportSection,
    #[serde(default)]
    pub output: OutputSection,
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingConfig {
    pub m: i64,
    pub n: i64,
}

impl Default for CouplingConfig {
    fn default() -> Self {
        Self {
            m: DEFAULT_M,
            n: DEFAULT_N,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseConfig {
    /// Absolute ramp width.
    pub epsilon: Option<f64>,
    /// Ramp width in units of τ_op; exclusive with `epsilon`.
    pub epsilon_over_tau_op: Option<f64>,
    pub idle_margin: Option<f64>,
    pub nonnegative_controls: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub dt: Option<f64>,
    /// Steps between trajectory rows.
    pub record_stride: Option<usize>,
    pub renormalize_every: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateName {
    Cnot,
    Cpf,
    Hadamard,
    UPh,
    #[serde(rename = "u_2b")]
    U2b,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Experiment {
    pub gate: Option<GateName>,
    /// Control then target for two-qubit gates.
    pub operands: Vec<usize>,
    /// `γ` of `u_2b`.
    pub angle: Option<f64>,
    /// Input basis state, qubit 0 first.
    pub input: Option<String>,
    pub epsilon_grid: Vec<f64>,
    /// Models for `sweep`; defaults to `model`.
    pub models: Vec<ModelKind>,
    pub perturbative: bool,
}

impl Default for Experiment {
    fn default() -> Self {
        Self {
            gate: None,
            operands: vec![0, 1],
            angle: None,
            input: None,
            epsilon_grid: Vec::new(),
            models: Vec::new(),
            perturbative: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MagnusSource {
    /// A segment of the compiled gate.
    Segment,
    /// Both Josephson energies ramped linearly over `[0, 2ε]`.
    LinearRamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MagnusWindow {
    /// `[t_a − ε, t_a + ε]`, the rising edge.
    Ramp,
    /// The fully-on part, `idle_margin·ε` inside each edge.
    Plateau,
    /// The segment plus half the idle gap on each side.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MagnusSection {
    pub source: MagnusSource,
    #[serde(default)]
    pub segment: usize,
    #[serde(default = "full_window")]
    pub window: MagnusWindow,
    #[serde(default)]
    pub rel_tol: Option<f64>,
}

fn full_window() -> MagnusWindow {
    MagnusWindow::Full
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportSection {
    /// Josephson energy in μeV for the unit conversion.
    pub e_j_uev: f64,
}

impl Default for ReportSection {
    fn default() -> Self {
        Self { e_j_uev: 50.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, why: String| Err(CliError::Config(format!("{field}: {why}")));
        if self.format_version != FORMAT_VERSION {
            return bad(
                "format_version",
                format!("expected {FORMAT_VERSION}, got {}", self.format_version),
            );
        }
        if self.qubits == 0 {
            return bad("qubits", "must be at least 1".into());
        }
        if let Some(q) = self.experiment.operands.iter().find(|&&q| q >= self.qubits) {
            return bad(
                "experiment.operands",
                format!("qubit {q} out of range for {} qubits", self.qubits),
            );
        }
        if let Some(bits) = &self.experiment.input {
            if bits.len() != self.qubits || !bits.chars().all(|c| c == '0' || c == '1') {
                return bad(
                    "experiment.input",
                    format!("expected {} binary digits, got {bits:?}", self.qubits),
                );
            }
        }
        if self.pulse.epsilon.is_some() && self.pulse.epsilon_over_tau_op.is_some() {
            return bad("pulse", "give either epsilon or epsilon_over_tau_op".into());
        }
        if let Some(dt) = self.integrator.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad("integrator.dt", format!("must be positive, got {dt}"));
            }
        }
        if self.experiment.gate.is_some() && self.schedule.is_some() {
            return bad("schedule", "give either experiment.gate or schedule".into());
        }
        if let Some(s) = &self.schedule {
            if let Some(c) = s
                .parameters
                .iter()
                .map(|p| p.parameter)
                .find(|c| c.max_qubit() >= self.qubits)
            {
                return bad(
                    "schedule",
                    format!("control {c} refers to a qubit beyond {}", self.qubits),
                );
            }
        }
        self.amplitudes
            .validate()
            .map_err(|e| CliError::Config(format!("amplitudes: {e}")))?;
        Ok(())
    }

    pub fn coupling_params(&self) -> Result<CouplingParams, CliError> {
        solve_coupling(self.coupling.m, self.coupling.n)
            .map_err(|e| CliError::Config(format!("coupling: {e}")))
    }

    /// Ramp width and layout options for `kind`.
    pub fn pulse_options(&self, kind: ModelKind) -> Result<PulseOptions, CliError> {
        let defaults = PulseOptions::default_for(kind, &self.amplitudes);
        let tau_op = self.amplitudes.tau_op(kind);
        let epsilon = match (self.pulse.epsilon, self.pulse.epsilon_over_tau_op) {
            (Some(e), _) => e,
            (None, Some(x)) => x * tau_op,
            (None, None) => defaults.epsilon,
        };
        let opts = PulseOptions {
            epsilon,
            idle_margin: self.pulse.idle_margin.unwrap_or(DEFAULT_IDLE_MARGIN),
            nonnegative_controls: self
                .pulse
                .nonnegative_controls
                .unwrap_or(defaults.nonnegative_controls),
        };
        opts.validate()
            .map_err(|e| CliError::Config(format!("pulse: {e}")))?;
        Ok(opts)
    }

    /// Input state; all zeros if not given.
    pub fn input_state(&self) -> Result<StateVector, CliError> {
        let bits = self
            .experiment
            .input
            .clone()
            .unwrap_or_else(|| "0".repeat(self.qubits));
        StateVector::from_bits(&bits)
            .map_err(|e| CliError::Config(format!("experiment.input: {e}")))
    }

    pub fn sweep_models(&self) -> Vec<ModelKind> {
        if self.experiment.models.is_empty() {
            vec![self.model]
        } else {
            self.experiment.models.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg =
            parse(r#"{"format_version": 1, "model": "charge", "experiment": {"gate": "cnot"}}"#)
                .unwrap();
        assert_eq!(cfg.qubits, 2);
        assert_eq!(cfg.coupling, CouplingConfig { m: 1, n: 3 });
        let opts = cfg.pulse_options(ModelKind::Charge).unwrap();
        assert!((opts.epsilon - 5e-4).abs() < 1e-15);
        assert_eq!(cfg.input_state().unwrap().amplitudes()[0].re, 1.0);
    }

    #[test]
    fn rejects_unknown_and_inconsistent_fields() {
        assert!(parse(r#"{"format_version": 1, "model": "charge", "colour": 3}"#).is_err());
        assert!(parse(r#"{"format_version": 2, "model": "charge"}"#).is_err());
        assert!(parse(
            r#"{"format_version": 1, "model": "charge", "experiment": {"operands": [0, 2]}}"#
        )
        .is_err());
        assert!(
            parse(r#"{"format_version": 1, "model": "ideal", "experiment": {"input": "1"}}"#)
                .is_err()
        );
        assert!(parse(
            r#"{"format_version": 1, "model": "ideal", "pulse": {"epsilon": 0.1, "epsilon_over_tau_op": 0.1}}"#
        )
        .is_err());
    }

    #[test]
    fn epsilon_in_tau_op_units() {
        let cfg = parse(
            r#"{"format_version": 1, "model": "charge", "pulse": {"epsilon_over_tau_op": 0.5}}"#,
        )
        .unwrap();
        assert!((cfg.pulse_options(ModelKind::Charge).unwrap().epsilon - 0.25).abs() < 1e-15);
        assert!((cfg.pulse_options(ModelKind::Ideal).unwrap().epsilon - 0.5).abs() < 1e-15);
    }
}
