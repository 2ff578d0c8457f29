//! Experiment configuration files.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use qstab::decouple::{DecouplingSet, ScheduleKind};
use qstab::jumpcode::CodeVariant;
use qstab::trajectory::Figure5Params;
use qstab::PauliString;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    CorrelationMatrix,
    ParecFidelity,
    NrdMemory,
    DecoupleScaling,
    JumpcodeRecovery,
    CombinedFigure5,
    AnalyticCurves,
    ConstantsCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::CorrelationMatrix,
        Experiment::ParecFidelity,
        Experiment::NrdMemory,
        Experiment::DecoupleScaling,
        Experiment::JumpcodeRecovery,
        Experiment::CombinedFigure5,
        Experiment::AnalyticCurves,
        Experiment::ConstantsCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::CorrelationMatrix => "correlation-matrix",
            Experiment::ParecFidelity => "parec-fidelity",
            Experiment::NrdMemory => "nrd-memory",
            Experiment::DecoupleScaling => "decouple-scaling",
            Experiment::JumpcodeRecovery => "jumpcode-recovery",
            Experiment::CombinedFigure5 => "combined-figure5",
            Experiment::AnalyticCurves => "analytic-curves",
            Experiment::ConstantsCheck => "constants-check",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Experiment::CorrelationMatrix => "GUE-averaged gate correlation matrix of the QFT, optionally Pauli-rewritten",
            Experiment::ParecFidelity => "iterated QFT fidelity under a static GUE error, with and without rewriting",
            Experiment::NrdMemory => "random decoupling of an idle register against the memory bound",
            Experiment::DecoupleScaling => "fidelity traces and fitted decay exponents for each selection rule",
            Experiment::JumpcodeRecovery => "post-recovery fidelity for every jump position, plus codewords",
            Experiment::CombinedFigure5 => "unprotected, decoupled, jump-coded and combined memories under decay",
            Experiment::AnalyticCurves => "closed-form fidelity predictions on a time grid",
            Experiment::ConstantsCheck => "closed-form code constants against exhaustive permutation averages",
        }
    }
}

/// A Pauli set written as a list of words such as `"XIZ"`; absent means the full Pauli group.
pub type PauliWords = Option<Vec<String>>;

pub fn decoupling_set(n_qubits: usize, words: &PauliWords) -> Result<DecouplingSet> {
    Ok(match words {
        None => DecouplingSet::pauli_group(n_qubits)?,
        Some(words) => {
            let paulis = words
                .iter()
                .map(|w| w.parse::<PauliString>().with_context(|| format!("invalid Pauli word {w:?}")))
                .collect::<Result<Vec<_>>>()?;
            DecouplingSet::from_paulis(n_qubits, paulis)?
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircuitParams {
    pub n_qubits: usize,
    /// GUE strength `delta`.
    pub delta: f64,
    pub iterations: usize,
    /// Monte-Carlo draws of the Pauli rewriting.
    pub samples: usize,
    /// Correlation matrix of the rewritten layout instead of the bare circuit.
    pub parec: bool,
    pub pauli_set: PauliWords,
}

impl Default for CircuitParams {
    fn default() -> Self {
        Self {
            n_qubits: 4,
            delta: 1e-3,
            iterations: 50,
            samples: 1000,
            parec: false,
            pauli_set: None,
        }
    }
}

impl CircuitParams {
    fn validate(&self) -> Result<()> {
        ensure!((1..=14).contains(&self.n_qubits), "circuit.n_qubits must be in 1..=14, got {}", self.n_qubits);
        ensure!(self.delta.is_finite() && self.delta >= 0.0, "circuit.delta must be >= 0, got {}", self.delta);
        ensure!(self.iterations >= 1, "circuit.iterations must be >= 1");
        ensure!(self.samples >= 1, "circuit.samples must be >= 1");
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecouplingParams {
    pub n_qubits: usize,
    /// GUE strength of the idle Hamiltonian `H0`.
    pub strength: f64,
    pub dt: f64,
    pub total_time: f64,
    pub realizations: usize,
    pub schedules: Vec<ScheduleKind>,
    pub set: PauliWords,
    /// Outer set of the embedded schedules.
    pub outer_set: PauliWords,
}

impl Default for DecouplingParams {
    fn default() -> Self {
        Self {
            n_qubits: 2,
            strength: 0.02,
            dt: 1.0,
            total_time: 1600.0,
            realizations: 32,
            schedules: vec![
                ScheduleKind::Pdd,
                ScheduleKind::Sdd,
                ScheduleKind::Nrd,
                ScheduleKind::Emd,
                ScheduleKind::Semd,
                ScheduleKind::RandomPath,
            ],
            set: None,
            outer_set: None,
        }
    }
}

impl DecouplingParams {
    fn validate(&self) -> Result<()> {
        ensure!((1..=14).contains(&self.n_qubits), "decoupling.n_qubits must be in 1..=14, got {}", self.n_qubits);
        ensure!(self.strength.is_finite() && self.strength >= 0.0, "decoupling.strength must be >= 0");
        ensure!(self.dt > 0.0 && self.total_time > 0.0, "decoupling.dt and decoupling.total_time must be > 0");
        let steps = self.total_time / self.dt;
        ensure!((steps - steps.round()).abs() < 1e-9, "decoupling.total_time must be a multiple of decoupling.dt");
        ensure!(self.realizations >= 1, "decoupling.realizations must be >= 1");
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JumpCodeParams {
    pub n_logical: usize,
    pub variant: CodeVariant,
    pub phase: f64,
    /// Random logical states tested per jump position.
    pub states: usize,
}

impl Default for JumpCodeParams {
    fn default() -> Self {
        Self {
            n_logical: 3,
            variant: CodeVariant::Tensor,
            phase: 0.0,
            states: 10,
        }
    }
}

impl JumpCodeParams {
    fn validate(&self) -> Result<()> {
        ensure!(self.phase.is_finite(), "jumpcode.phase must be finite");
        ensure!(self.states >= 1, "jumpcode.states must be >= 1");
        if self.variant == CodeVariant::Tensor {
            ensure!((1..=6).contains(&self.n_logical), "jumpcode.n_logical must be in 1..=6");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticParams {
    pub n_physical: usize,
    pub kappa: f64,
    /// Defaults to the duration of the recovery circuit on `n_physical` qubits.
    pub recovery_time: Option<f64>,
    pub dt: f64,
    pub epsilon: f64,
    /// Defaults to the chain average `(2 n - 1) epsilon^2`.
    pub c2: Option<f64>,
    /// Defaults to the chain average of `c1^2`, `epsilon^2 / (n - 1)`.
    pub c3: Option<f64>,
    pub total_time: f64,
    pub points: usize,
}

impl Default for AnalyticParams {
    fn default() -> Self {
        Self {
            n_physical: 8,
            kappa: 1e-3,
            recovery_time: None,
            dt: 4.0,
            epsilon: 1e-4,
            c2: None,
            c3: None,
            total_time: 2000.0,
            points: 101,
        }
    }
}

impl AnalyticParams {
    fn validate(&self) -> Result<()> {
        ensure!(self.n_physical >= 2, "analytic.n_physical must be >= 2");
        ensure!(self.kappa.is_finite() && self.kappa >= 0.0, "analytic.kappa must be >= 0, got {}", self.kappa);
        ensure!(self.epsilon.is_finite() && self.epsilon >= 0.0, "analytic.epsilon must be >= 0");
        ensure!(self.dt > 0.0 && self.total_time > 0.0, "analytic.dt and analytic.total_time must be > 0");
        ensure!(self.points >= 2, "analytic.points must be >= 2");
        if let Some(t) = self.recovery_time {
            ensure!(t >= 0.0, "analytic.recovery_time must be >= 0");
        }
        if let (Some(c2), Some(c3)) = (self.c2, self.c3) {
            ensure!(c3 <= c2, "analytic.c3 must not exceed analytic.c2");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantsParams {
    pub n_logical: Vec<usize>,
    pub draws: usize,
    pub epsilon: f64,
}

impl Default for ConstantsParams {
    fn default() -> Self {
        Self {
            n_logical: vec![1, 2, 3],
            draws: 20,
            epsilon: 0.1,
        }
    }
}

impl ConstantsParams {
    fn validate(&self) -> Result<()> {
        ensure!(
            self.n_logical.iter().all(|n| (1..=3).contains(n)),
            "constants.n_logical entries must be in 1..=3 (exhaustive averages need n_physical <= 8)"
        );
        ensure!(self.draws >= 1, "constants.draws must be >= 1");
        ensure!(self.epsilon.is_finite() && self.epsilon >= 0.0, "constants.epsilon must be >= 0");
        Ok(())
    }
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub circuit: CircuitParams,
    #[serde(default)]
    pub decoupling: DecouplingParams,
    #[serde(default)]
    pub jumpcode: JumpCodeParams,
    #[serde(default)]
    pub figure5: Figure5Params,
    #[serde(default)]
    pub analytic: AnalyticParams,
    #[serde(default)]
    pub constants: ConstantsParams,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            seed: 0,
            output: default_output(),
            circuit: CircuitParams::default(),
            decoupling: DecouplingParams::default(),
            jumpcode: JumpCodeParams::default(),
            figure5: Figure5Params::default(),
            analytic: AnalyticParams::default(),
            constants: ConstantsParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        self.decoupling.validate()?;
        self.jumpcode.validate()?;
        self.figure5.validate().context("invalid figure5 section")?;
        self.analytic.validate()?;
        self.constants.validate()?;
        decoupling_set(self.circuit.n_qubits, &self.circuit.pauli_set).context("invalid circuit.pauli_set")?;
        decoupling_set(self.decoupling.n_qubits, &self.decoupling.set).context("invalid decoupling.set")?;
        decoupling_set(self.decoupling.n_qubits, &self.decoupling.outer_set)
            .context("invalid decoupling.outer_set")?;
        Ok(())
    }
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = serde_json::from_str(text).context("config does not match the schema")?;
    config.validate()?;
    Ok(config)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    if !path.exists() {
        bail!("config file {} does not exist", path.display());
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config_str(&text).with_context(|| format!("in {}", path.display()))
}
