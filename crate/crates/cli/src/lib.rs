//! Configuration parsing and experiment dispatch for the `qstab` command-line runner.

pub mod artifacts;
pub mod config;
pub mod experiments;

use std::path::PathBuf;

use anyhow::Result;

pub use artifacts::ArtifactWriter;
pub use config::{parse_config, parse_config_str, Experiment, ExperimentConfig};

/// Runs the configured experiment and returns the written files, sidecars included.
pub fn run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    config.validate()?;
    let mut out = ArtifactWriter::new(config)?;
    let f = match config.experiment {
        Experiment::CorrelationMatrix => experiments::correlation_matrix,
        Experiment::ParecFidelity => experiments::parec_fidelity,
        Experiment::NrdMemory => experiments::nrd_memory,
        Experiment::DecoupleScaling => experiments::decouple_scaling,
        Experiment::JumpcodeRecovery => experiments::jumpcode_recovery,
        Experiment::CombinedFigure5 => experiments::combined_figure5,
        Experiment::AnalyticCurves => experiments::analytic_curves,
        Experiment::ConstantsCheck => experiments::constants_check,
    };
    f(config, &mut out)?;
    Ok(out.into_files())
}
