//! Parallel trajectory ensembles with a deterministic reduction.

use rayon::prelude::*;

use super::evolve::{evolve_trajectory, TrajectoryOptions, TrajectoryRecord};
use super::model::LindbladModel;
use super::schedule::ProtocolSchedule;
use crate::error::{Error, Result};
use crate::qcore::StateVector;
use crate::rng::stream;

#[derive(Clone, Debug)]
pub struct EnsembleConfig {
    pub model: LindbladModel,
    pub protocol: ProtocolSchedule,
    pub initial: StateVector,
    pub total_time: f64,
    pub options: TrajectoryOptions,
    pub trajectories: usize,
    pub master_seed: u64,
    /// Return every trajectory record alongside the averages.
    pub keep_records: bool,
}

#[derive(Clone, Debug)]
pub struct EnsembleResult {
    pub times: Vec<f64>,
    pub fidelity_mean: Vec<f64>,
    pub fidelity_stderr: Vec<f64>,
    pub n_jumps_mean: Vec<f64>,
    pub records: Vec<TrajectoryRecord>,
}

impl EnsembleResult {
    /// `time,fidelity_mean,fidelity_stderr,n_jumps_mean` with header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,fidelity_mean,fidelity_stderr,n_jumps_mean\n");
        for i in 0..self.times.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.times[i], self.fidelity_mean[i], self.fidelity_stderr[i], self.n_jumps_mean[i]
            ));
        }
        out
    }

    pub fn final_fidelity(&self) -> f64 {
        *self.fidelity_mean.last().expect("ensembles have at least one sample")
    }
}

/// Every trajectory of the ensemble, in index order. Trajectory `i` draws from stream `i`.
pub fn run_trajectories(config: &EnsembleConfig) -> Result<Vec<TrajectoryRecord>> {
    if config.trajectories == 0 {
        return Err(Error::InvalidParameter("need at least one trajectory".into()));
    }
    (0..config.trajectories as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(config.master_seed, i);
            let mut r = evolve_trajectory(
                &config.model,
                &config.protocol,
                &config.initial,
                config.total_time,
                &config.options,
                &mut rng,
            )?;
            r.seed = Some((config.master_seed, i));
            Ok(r)
        })
        .collect()
}

/// Mean and standard error of the fidelity at each grid time.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<EnsembleResult> {
    let records = run_trajectories(config)?;
    let mut result = summarize(&records);
    if config.keep_records {
        result.records = records;
    }
    Ok(result)
}

/// Averages over records sharing a sample grid.
pub fn summarize(records: &[TrajectoryRecord]) -> EnsembleResult {
    let m = records.len() as f64;
    let times: Vec<f64> = records[0].samples.iter().map(|s| s.time).collect();
    let mut mean = vec![0.0; times.len()];
    let mut stderr = vec![0.0; times.len()];
    let mut jumps = vec![0.0; times.len()];
    for (i, &t) in times.iter().enumerate() {
        let values: Vec<f64> = records.iter().map(|r| r.samples[i].fidelity).collect();
        let mu = values.iter().sum::<f64>() / m;
        mean[i] = mu;
        if records.len() > 1 {
            let var = values.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (m - 1.0);
            stderr[i] = (var / m).sqrt();
        }
        jumps[i] = records.iter().map(|r| r.jumps_until(t) as f64).sum::<f64>() / m;
    }
    EnsembleResult {
        times,
        fidelity_mean: mean,
        fidelity_stderr: stderr,
        n_jumps_mean: jumps,
        records: Vec::new(),
    }
}
