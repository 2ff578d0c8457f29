//! Fixtures shared by the kernel benchmarks.

use qstab::jumpcode::{build_code, CodeVariant};
use qstab::perturb::{sample_uniform_chain, ChainModel};
use qstab::rng::seeded;
use qstab::trajectory::{EnsembleConfig, LindbladModel, ProtocolSchedule, TrajectoryOptions};
use qstab::{Result, StateVector};

pub fn random_state(n_qubits: usize, seed: u64) -> StateVector {
    StateVector::random(n_qubits, &mut seeded(seed)).expect("register size within the cap")
}

pub fn ising_chain(n_qubits: usize, eps: f64, seed: u64) -> ChainModel {
    sample_uniform_chain(n_qubits, eps, false, &mut seeded(seed)).expect("valid chain parameters")
}

/// Encoded `|+++>` under the combined flip/swap and recovery protocol.
pub fn combined_memory(trajectories: usize, total_time: f64) -> Result<EnsembleConfig> {
    let code = build_code(3, 0.0, CodeVariant::Tensor)?;
    let chain = ising_chain(8, 1e-4, 3);
    let amp = qstab::C64::from((1.0f64 / 8.0).sqrt());
    let logical = StateVector::from_amplitudes(3, vec![amp; 8])?;
    Ok(EnsembleConfig {
        model: LindbladModel::uniform(8, chain.hamiltonian()?, 1e-3)?,
        protocol: ProtocolSchedule::flip_swap(2.0, 2, Some(qstab::trajectory::recovery_duration(8)?))?,
        initial: code.encode(&logical)?,
        total_time,
        options: TrajectoryOptions::new(20.0),
        trajectories,
        master_seed: 1,
        keep_records: false,
    })
}
