//! Quantum-trajectory simulation of decaying registers under decoupling and detected-jump
//! correction.

mod ensemble;
mod evolve;
mod figure5;
mod model;
mod schedule;

pub use ensemble::{run_ensemble, run_trajectories, summarize, EnsembleConfig, EnsembleResult};
pub use evolve::{evolve_trajectory, FidelitySample, JumpEvent, TrajectoryOptions, TrajectoryRecord};
pub use figure5::{figure5, Figure5Params, Figure5Result};
pub use model::LindbladModel;
pub use schedule::{
    in_window, pulse_grid, recovery_duration, schedule_events, Event, EventKind, ProtocolSchedule, PulseProtocol,
    TIME_EPS,
};
