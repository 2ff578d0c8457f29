//! Exact dense simulation of register stabilization against static imperfections
//! and spontaneous decay.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: state vectors, Pauli strings, dense operators and fidelity measures.
//! - [`perturb`]: Heisenberg-chain and GUE static-imperfection models.
//! - [`decouple`]: decoupling sets, selection rules and toggled-frame propagation.
//! - [`algos`]: gate sequences (QFT), the Pauli-random rewriting of a circuit,
//!   correlation matrices and the second-order fidelity amplitude.
//! - [`jumpcode`]: detected-jump codes, recovery, flip/swap decoupling and the
//!   permutation-averaged coupling constants.
//! - [`trajectory`]: quantum-trajectory unraveling of spontaneous decay with the
//!   combined flip/swap + recovery protocol.
//! - [`analytics`]: closed-form fidelity predictions.
//!
//! Conventions: `hbar = 1`, times in units of the elementary gate time, and qubit 0
//! is the most significant bit of a basis-state index.

pub mod algos;
pub mod analytics;
pub mod decouple;
pub mod error;
pub mod jumpcode;
pub mod perturb;
pub mod qcore;
pub mod rng;
pub mod tol;
pub mod trajectory;

pub use error::{Error, Result};
pub use qcore::{Operator, Pauli, PauliString, Phase, StateVector, C64};
